#include "bergman/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace bergman {

bool divergence_trend(const std::vector<double>& v) {
    if (v.size() < 5) return false;
    std::size_t n = v.size();
    for (std::size_t i = n - 4; i < n; ++i)
        if (!(v[i] > v[i - 1])) return false;
    return v[n - 1] > 4.0 * v[n - 5];
}

bool decline_to_one_trend(const std::vector<double>& v, double decline_factor) {
    if (v.size() < 5) return false;
    std::size_t n = v.size();
    for (std::size_t i = n - 4; i < n; ++i)
        if (!(v[i] < v[i - 1])) return false;
    double first = v[n - 5] - 1.0, last = v[n - 1] - 1.0;
    if (!(last > 0.0)) return true;
    return first / last > decline_factor;
}

void RatioReport::finalize(double band_limit) {
    verdict = BandVerdict{};
    verdict.limit = band_limit;
    std::vector<double> ratios;
    for (const auto& row : rows)
        if (!row.degenerate) ratios.push_back(row.ratio);
    if (ratios.empty()) return;
    verdict.min_ratio = *std::min_element(ratios.begin(), ratios.end());
    verdict.max_ratio = *std::max_element(ratios.begin(), ratios.end());
    verdict.band = verdict.min_ratio > 0.0 ? verdict.max_ratio / verdict.min_ratio
                                           : std::numeric_limits<double>::infinity();
    verdict.within_band = verdict.band <= band_limit;
    verdict.trend = divergence_trend(ratios);
    verdict.passed = two_sided ? (verdict.within_band && !verdict.trend)
                               : !verdict.trend;
}

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

nlohmann::ordered_json to_json(const RatioRow& row) {
    nlohmann::ordered_json j;
    j["key"] = row.key;
    if (!row.label.empty()) j["label"] = row.label;
    j["lhs"] = row.lhs;
    j["rhs"] = row.rhs;
    j["ratio"] = row.ratio;
    if (row.degenerate) j["degenerate"] = true;
    for (const auto& [k, v] : row.extras) j[k] = v;
    return j;
}

nlohmann::ordered_json to_json(const RatioReport& report) {
    nlohmann::ordered_json j;
    j["title"] = report.title;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) rows.push_back(to_json(row));
    j["rows"] = rows;
    nlohmann::ordered_json v;
    v["min_ratio"] = report.verdict.min_ratio;
    v["max_ratio"] = report.verdict.max_ratio;
    v["band"] = report.verdict.band;
    v["band_limit"] = report.verdict.limit;
    v["within_band"] = report.verdict.within_band;
    v["divergence_trend"] = report.verdict.trend;
    v["two_sided"] = report.two_sided;
    v["passed"] = report.verdict.passed;
    j["summary"] = v;
    if (report.truncated) j["truncated"] = true;
    if (!report.notes.empty()) j["notes"] = report.notes;
    if (!report.provenance.empty()) {
        nlohmann::ordered_json p;
        for (const auto& [k, val] : report.provenance) p[k] = val;
        j["provenance"] = p;
    }
    return j;
}

std::string to_csv(const RatioReport& report) {
    // stable column set: key,label,lhs,rhs,ratio,degenerate,then extras of row 0
    std::string out = "key,label,lhs,rhs,ratio,degenerate";
    std::vector<std::string> extra_keys;
    if (!report.rows.empty())
        for (const auto& [k, v] : report.rows.front().extras) {
            extra_keys.push_back(k);
            out += "," + csv_field(k);
        }
    out += "\r\n";
    for (const auto& row : report.rows) {
        out += csv_num(row.key) + "," + csv_field(row.label) + "," + csv_num(row.lhs) +
               "," + csv_num(row.rhs) + "," + csv_num(row.ratio) + "," +
               (row.degenerate ? "1" : "0");
        for (const auto& want : extra_keys) {
            double val = 0.0;
            for (const auto& [k, v] : row.extras)
                if (k == want) val = v;
            out += "," + csv_num(val);
        }
        out += "\r\n";
    }
    return out;
}

}  // namespace bergman
