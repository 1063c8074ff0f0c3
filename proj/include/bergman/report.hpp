#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace bergman {

/// Last-5-points divergence test: monotone increase with total growth > 4x.
/// The falsifiable content of an asymptotic "~" claim on a finite grid.
bool divergence_trend(const std::vector<double>& ordered_values);

/// Mirror test for ratios that should stay away from 1: monotone decline of
/// (value - 1) by more than decline_factor over the last 5 points.
bool decline_to_one_trend(const std::vector<double>& ordered_values,
                          double decline_factor = 1.15);

struct RatioRow {
    double key = 0.0;       // grid coordinate: |z|, s, k, R, ...
    std::string label;      // symbol or weight tag when the grid is not numeric
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool degenerate = false;  // excluded from band statistics (0/0 rows)
    std::vector<std::pair<std::string, double>> extras;
};

struct BandVerdict {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    double band = 0.0;  // max/min over non-degenerate rows
    double limit = 50.0;
    bool within_band = false;
    bool trend = false;  // divergence trend over the last rows
    bool passed = false;
};

/// Grid of (parameter, LHS, RHS, ratio) rows with min/max summary: the
/// artifact's verdict unit for every two-sided estimate.
struct RatioReport {
    std::string title;
    std::vector<RatioRow> rows;
    BandVerdict verdict;
    bool two_sided = true;  // false: only "ratio bounded above" is asserted
    bool truncated = false; // grid cut short (tail underflow etc.)
    std::vector<std::string> notes;
    std::vector<std::pair<std::string, double>> provenance;

    /// Computes the verdict from the non-degenerate rows.
    void finalize(double band_limit = 50.0);
};

nlohmann::ordered_json to_json(const RatioRow& row);
nlohmann::ordered_json to_json(const RatioReport& report);
std::string to_csv(const RatioReport& report);

/// RFC-4180 field quoting.
std::string csv_field(const std::string& s);
std::string csv_num(double v);

}  // namespace bergman
