#include "bergman/weight_classes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "bergman/fft.hpp"
#include "bergman/parallel.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

std::string to_string(ClassVerdict v) {
    switch (v) {
        case ClassVerdict::MemberConsistent: return "member-consistent";
        case ClassVerdict::NonMemberConsistent: return "non-member-consistent";
        default: return "inconclusive";
    }
}

nlohmann::ordered_json to_json(const ClassReport& report) {
    nlohmann::ordered_json j;
    j["class"] = report.class_name;
    j["weight"] = report.weight_spec;
    j["grid"] = report.grid;
    j["ratios"] = report.ratios;
    j["observed_constant"] = report.observed_constant;
    if (report.used_K > 0.0) j["K"] = report.used_K;
    j["verdict"] = to_string(report.verdict);
    j["trend_note"] = report.trend_note;
    if (report.truncated) j["truncated"] = true;
    return j;
}

std::vector<double> dyadic_radii(int kmax) {
    std::vector<double> grid;
    for (int k = 1; k <= kmax; ++k) grid.push_back(1.0 - std::ldexp(1.0, -k));
    return grid;
}

namespace {

void check_radius_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw DomainError("empty probe grid");
    for (double r : grid)
        if (!(r >= 0.0) || !(r < 1.0)) throw DomainError("probe radius outside [0,1)");
    if (*std::max_element(grid.begin(), grid.end()) < 0.999)
        throw DomainError("probe grid must reach at least 0.999");
}

std::string decade_note(const std::vector<double>& grid,
                        const std::vector<double>& ratios, bool sup) {
    if (ratios.empty()) return "no grid points evaluated";
    auto agg = [&](std::size_t from) {
        double acc = ratios[from];
        for (std::size_t i = from; i < ratios.size(); ++i)
            acc = sup ? std::max(acc, ratios[i]) : std::min(acc, ratios[i]);
        return acc;
    };
    std::size_t top = ratios.size() - std::min<std::size_t>(ratios.size(), 5);
    char buf[160];
    std::snprintf(buf, sizeof buf, "full-grid %s %.6g, top-decade %s %.6g",
                  sup ? "sup" : "inf", agg(0), sup ? "sup" : "inf", agg(top));
    (void)grid;
    return buf;
}

}  // namespace

ClassReport dhat_report(const RadialWeight& w, std::vector<double> r_grid) {
    if (r_grid.empty()) r_grid = dyadic_radii();
    check_radius_grid(r_grid);
    std::sort(r_grid.begin(), r_grid.end());

    ClassReport report;
    report.class_name = "Dhat";
    report.weight_spec = w.spec();
    for (double r : r_grid) {
        double ratio;
        try {
            ratio = w.tail(r) / w.tail(0.5 * (1.0 + r));
        } catch (const TailUnderflowError&) {
            report.truncated = true;
            break;
        }
        if (!std::isfinite(ratio)) {
            report.truncated = true;
            break;
        }
        report.grid.push_back(r);
        report.ratios.push_back(ratio);
    }
    if (report.ratios.empty()) {
        report.verdict = ClassVerdict::Inconclusive;
        report.trend_note = "tail underflow before any probe";
        return report;
    }
    report.observed_constant =
        *std::max_element(report.ratios.begin(), report.ratios.end());
    bool diverges = divergence_trend(report.ratios);
    // a truncated grid means the ratio blew past double range: divergence
    if (report.truncated && report.ratios.size() >= 2 &&
        report.ratios.back() > 4.0 * report.ratios.front())
        diverges = true;
    report.verdict = diverges ? ClassVerdict::NonMemberConsistent
                              : ClassVerdict::MemberConsistent;
    report.trend_note = decade_note(report.grid, report.ratios, true);
    return report;
}

namespace {

ClassReport lower_doubling_report(const std::string& class_name,
                                  const std::string& weight_spec,
                                  const std::vector<double>& grid,
                                  const std::vector<double>& K_candidates,
                                  const std::function<double(double key, double K)>& ratio_fn) {
    ClassReport report;
    report.class_name = class_name;
    report.weight_spec = weight_spec;

    double best_C = 0.0, best_K = 0.0;
    std::vector<double> best_ratios;
    std::vector<double> best_grid;
    bool any_member = false, any_ok = false;
    for (double K : K_candidates) {
        if (!(K > 1.0)) throw DomainError("doubling candidates require K > 1");
        std::vector<double> ratios, used;
        bool truncated = false;
        for (double key : grid) {
            double ratio;
            try {
                ratio = ratio_fn(key, K);
            } catch (const TailUnderflowError&) {
                truncated = true;
                break;
            }
            if (!std::isfinite(ratio)) {
                truncated = true;
                break;
            }
            ratios.push_back(ratio);
            used.push_back(key);
        }
        if (ratios.empty()) continue;
        any_ok = true;
        double C = *std::min_element(ratios.begin(), ratios.end());
        bool member = C > 1.05 && !decline_to_one_trend(ratios);
        if ((member && !any_member) || (member == any_member && C > best_C) ||
            best_K == 0.0) {
            best_C = C;
            best_K = K;
            best_ratios = ratios;
            best_grid = used;
            report.truncated = truncated;
        }
        any_member = any_member || member;
    }
    report.grid = best_grid;
    report.ratios = best_ratios;
    report.observed_constant = best_C;
    report.used_K = best_K;
    if (!any_ok)
        report.verdict = ClassVerdict::Inconclusive;
    else
        report.verdict = any_member ? ClassVerdict::MemberConsistent
                                    : ClassVerdict::NonMemberConsistent;
    report.trend_note = decade_note(report.grid, report.ratios, false);
    return report;
}

}  // namespace

ClassReport dcheck_report(const RadialWeight& w, std::vector<double> r_grid,
                          std::vector<double> K_candidates) {
    if (r_grid.empty()) r_grid = dyadic_radii();
    if (K_candidates.empty()) K_candidates = {2.0, 4.0, 8.0, 16.0};
    check_radius_grid(r_grid);
    std::sort(r_grid.begin(), r_grid.end());
    return lower_doubling_report("Dcheck", w.spec(), r_grid, K_candidates,
                                 [&](double r, double K) {
                                     return w.tail(r) /
                                            w.tail(1.0 - (1.0 - r) / K);
                                 });
}

ClassReport m_report(const RadialWeight& w, std::vector<double> x_grid,
                     std::vector<double> K_candidates) {
    if (x_grid.empty())
        for (int j = 0; j <= 10; ++j) x_grid.push_back(std::ldexp(1.0, j));
    if (K_candidates.empty()) K_candidates = {2.0, 4.0, 8.0, 16.0};
    for (double x : x_grid)
        if (!(x >= 1.0)) throw DomainError("moment doubling grid requires x >= 1");
    std::sort(x_grid.begin(), x_grid.end());
    return lower_doubling_report("M", w.spec(), x_grid, K_candidates,
                                 [&](double x, double K) {
                                     return w.moment(x) / w.moment(K * x);
                                 });
}

ClassReport d_report(const RadialWeight& w, std::vector<double> r_grid) {
    ClassReport upper = dhat_report(w, r_grid);
    ClassReport lower = dcheck_report(w, r_grid);
    ClassReport report = upper;
    report.class_name = "D";
    report.used_K = lower.used_K;
    if (upper.verdict == ClassVerdict::MemberConsistent &&
        lower.verdict == ClassVerdict::MemberConsistent)
        report.verdict = ClassVerdict::MemberConsistent;
    else if (upper.verdict == ClassVerdict::Inconclusive ||
             lower.verdict == ClassVerdict::Inconclusive)
        report.verdict = ClassVerdict::Inconclusive;
    else
        report.verdict = ClassVerdict::NonMemberConsistent;
    report.trend_note = "Dhat: " + upper.trend_note + "; Dcheck: " + lower.trend_note;
    return report;
}

namespace {

PowerFit least_stable_exponent(
    const std::vector<std::pair<double, double>>& small_large,  // (small, large) keys
    const std::function<double(double)>& gauge,  // gauge value per key
    const std::function<double(double a, double b)>& scale,  // (small/large) scale
    double restrict_below) {
    // Q(pair; e) = gauge(small)/gauge(large) * scale^e; the least exponent whose
    // sup is stable between the restricted and the full pair set is reported.
    std::vector<double> full_lr, restr_lr;  // log(gauge ratio), log(scale)
    std::vector<double> full_ls, restr_ls;
    for (auto [a, b] : small_large) {
        double lr = std::log(gauge(a) / gauge(b));
        double ls = std::log(scale(a, b));
        full_lr.push_back(lr);
        full_ls.push_back(ls);
        if (b <= restrict_below) {
            restr_lr.push_back(lr);
            restr_ls.push_back(ls);
        }
    }
    for (double e = 0.0; e <= 64.0; e += 0.25) {
        double cf = -1e308, cr = -1e308;
        for (std::size_t i = 0; i < full_lr.size(); ++i)
            cf = std::max(cf, full_lr[i] - e * full_ls[i]);
        for (std::size_t i = 0; i < restr_lr.size(); ++i)
            cr = std::max(cr, restr_lr[i] - e * restr_ls[i]);
        if (cf <= cr + std::log(1.25)) return {e, std::exp(cf), true};
    }
    throw InconclusiveError("no stable exponent below 64");
}

}  // namespace

PowerFit dhat_beta_estimate(const RadialWeight& w) {
    auto grid = dyadic_radii(20);
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = i + 1; j < grid.size(); ++j)
            pairs.emplace_back(grid[i], grid[j]);
    return least_stable_exponent(
        pairs, [&](double r) { return w.tail(r); },
        [](double r, double t) { return (1.0 - r) / (1.0 - t); },
        1.0 - std::ldexp(1.0, -15));
}

PowerFit moment_eta_estimate(const RadialWeight& w) {
    std::vector<double> xs;
    for (int j = 0; j <= 14; ++j) xs.push_back(std::ldexp(1.0, j));
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j)
            pairs.emplace_back(xs[i], xs[j]);  // degenerate x == y pairs never occur
    return least_stable_exponent(
        pairs, [&](double x) { return w.moment(x); },
        [](double x, double y) { return y / x; }, std::ldexp(1.0, 10));
}

namespace {

/// mean over theta of |1 - rho e^{i theta}|^{-q}
double angular_kernel_mean(double rho, double q) {
    std::size_t m = next_pow2(static_cast<std::size_t>(
        std::max(64.0, std::min(16.0 / std::max(1e-6, 1.0 - rho), 131072.0))));
    std::vector<double> vals(m);
    for (std::size_t i = 0; i < m; ++i) {
        double th = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(m);
        double re = 1.0 - rho * std::cos(th);
        double im = rho * std::sin(th);
        vals[i] = std::pow(re * re + im * im, -0.5 * q);
    }
    return par::pairwise_sum(vals) / static_cast<double>(m);
}

}  // namespace

RatioReport dhat_integral_ratio(const RadialWeight& w, double lambda,
                                std::vector<double> zeta_grid) {
    if (!(lambda >= 0.0)) throw DomainError("lambda must be >= 0");
    if (zeta_grid.empty()) zeta_grid = {0.0, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99, 0.995};
    std::sort(zeta_grid.begin(), zeta_grid.end());

    RatioReport report;
    report.title = "Dhat integral ratio, lambda=" + std::to_string(lambda);
    for (double s : zeta_grid) {
        RatioRow row;
        row.key = s;
        try {
            auto lhs = integrate_to_one(
                [&](double r, double omr) {
                    return 2.0 * r * w.eval_unchecked(r, omr) *
                           angular_kernel_mean(s * r, lambda + 1.0);
                },
                0.0, 1e-8, w.breakpoints());
            if (!lhs.converged && lhs.rel_err > 1e-5)
                throw AccuracyError("disc quadrature stalled", lhs.rel_err);
            row.lhs = lhs.value;
            row.rhs = w.tail(s) / std::pow(1.0 - s, lambda);
            row.ratio = row.lhs / row.rhs;
        } catch (const AccuracyError&) {
            report.truncated = true;
            break;
        }
        report.rows.push_back(row);
    }
    report.provenance.emplace_back("lambda", lambda);
    report.provenance.emplace_back("disc_tol", 1e-8);
    report.finalize(50.0);
    return report;
}

namespace {
std::mutex g_lambda_mtx;
std::map<std::string, std::optional<double>> g_lambda_cache;
}  // namespace

std::optional<double> estimate_lambda(const RadialWeight& w) {
    {
        std::lock_guard<std::mutex> lock(g_lambda_mtx);
        auto it = g_lambda_cache.find(w.spec());
        if (it != g_lambda_cache.end()) return it->second;
    }
    std::optional<double> found;
    for (double lam = 0.0; lam <= 16.0; lam += 0.25) {
        auto report = dhat_integral_ratio(w, lam);
        if (!report.truncated && report.verdict.passed) {
            found = lam;
            break;
        }
    }
    std::lock_guard<std::mutex> lock(g_lambda_mtx);
    g_lambda_cache[w.spec()] = found;
    return found;
}

int default_n0(const RadialWeight& w) {
    auto lam = estimate_lambda(w);
    if (!lam)
        throw InconclusiveError("no lambda candidate passes for " + w.spec() +
                                "; pass n explicitly");
    return static_cast<int>(std::ceil(*lam)) + 1;
}

RatioReport hl_sum_ratio(const RadialWeight& w, double p, double alpha,
                         std::vector<double> s_grid) {
    if (!(p > 0.0)) throw DomainError("HL check requires p > 0");
    if (s_grid.empty()) s_grid = {0.5, 0.9, 0.99, 0.999, 0.9999};
    std::sort(s_grid.begin(), s_grid.end());
    for (double s : s_grid)
        if (!(s > 0.0) || !(s >= 0.0) || !(s < 1.0))
            throw DomainError("HL grid requires 0 < s < 1");

    RatioReport report;
    report.title = "Hardy-Littlewood sum/integral ratio";
    std::size_t max_terms_used = 0;
    for (double s : s_grid) {
        // series sum with geometric tail control
        double partial = 0.0;
        double sn = 1.0;
        double prev_term = 0.0;
        std::size_t n = 0;
        const std::size_t cap = 1000000;
        std::size_t have = 1024;
        auto run = w.moment_run(1.0, have);
        bool done = false;
        while (!done) {
            if (n >= have) {
                have = std::min<std::size_t>(cap + 1, have * 2);
                run = w.moment_run(1.0, have);
            }
            double term = std::pow(static_cast<double>(n + 1), alpha - 2.0) /
                          std::pow((*run)[n], p) * sn;
            partial += term;
            if (n >= 8) {
                double q = s;
                if (prev_term > 0.0 && term > 0.0)
                    q = std::max(q, std::min(term / prev_term, 0.999999));
                double tail_bound = term * q / (1.0 - q);
                if (tail_bound < 1e-3 * std::abs(partial)) done = true;
            }
            prev_term = term;
            sn *= s;
            if ((n & 1023u) == 1023u) sn = std::pow(s, static_cast<double>(n + 1));
            ++n;
            if (n > cap)
                throw AccuracyError(
                    "HL series did not reach its truncation bound by n=1e6; "
                    "use a smaller s_max",
                    1.0);
        }
        max_terms_used = std::max(max_terms_used, n);

        auto rhsq = integrate_clustered_right(
            [&](double t) {
                return 1.0 / (std::pow(w.tail(t), p) * std::pow(1.0 - t, alpha));
            },
            0.0, s, 1e-9);
        RatioRow row;
        row.key = s;
        row.lhs = partial;
        row.rhs = rhsq.value + 1.0;
        row.ratio = row.lhs / row.rhs;
        row.extras.emplace_back("terms", static_cast<double>(n));
        report.rows.push_back(row);
    }
    report.provenance.emplace_back("p", p);
    report.provenance.emplace_back("alpha", alpha);
    report.provenance.emplace_back("series_rel_truncation", 1e-3);
    report.provenance.emplace_back("max_terms", static_cast<double>(max_terms_used));
    report.finalize(50.0);
    return report;
}

RoomReport room_report(const RadialWeight& w, const RadialWeight& nu, double gamma,
                       std::vector<double> r_grid) {
    if (!(gamma > 0.0)) throw DomainError("room check requires gamma > 0");
    if (r_grid.empty()) r_grid = dyadic_radii(15);
    std::sort(r_grid.begin(), r_grid.end());

    RoomReport out;
    out.hat_product.title = "tail(omega*nu_hat) vs tail(omega)*tail(nu)";
    out.gamma_ratio.title = "int_r^1 omega/nu_hat^gamma vs pointwise quotient";
    auto derived = w.tail_product(nu);
    for (double r : r_grid) {
        RatioRow row;
        row.key = r;
        row.lhs = derived.tail(r);
        row.rhs = w.tail(r) * nu.tail(r);
        row.ratio = row.lhs / row.rhs;
        out.hat_product.rows.push_back(row);

        auto lhs = integrate_to_one(
            [&](double t, double omt) {
                return w.eval_unchecked(t, omt) /
                       std::pow(nu.tail_from_one_minus(omt), gamma);
            },
            r, w.tolerance(), w.breakpoints());
        RatioRow row2;
        row2.key = r;
        row2.lhs = lhs.value;
        row2.rhs = w.tail(r) / std::pow(nu.tail(r), gamma);
        row2.ratio = row2.lhs / row2.rhs;
        out.gamma_ratio.rows.push_back(row2);
    }
    out.hat_product.provenance.emplace_back("gamma", gamma);
    out.gamma_ratio.provenance.emplace_back("gamma", gamma);
    out.hat_product.finalize(50.0);
    out.gamma_ratio.finalize(50.0);
    return out;
}

}  // namespace bergman
