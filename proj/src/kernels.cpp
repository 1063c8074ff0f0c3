#include "bergman/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "bergman/fft.hpp"
#include "bergman/parallel.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/weight_classes.hpp"

namespace bergman {

KernelSeries kernel_coefficients(const RadialWeight& w, std::size_t M) {
    if (M < 1) throw DomainError("kernel series needs M >= 1");
    auto run = w.kernel_coefficients_run(M + 1);
    KernelSeries ks;
    ks.weight_spec = w.spec();
    ks.coefficients.assign(run->begin(), run->begin() + M + 1);
    return ks;
}

KernelValue kernel_eval(const RadialWeight& w, Complex z, Complex zeta, double tol,
                        std::size_t max_terms) {
    const Complex base = std::conj(z) * zeta;
    const double aw = std::abs(base);
    if (!(aw < 1.0)) throw DomainError("kernel argument |conj(z) zeta| must be < 1");

    Complex acc(0.0, 0.0);
    Complex p(1.0, 0.0);
    std::size_t n = 0;
    std::size_t have = 128;
    auto run = w.kernel_coefficients_run(have);
    double growth = 1.0;
    for (;;) {
        std::size_t block_end = std::min(max_terms, n + 64);
        if (block_end + 1 > have) {
            have = std::max<std::size_t>(have * 2, block_end + 2);
            run = w.kernel_coefficients_run(have);
        }
        for (; n < block_end; ++n) {
            acc += (*run)[n] * p;
            p *= base;
            if ((n & 511u) == 511u)
                p = std::pow(base, Complex(static_cast<double>(n + 1), 0.0));
        }
        // worst-case coefficient growth over the recent window bounds the tail
        growth = 1.0;
        for (std::size_t i = n > 64 ? n - 64 : 1; i + 1 <= n && i + 1 < run->size(); ++i)
            growth = std::max(growth, (*run)[i + 1] / (*run)[i]);
        double q = aw * growth;
        if (q < 1.0) {
            double tail = (*run)[n] * std::pow(aw, static_cast<double>(n)) / (1.0 - q);
            if (tail <= tol * std::max(std::abs(acc), 1e-300))
                return {acc, n};
        }
        if (n >= max_terms)
            throw AccuracyError(
                "kernel series truncation failed: |conj(z) zeta| too close to 1 for "
                "the requested tolerance; reduce |z|, |zeta| or the tolerance",
                aw);
    }
}

// ---------------------------------------------------------------------------
// symbolic expansion

namespace {

MomentExpr negated(MomentExpr e) {
    e.sign = -e.sign;
    return e;
}

Complex cpow_int(Complex base, std::int64_t n) {
    Complex acc(1.0, 0.0);
    Complex b = base;
    for (std::int64_t e = n; e > 0; e >>= 1) {
        if (e & 1) acc *= b;
        b *= b;
    }
    return acc;
}

}  // namespace

KernelExpansion expand_modified(int N, int N_max) {
    if (N < 1 || N > N_max)
        throw ValidationError("expansion order must satisfy 1 <= N <= " +
                              std::to_string(N_max));
    KernelExpansion e;
    e.order = 1;
    e.head.resize(1);
    e.head[0].push_back(MomentExpr{1, {}, {1.0}});  // 1/omega_1
    e.terms.push_back(ExpansionTerm{1, 1, {ExpansionSlot{1, {{1, 2}}}}});

    for (int n = 1; n < N; ++n) {
        // head: (1-w) * head + the k = n coefficient of every term
        std::vector<std::vector<MomentExpr>> head(n + 1);
        for (int q = 0; q < static_cast<int>(e.head.size()); ++q) {
            for (const auto& expr : e.head[q]) {
                head[q].push_back(expr);
                head[q + 1].push_back(negated(expr));
            }
        }
        for (const auto& term : e.terms) {
            MomentExpr expr;
            expr.sign = term.sign;
            for (const auto& slot : term.slots)
                expr.numer.emplace_back(slot.factors,
                                        2.0 * n + 1.0 - 2.0 * slot.shift);
            for (int m = 0; m <= term.depth; ++m)
                expr.denom.push_back(2.0 * n + 1.0 - 2.0 * m);
            head[n].push_back(expr);
        }

        // terms: each old term telescopes into depth sub-terms with an extra
        // (1,2) factor (sign flipped) plus one deeper term carrying the new
        // (1, 2(depth+1)) factor
        std::vector<ExpansionTerm> terms;
        for (const auto& term : e.terms) {
            const int ell = static_cast<int>(term.slots.size());
            for (int j = 0; j < ell; ++j) {
                ExpansionTerm t;
                t.sign = -term.sign;
                t.depth = term.depth;
                for (int i = 0; i < ell; ++i) {
                    ExpansionSlot s = term.slots[i];
                    if (i < j) {
                        s.shift += 1;
                    } else if (i == j) {
                        s.shift += 1;
                        s.factors.push_back({1, 2});
                        s.factors = canonical_factors(std::move(s.factors));
                    }
                    t.slots.push_back(std::move(s));
                }
                terms.push_back(std::move(t));
            }
            ExpansionTerm deeper;
            deeper.sign = term.sign;
            deeper.depth = term.depth + 1;
            for (const auto& slot : term.slots) {
                ExpansionSlot s = slot;
                s.shift += 1;
                deeper.slots.push_back(std::move(s));
            }
            deeper.slots.push_back(
                ExpansionSlot{term.depth + 1, {{1, 2 * (term.depth + 1)}}});
            terms.push_back(std::move(deeper));
        }
        e.head = std::move(head);
        e.terms = std::move(terms);
        e.order = n + 1;
    }

    // constraint bookkeeping and validation
    for (const auto& term : e.terms) {
        int total_n = 0;
        for (const auto& slot : term.slots) {
            e.max_shift = std::max(e.max_shift, slot.shift);
            for (const auto& f : slot.factors) {
                total_n += f.n;
                e.max_y = std::max(e.max_y, f.y);
            }
        }
        e.max_depth = std::max(e.max_depth, term.depth);
        if (total_n != e.order)
            throw std::logic_error("expansion term violates the slot-weight constraint");
        if (term.depth > e.order || e.max_shift > e.order)
            throw std::logic_error("expansion term violates the depth constraint");
    }
    return e;
}

ExpansionEvaluator::ExpansionEvaluator(const KernelExpansion& e, const RadialWeight& w)
    : expansion_(&e), weight_(w) {
    std::size_t flat = 0;
    for (const auto& term : e.terms) {
        flat_offsets_.push_back(flat);
        flat += term.slots.size();
    }
    for (const auto& term : e.terms)
        for (const auto& slot : term.slots) {
            auto it = std::find_if(
                distinct_factors_.begin(), distinct_factors_.end(),
                [&](const auto& fs) { return fs == slot.factors; });
            std::size_t id;
            if (it == distinct_factors_.end()) {
                distinct_factors_.push_back(slot.factors);
                id = distinct_factors_.size() - 1;
            } else {
                id = static_cast<std::size_t>(it - distinct_factors_.begin());
            }
            slot_run_index_.push_back(id);
        }
    slot_runs_.resize(distinct_factors_.size());
    ensure(e.order + 64);
}

void ExpansionEvaluator::ensure(std::int64_t k_max) {
    if (k_max < have_) return;
    std::size_t count = static_cast<std::size_t>(k_max) + 2;
    plain_ = weight_.moment_run(1.0, count);
    for (std::size_t i = 0; i < distinct_factors_.size(); ++i)
        slot_runs_[i] = weight_.generalized_moment_run(distinct_factors_[i], 1.0, count);
    have_ = static_cast<std::int64_t>(count) - 1;
}

double ExpansionEvaluator::head_coefficient(int q) const {
    if (q < 0 || q >= static_cast<int>(expansion_->head.size())) return 0.0;
    double acc = 0.0;
    for (const auto& expr : expansion_->head[q]) {
        double v = expr.sign;
        for (const auto& [factors, x] : expr.numer)
            v *= weight_.generalized_moment(GeneralizedMomentSpec::make(factors, x));
        for (double x : expr.denom) v /= weight_.moment(x);
        acc += v;
    }
    return acc;
}

double ExpansionEvaluator::term_coefficient(std::size_t t, std::int64_t k) const {
    const auto& term = expansion_->terms[t];
    std::size_t flat = flat_offsets_[t];
    double v = 1.0;
    for (std::size_t s = 0; s < term.slots.size(); ++s) {
        const auto& slot = term.slots[s];
        v *= (*slot_runs_[slot_run_index_[flat + s]])[static_cast<std::size_t>(
            k - slot.shift)];
    }
    for (int m = 0; m <= term.depth; ++m)
        v /= (*plain_)[static_cast<std::size_t>(k - m)];
    return v;
}

double ExpansionEvaluator::series_coefficient(std::int64_t k) const {
    double acc = 0.0;
    for (std::size_t t = 0; t < expansion_->terms.size(); ++t)
        acc += expansion_->terms[t].sign * term_coefficient(t, k);
    return acc;
}

KernelValue expansion_eval(const KernelExpansion& e, const RadialWeight& w, Complex z,
                           Complex zeta, std::size_t K_max, double tol) {
    const Complex base = std::conj(z) * zeta;
    const double aw = std::abs(base);
    if (!(aw < 1.0)) throw DomainError("expansion argument |conj(z) zeta| must be < 1");
    if (K_max < static_cast<std::size_t>(e.order))
        throw DomainError("K_max must be at least the expansion order");

    ExpansionEvaluator ev(e, w);
    Complex head(0.0, 0.0);
    Complex hp(1.0, 0.0);
    for (int q = 0; q < static_cast<int>(e.head.size()); ++q) {
        head += ev.head_coefficient(q) * hp;
        hp *= base;
    }

    std::int64_t K = std::max<std::int64_t>(e.order + 32, 256);
    Complex prev_total;
    bool first = true;
    for (;;) {
        K = std::min<std::int64_t>(K, static_cast<std::int64_t>(K_max));
        ev.ensure(K);
        Complex series(0.0, 0.0);
        Complex p = cpow_int(base, e.order);
        for (std::int64_t k = e.order; k <= K; ++k) {
            series += ev.series_coefficient(k) * p;
            p *= base;
            if ((k & 511) == 511) p = cpow_int(base, k + 1);
        }
        Complex total = head + series;
        if (!first) {
            double diff = std::abs(total - prev_total);
            if (diff <= tol * std::max(std::abs(total), 1e-300))
                return {total, static_cast<std::size_t>(K)};
        }
        if (K == static_cast<std::int64_t>(K_max))
            throw AccuracyError("expansion series did not settle by K_max", aw);
        prev_total = total;
        first = false;
        K *= 2;
    }
}

RatioReport expansion_coeff_bound(const KernelExpansion& e, const RadialWeight& w,
                                  const std::vector<std::int64_t>& k_grid) {
    if (k_grid.empty()) throw DomainError("empty k grid");
    std::vector<std::int64_t> ks = k_grid;
    std::sort(ks.begin(), ks.end());
    if (ks.front() < e.order) throw DomainError("k grid must start at the order");

    RatioReport report;
    report.title = "normalized expansion coefficients |coeff| * omega_{2k+1} * k^N";
    report.two_sided = false;
    ExpansionEvaluator ev(e, w);
    ev.ensure(ks.back());
    auto plain = w.moment_run(1.0, static_cast<std::size_t>(ks.back()) + 2);
    for (std::int64_t k : ks) {
        RatioRow row;
        row.key = static_cast<double>(k);
        double norm = (*plain)[static_cast<std::size_t>(k)] *
                      std::pow(static_cast<double>(k), e.order);
        double worst = 0.0;
        for (std::size_t t = 0; t < e.terms.size(); ++t) {
            double v = std::abs(ev.term_coefficient(t, k)) * norm;
            worst = std::max(worst, v);
            if (e.terms.size() <= 16)
                row.extras.emplace_back("term" + std::to_string(t), v);
        }
        row.lhs = worst;
        row.rhs = 1.0;
        row.ratio = worst;
        report.rows.push_back(row);
    }
    report.provenance.emplace_back("order", e.order);
    report.finalize(50.0);
    std::vector<double> vals;
    for (const auto& r : report.rows) vals.push_back(r.ratio);
    report.notes.push_back(divergence_trend(vals) ? "unbounded-trend" : "bounded");
    return report;
}

nlohmann::ordered_json to_json(const KernelExpansion& e) {
    nlohmann::ordered_json j;
    j["order"] = e.order;
    auto factors_json = [](const std::vector<MomentFactor>& fs) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& f : fs) arr.push_back({f.n, f.y});
        return arr;
    };
    auto head = nlohmann::ordered_json::array();
    for (std::size_t q = 0; q < e.head.size(); ++q) {
        auto exprs = nlohmann::ordered_json::array();
        for (const auto& expr : e.head[q]) {
            nlohmann::ordered_json je;
            je["sign"] = expr.sign;
            auto num = nlohmann::ordered_json::array();
            for (const auto& [fs, x] : expr.numer)
                num.push_back({{"factors", factors_json(fs)}, {"x", x}});
            je["numer"] = num;
            je["denom"] = expr.denom;
            exprs.push_back(je);
        }
        head.push_back({{"power", q}, {"exprs", exprs}});
    }
    j["head"] = head;
    auto terms = nlohmann::ordered_json::array();
    for (const auto& term : e.terms) {
        nlohmann::ordered_json jt;
        jt["sign"] = term.sign;
        jt["depth"] = term.depth;
        auto slots = nlohmann::ordered_json::array();
        for (const auto& slot : term.slots)
            slots.push_back({{"shift", slot.shift}, {"factors", factors_json(slot.factors)}});
        jt["slots"] = slots;
        terms.push_back(jt);
    }
    j["terms"] = terms;
    j["constraints"] = {{"max_depth", e.max_depth},
                        {"max_shift", e.max_shift},
                        {"max_y", e.max_y},
                        {"term_count", e.terms.size()}};
    return j;
}

// ---------------------------------------------------------------------------
// modified kernel norms

namespace {

/// coefficients of (1-w)^N B as a power series
std::vector<Complex> modified_coefficients(const std::vector<double>& c, int N,
                                           std::size_t len) {
    std::vector<double> binom(static_cast<std::size_t>(N) + 1, 1.0);
    for (int i = 1; i <= N; ++i)
        binom[static_cast<std::size_t>(i)] =
            binom[static_cast<std::size_t>(i - 1)] * (N - i + 1) / i;
    std::vector<Complex> a(len);
    for (std::size_t k = 0; k < len; ++k) {
        double v = 0.0;
        for (int i = 0; i <= N && static_cast<std::size_t>(i) <= k; ++i) {
            double sign = (i % 2 == 0) ? 1.0 : -1.0;
            if (k - static_cast<std::size_t>(i) < c.size())
                v += sign * binom[static_cast<std::size_t>(i)] *
                     c[k - static_cast<std::size_t>(i)];
        }
        a[k] = Complex(v, 0.0);
    }
    return a;
}

std::size_t coeff_length_for(const std::vector<double>& c, double aw, double tol) {
    // smallest K with c_K * aw^K / (1 - q) below tol, q from recent growth
    if (aw < 1e-12) return 4;
    std::size_t K = 8;
    for (; K + 1 < c.size(); ++K) {
        double growth = 1.0;
        for (std::size_t i = K > 32 ? K - 32 : 1; i + 1 <= K; ++i)
            growth = std::max(growth, c[i + 1] / c[i]);
        double q = aw * growth;
        if (q >= 1.0) continue;
        double tail = c[K] * std::pow(aw, static_cast<double>(K)) / (1.0 - q);
        if (tail <= tol) return K + 1;
    }
    return c.size();
}

}  // namespace

double modified_kernel_norm(const RadialWeight& w, const RadialWeight& nu, Complex z,
                            double p, int N, double tol) {
    const double s = std::abs(z);
    if (!(s < 1.0)) throw DomainError("modified kernel norm requires |z| < 1");
    if (!(p > 0.0)) throw DomainError("p must be positive");
    if (N < 0) throw DomainError("N must be >= 0");

    // rotation invariance: the integral depends on |z| only
    std::size_t have = 1024;
    auto run = w.kernel_coefficients_run(have);
    std::size_t K = coeff_length_for(*run, s, 1e-13);
    while (K >= run->size() && have < (1u << 21)) {
        have *= 2;
        run = w.kernel_coefficients_run(have);
        K = coeff_length_for(*run, s, 1e-13);
    }
    std::vector<double> c(run->begin(), run->begin() + std::min(run->size(), K + 1));
    auto coeffs = modified_coefficients(c, N, c.size());

    auto angular_mean = [&](double r) {
        double rho = s * r;
        std::size_t m = next_pow2(static_cast<std::size_t>(
            std::max(64.0, std::min(8.0 / std::max(1e-9, 1.0 - rho), 262144.0))));
        std::size_t klen = coeff_length_for(c, rho, 1e-13);
        std::vector<Complex> trunc(coeffs.begin(),
                                   coeffs.begin() + std::min(coeffs.size(), klen));
        auto vals = series_on_circle(trunc, Complex(rho, 0.0), m);
        std::vector<double> mags(m);
        for (std::size_t i = 0; i < m; ++i)
            mags[i] = std::pow(std::abs(vals[i]), p);
        return par::pairwise_sum(mags) / static_cast<double>(m);
    };

    auto res = integrate_to_one(
        [&](double r, double omr) {
            return 2.0 * r * nu.eval_unchecked(r, omr) * angular_mean(r);
        },
        0.0, tol, nu.breakpoints());
    if (!res.converged && res.rel_err > 1e-5)
        throw AccuracyError("modified kernel norm quadrature stalled", res.rel_err);
    return res.value;
}

double kernel_norm_bound(const RadialWeight& w, const RadialWeight& nu, double abs_z,
                         double p, int N) {
    if (!(abs_z >= 0.0) || !(abs_z < 1.0))
        throw DomainError("kernel norm bound requires 0 <= |z| < 1");
    if (abs_z == 0.0) return 1.0;
    auto res = integrate_clustered_right(
        [&](double t) {
            double omt = 1.0 - t;
            double nu_tail;
            try {
                nu_tail = nu.tail_from_one_minus(omt);
            } catch (const TailUnderflowError&) {
                return 0.0;  // numerator below double resolution
            }
            return nu_tail / (std::pow(w.tail_from_one_minus(omt), p) *
                              std::pow(omt, p * (1.0 - N)));
        },
        0.0, abs_z, 1e-9);
    return res.value + 1.0;
}

RatioReport kernel_estimate_report(const RadialWeight& w, const RadialWeight& nu,
                                   double p, int N, std::vector<double> z_grid,
                                   bool exploratory) {
    if (N < 1) throw DomainError("kernel estimate requires N >= 1");
    if (p < 2.0 && !exploratory)
        throw ValidationError(
            "p < 2 is outside the supported regime; pass exploratory to probe it");
    // the default grid puts five points inside the final decade of 1-|z|, the
    // window the divergence-trend test inspects
    if (z_grid.empty())
        z_grid = {0.0, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99, 0.995, 0.997, 0.9985, 0.999};
    std::sort(z_grid.begin(), z_grid.end());

    RatioReport report;
    report.title = "modified kernel norm vs tail integral bound";
    bool nu_in_D = d_report(nu).verdict == ClassVerdict::MemberConsistent;
    report.two_sided = nu_in_D;
    if (!nu_in_D)
        report.notes.push_back("nu not D-consistent: only the upper bound is asserted");
    if (dhat_report(w).verdict != ClassVerdict::MemberConsistent)
        report.notes.push_back("omega not Dhat-consistent: estimate outside hypotheses");
    if (p < 2.0) report.notes.push_back("unsupported-regime: p < 2 (exploratory)");

    for (double s : z_grid) {
        RatioRow row;
        row.key = s;
        row.lhs = modified_kernel_norm(w, nu, Complex(s, 0.0), p, N);
        row.rhs = kernel_norm_bound(w, nu, s, p, N);
        row.ratio = row.lhs / row.rhs;
        report.rows.push_back(row);
    }
    report.provenance.emplace_back("p", p);
    report.provenance.emplace_back("N", N);
    report.provenance.emplace_back("disc_tol", 1e-8);
    report.finalize(50.0);
    return report;
}

}  // namespace bergman
