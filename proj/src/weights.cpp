#include "bergman/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>

#include "bergman/parallel.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

namespace {

std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// 1 - r^y without cancellation near r = 1.
double one_minus_pow(double r, double omr, int y) {
    if (y == 1) return omr;
    if (y <= 64) {
        double s = 1.0, p = 1.0;
        for (int i = 1; i < y; ++i) {
            p *= r;
            s += p;
        }
        return omr * s;
    }
    return -std::expm1(static_cast<double>(y) * std::log1p(-omr));
}

double factors_value(double r, double omr, const std::vector<MomentFactor>& fs) {
    double v = 1.0;
    for (const auto& f : fs) {
        double base = one_minus_pow(r, omr, f.y);
        for (int i = 0; i < f.n; ++i) v *= base;
    }
    return v;
}

struct RunKey {
    std::vector<MomentFactor> factors;
    double x0;
    double extra;  // partial-moment endpoint, 1.0 for full runs
    bool operator<(const RunKey& o) const {
        if (x0 != o.x0) return x0 < o.x0;
        if (extra != o.extra) return extra < o.extra;
        if (factors.size() != o.factors.size()) return factors.size() < o.factors.size();
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (factors[i].y != o.factors[i].y) return factors[i].y < o.factors[i].y;
            if (factors[i].n != o.factors[i].n) return factors[i].n < o.factors[i].n;
        }
        return false;
    }
};

struct GMKey {
    std::vector<MomentFactor> factors;
    double x;
    bool operator<(const GMKey& o) const {
        RunKey a{factors, x, 1.0}, b{o.factors, o.x, 1.0};
        return a < b;
    }
};

}  // namespace

std::vector<MomentFactor> canonical_factors(std::vector<MomentFactor> factors) {
    for (const auto& f : factors)
        if (f.n < 1 || f.y < 1)
            throw ValidationError("generalized moment factors require n >= 1, y >= 1");
    std::sort(factors.begin(), factors.end(),
              [](const MomentFactor& a, const MomentFactor& b) { return a.y < b.y; });
    std::vector<MomentFactor> merged;
    for (const auto& f : factors) {
        if (!merged.empty() && merged.back().y == f.y)
            merged.back().n += f.n;
        else
            merged.push_back(f);
    }
    return merged;
}

GeneralizedMomentSpec GeneralizedMomentSpec::make(std::vector<MomentFactor> factors,
                                                  double x) {
    if (!(x >= 0.0)) throw DomainError("generalized moment requires x >= 0");
    return GeneralizedMomentSpec{canonical_factors(std::move(factors)), x};
}

int GeneralizedMomentSpec::total_n() const {
    int t = 0;
    for (const auto& f : factors) t += f.n;
    return t;
}

struct WeightImpl {
    std::string spec;
    std::function<double(double r, double omr)> profile;
    bool continuous = true;
    bool positive_profile = true;  // family-level: profile > 0 a.e. near 1
    std::vector<double> breakpoints;
    double tol = 1e-10;
    // closed-form tail for families whose tail decays slower than any power
    // of (1-r); quadrature alone cannot resolve those to full precision
    std::function<double(double omr)> exact_tail;

    mutable std::mutex mtx;
    mutable std::map<double, double> tails;
    mutable std::map<GMKey, double> scalar_moments;
    mutable std::map<RunKey, std::shared_ptr<const std::vector<double>>> runs;
    mutable std::shared_ptr<const std::vector<double>> kernel_coeffs;
};

// ---------------------------------------------------------------------------
// construction

struct WeightAccess {
    static RadialWeight wrap(std::shared_ptr<WeightImpl> impl) {
        return RadialWeight(std::move(impl));
    }
};

namespace {

RadialWeight make_weight(std::shared_ptr<WeightImpl> impl) {
    return WeightAccess::wrap(std::move(impl));
}

std::shared_ptr<WeightImpl> base_impl(std::string spec,
                                      std::function<double(double, double)> profile) {
    auto impl = std::make_shared<WeightImpl>();
    impl->spec = std::move(spec);
    impl->profile = std::move(profile);
    return impl;
}

}  // namespace

RadialWeight RadialWeight::standard(double alpha) {
    if (!(alpha > -1.0)) throw ValidationError("standard weight requires alpha > -1");
    auto impl = base_impl("standard:alpha=" + fmt_num(alpha),
                          [alpha](double r, double omr) {
                              return (alpha + 1.0) * std::pow(omr * (1.0 + r), alpha);
                          });
    return make_weight(std::move(impl));
}

RadialWeight RadialWeight::exponential(double c, double a) {
    if (!(c > 0.0) || !(a > 0.0))
        throw ValidationError("exponential weight requires c > 0, a > 0");
    auto impl = base_impl("exp:c=" + fmt_num(c) + ",a=" + fmt_num(a),
                          [c, a](double, double omr) {
                              return std::exp(-c * std::pow(omr, -a));
                          });
    return make_weight(std::move(impl));
}

RadialWeight RadialWeight::log_power(double alpha, double beta) {
    auto impl = base_impl("logpow:alpha=" + fmt_num(alpha) + ",beta=" + fmt_num(beta),
                          [alpha, beta](double, double omr) {
                              double L = 1.0 - std::log(omr);
                              return std::pow(omr, alpha) * std::pow(L, beta);
                          });
    if (alpha == -1.0) {
        if (beta >= -1.0)
            throw DegenerateWeightError(
                "logpow:alpha=-1 is integrable only for beta < -1");
        impl->exact_tail = [beta](double omr) {
            double L = 1.0 - std::log(omr);
            return std::pow(L, beta + 1.0) / (-beta - 1.0);
        };
    }
    return make_weight(std::move(impl));
}

RadialWeight RadialWeight::table(std::vector<std::pair<double, double>> samples,
                                 const std::string& label) {
    if (samples.size() < 2) throw ValidationError("table weight needs >= 2 samples");
    std::sort(samples.begin(), samples.end());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        auto [r, v] = samples[i];
        if (!(r >= 0.0) || !(r < 1.0))
            throw ValidationError("table weight sample radius outside [0,1)");
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ValidationError("table weight values must be finite and >= 0");
        if (i > 0 && r == samples[i - 1].first)
            throw ValidationError("table weight has duplicate radius");
    }
    auto impl = base_impl("table:" + label, nullptr);
    impl->positive_profile = false;
    for (const auto& s : samples) impl->breakpoints.push_back(s.first);
    impl->profile = [samples = std::move(samples)](double r, double) {
        if (r <= samples.front().first) return samples.front().second;
        if (r >= samples.back().first) return samples.back().second;
        auto it = std::upper_bound(samples.begin(), samples.end(),
                                   std::make_pair(r, 1e308));
        auto lo = std::prev(it);
        double t = (r - lo->first) / (it->first - lo->first);
        return lo->second + t * (it->second - lo->second);
    };
    return make_weight(std::move(impl));
}

namespace {
// profile-level tail factor: a value below double range is simply 0 here,
// unlike a top-level tail query where it is exceptional
double tail_factor(const RadialWeight& nu, double omr) {
    try {
        return nu.tail_from_one_minus(omr);
    } catch (const TailUnderflowError&) {
        return 0.0;
    }
}
}  // namespace

RadialWeight RadialWeight::tail_of(const RadialWeight& nu) {
    auto impl = base_impl("tailof(" + nu.spec() + ")", [nu](double, double omr) {
        return tail_factor(nu, omr);
    });
    return make_weight(std::move(impl));
}

RadialWeight RadialWeight::power_factor(double beta) const {
    auto base = impl_;
    auto impl = base_impl(base->spec + "*pow(" + fmt_num(beta) + ")",
                          [base, beta](double r, double omr) {
                              return base->profile(r, omr) * std::pow(omr, beta);
                          });
    impl->continuous = base->continuous;
    impl->positive_profile = base->positive_profile;
    impl->breakpoints = base->breakpoints;
    return make_weight(std::move(impl));
}

RadialWeight RadialWeight::tail_product(const RadialWeight& nu) const {
    auto base = impl_;
    auto impl = base_impl(base->spec + "*tailof(" + nu.spec() + ")",
                          [base, nu](double r, double omr) {
                              return base->profile(r, omr) * tail_factor(nu, omr);
                          });
    impl->continuous = base->continuous;
    impl->positive_profile = base->positive_profile;
    impl->breakpoints = base->breakpoints;
    return make_weight(std::move(impl));
}

RadialWeight RadialWeight::log_factor() const {
    auto base = impl_;
    auto impl = base_impl(base->spec + "*log",
                          [base](double r, double omr) {
                              return base->profile(r, omr) * (1.0 - std::log(omr));
                          });
    impl->continuous = base->continuous;
    impl->positive_profile = base->positive_profile;
    impl->breakpoints = base->breakpoints;
    return make_weight(std::move(impl));
}

RadialWeight RadialWeight::product(const RadialWeight& nu) const {
    auto base = impl_;
    auto other = nu.impl_;
    auto impl = base_impl("(" + base->spec + ")*(" + other->spec + ")",
                          [base, other](double r, double omr) {
                              return base->profile(r, omr) * other->profile(r, omr);
                          });
    impl->continuous = base->continuous && other->continuous;
    impl->positive_profile = base->positive_profile && other->positive_profile;
    impl->breakpoints = base->breakpoints;
    impl->breakpoints.insert(impl->breakpoints.end(), other->breakpoints.begin(),
                             other->breakpoints.end());
    std::sort(impl->breakpoints.begin(), impl->breakpoints.end());
    impl->breakpoints.erase(
        std::unique(impl->breakpoints.begin(), impl->breakpoints.end()),
        impl->breakpoints.end());
    return make_weight(std::move(impl));
}

// ---------------------------------------------------------------------------
// evaluation

double RadialWeight::eval(double r) const {
    if (!(r >= 0.0) || !(r < 1.0)) throw DomainError("weight evaluated outside [0,1)");
    return impl_->profile(r, 1.0 - r);
}

double RadialWeight::eval_unchecked(double r, double omr) const {
    return impl_->profile(r, omr);
}

const std::string& RadialWeight::spec() const { return impl_->spec; }
bool RadialWeight::continuous() const { return impl_->continuous; }
const std::vector<double>& RadialWeight::breakpoints() const { return impl_->breakpoints; }
double RadialWeight::tolerance() const { return impl_->tol; }

double RadialWeight::tail(double r) const {
    if (!(r >= 0.0) || !(r < 1.0)) throw DomainError("tail evaluated outside [0,1)");
    return tail_from_one_minus(1.0 - r);
}

double RadialWeight::tail_from_one_minus(double omr) const {
    if (!(omr > 0.0) || !(omr <= 1.0))
        throw DomainError("tail distance outside (0,1]");
    {
        std::lock_guard<std::mutex> lock(impl_->mtx);
        auto it = impl_->tails.find(omr);
        if (it != impl_->tails.end()) return it->second;
    }
    double value;
    if (impl_->exact_tail) {
        value = impl_->exact_tail(omr);
    } else {
        auto res = integrate_boundary_T(
            [this](double rr, double om) { return impl_->profile(rr, om); }, omr,
            impl_->tol, impl_->breakpoints);
        if (res.diverging)
            throw DegenerateWeightError("tail integral diverges for " + impl_->spec);
        if (!res.converged && res.rel_err > 1e-6)
            throw AccuracyError("tail quadrature did not converge for " + impl_->spec,
                                res.rel_err);
        value = res.value;
    }
    if (!(value > 0.0)) {
        if (impl_->positive_profile)
            throw TailUnderflowError(
                "tail underflow near the boundary for " + impl_->spec, 0.0);
        throw DegenerateWeightError("weight " + impl_->spec +
                                    " has non-positive tail at 1-r=" + fmt_num(omr));
    }
    std::lock_guard<std::mutex> lock(impl_->mtx);
    auto [it, inserted] = impl_->tails.emplace(omr, value);
    return it->second;  // first stored value wins
}

namespace {

double scalar_generalized_moment(const WeightImpl& impl,
                                 const std::vector<MomentFactor>& factors, double x) {
    // for exact-tail families, integrate pointwise down to 1-r = eps and close
    // with the exact tail (r^x and the factors are flat there)
    const double eps = impl.exact_tail ? 1e-25 : 0.0;
    auto res = integrate_to_one(
        [&](double r, double omr) {
            if (omr < eps) return 0.0;
            return std::pow(r, x) * factors_value(r, omr, factors) *
                   impl.profile(r, omr);
        },
        0.0, impl.tol, impl.breakpoints, std::max(1.0, x));
    if (res.diverging)
        throw DegenerateWeightError("moment integral diverges for " + impl.spec);
    if (!res.converged && res.rel_err > 1e-6)
        throw AccuracyError("moment quadrature did not converge for " + impl.spec,
                            res.rel_err);
    double value = res.value;
    if (impl.exact_tail && factors.empty()) value += impl.exact_tail(eps);
    if (!(value > 0.0) || !std::isfinite(value))
        throw DegenerateWeightError("weight " + impl.spec +
                                    " has non-positive moment at x=" + fmt_num(x));
    return value;
}

/// values[j] = int r^{x0+2j} * factors * profile over the node set, node-major
/// accumulation order (deterministic regardless of block parallelism).
std::vector<double> run_at_nodes(const WeightImpl& impl,
                                 const std::vector<MomentFactor>& factors, double x0,
                                 std::size_t count, const NodeSet& ns,
                                 double skip_omr) {
    std::size_t nn = ns.r.size();
    std::vector<double> wf(nn);
    for (std::size_t i = 0; i < nn; ++i) {
        double r = ns.r[i], omr = ns.omr[i];
        if (omr < skip_omr) {
            wf[i] = 0.0;
            continue;
        }
        wf[i] = ns.w[i] * factors_value(r, omr, factors) * impl.profile(r, omr);
    }
    std::vector<double> out(count, 0.0);
    const std::size_t block = 2048;
    std::size_t nblocks = (count + block - 1) / block;
    par::for_index(nblocks, [&](std::size_t b) {
        std::size_t j0 = b * block, j1 = std::min(count, j0 + block);
        for (std::size_t i = 0; i < nn; ++i) {
            if (wf[i] == 0.0) continue;
            double r = ns.r[i];
            double p = std::pow(r, x0 + 2.0 * static_cast<double>(j0));
            double r2 = r * r;
            for (std::size_t j = j0; j < j1; ++j) {
                out[j] += wf[i] * p;
                p *= r2;
            }
        }
    });
    return out;
}

std::vector<double> bulk_run(const WeightImpl& impl,
                             const std::vector<MomentFactor>& factors, double x0,
                             std::size_t count) {
    const double xmax = x0 + 2.0 * static_cast<double>(count - 1);
    const double skip_omr = impl.exact_tail ? 1e-25 : 0.0;
    int depth = std::max<int>(10, static_cast<int>(std::ceil(std::log2(xmax + 2.0))) + 4);
    const int max_depth = 48;
    std::vector<double> prev = run_at_nodes(
        impl, factors, x0, count, boundary_nodes(0.0, depth, impl.breakpoints), skip_omr);
    for (;;) {
        int d2 = std::min(depth + 3, max_depth);
        std::vector<double> cur = run_at_nodes(
            impl, factors, x0, count, boundary_nodes(0.0, d2, impl.breakpoints), skip_omr);
        double err = 0.0;
        for (std::size_t j = 0; j < count; ++j) {
            double scale = std::max({std::abs(cur[j]), std::abs(prev[j]), 1e-300});
            err = std::max(err, std::abs(cur[j] - prev[j]) / scale);
        }
        if (err <= impl.tol || d2 >= max_depth) {
            if (err > std::max(impl.tol, 1e-6))
                throw AccuracyError("bulk moment quadrature did not converge for " +
                                        impl.spec,
                                    err);
            if (impl.exact_tail && factors.empty()) {
                double tail_rest = impl.exact_tail(skip_omr);
                for (auto& v : cur) v += tail_rest;
            }
            return cur;
        }
        prev = std::move(cur);
        depth = d2;
    }
}

std::vector<double> bulk_partial_run(const WeightImpl& impl, double x0,
                                     std::size_t count, double R) {
    // nodes clustered toward R; same blocked accumulation as the full runs
    const auto& [gx, gw] = gauss_legendre01(16);
    auto nodes_at = [&](int depth) {
        NodeSet ns;
        double shi = R;
        for (int d = 0; d <= depth; ++d) {
            double slo = (d < depth) ? 0.5 * shi : 0.0;
            double len = shi - slo;
            for (int q = 0; q < 16; ++q) {
                double s = slo + len * gx[q];
                double r = R - s;
                if (r < 0.0) continue;
                ns.r.push_back(r);
                ns.omr.push_back(1.0 - r);
                ns.w.push_back(len * gw[q]);
            }
            shi = slo;
        }
        return ns;
    };
    const double xmax = x0 + 2.0 * static_cast<double>(count - 1);
    int depth = std::max<int>(8, static_cast<int>(std::ceil(std::log2(xmax + 2.0))) + 2);
    std::vector<double> prev = run_at_nodes(impl, {}, x0, count, nodes_at(depth), 0.0);
    for (;;) {
        int d2 = depth + 3;
        std::vector<double> cur = run_at_nodes(impl, {}, x0, count, nodes_at(d2), 0.0);
        double err = 0.0;
        for (std::size_t j = 0; j < count; ++j) {
            double scale = std::max({std::abs(cur[j]), std::abs(prev[j]), 1e-300});
            err = std::max(err, std::abs(cur[j] - prev[j]) / scale);
        }
        if (err <= impl.tol || d2 >= 44) {
            if (err > std::max(impl.tol, 1e-6))
                throw AccuracyError("partial moment quadrature did not converge", err);
            return cur;
        }
        prev = std::move(cur);
        depth = d2;
    }
}

std::shared_ptr<const std::vector<double>> run_lookup(
    const WeightImpl& impl, const RunKey& key, std::size_t count,
    const std::function<std::vector<double>(double x0_from, std::size_t n)>& compute,
    bool require_positive = true) {
    {
        std::lock_guard<std::mutex> lock(impl.mtx);
        auto it = impl.runs.find(key);
        if (it != impl.runs.end() && it->second->size() >= count) return it->second;
    }
    // extend by suffix so already-published entries keep their exact bits
    std::shared_ptr<const std::vector<double>> existing;
    {
        std::lock_guard<std::mutex> lock(impl.mtx);
        auto it = impl.runs.find(key);
        if (it != impl.runs.end()) existing = it->second;
    }
    std::size_t have = existing ? existing->size() : 0;
    std::size_t want = std::max<std::size_t>(count, 64);
    std::vector<double> grown;
    grown.reserve(want);
    if (existing) grown.assign(existing->begin(), existing->end());
    std::vector<double> suffix =
        compute(key.x0 + 2.0 * static_cast<double>(have), want - have);
    grown.insert(grown.end(), suffix.begin(), suffix.end());
    for (double v : grown) {
        if (!std::isfinite(v) || (require_positive && !(v > 0.0)) || v < 0.0)
            throw DegenerateWeightError("weight " + impl.spec +
                                        " produced a non-positive moment");
    }
    auto fresh = std::make_shared<const std::vector<double>>(std::move(grown));
    std::lock_guard<std::mutex> lock(impl.mtx);
    auto it = impl.runs.find(key);
    if (it != impl.runs.end() && it->second->size() >= count) return it->second;
    impl.runs[key] = fresh;
    return fresh;
}

}  // namespace

double RadialWeight::moment(double x) const {
    if (!(x >= 0.0)) throw DomainError("moment requires x >= 0");
    GMKey key{{}, x};
    {
        std::lock_guard<std::mutex> lock(impl_->mtx);
        auto it = impl_->scalar_moments.find(key);
        if (it != impl_->scalar_moments.end()) return it->second;
    }
    double value = scalar_generalized_moment(*impl_, {}, x);
    std::lock_guard<std::mutex> lock(impl_->mtx);
    auto [it, inserted] = impl_->scalar_moments.emplace(key, value);
    return it->second;
}

double RadialWeight::generalized_moment(const GeneralizedMomentSpec& spec) const {
    auto canon = GeneralizedMomentSpec::make(spec.factors, spec.x);
    GMKey key{canon.factors, canon.x};
    {
        std::lock_guard<std::mutex> lock(impl_->mtx);
        auto it = impl_->scalar_moments.find(key);
        if (it != impl_->scalar_moments.end()) return it->second;
    }
    double value = scalar_generalized_moment(*impl_, canon.factors, canon.x);
    std::lock_guard<std::mutex> lock(impl_->mtx);
    auto [it, inserted] = impl_->scalar_moments.emplace(key, value);
    return it->second;
}

std::shared_ptr<const std::vector<double>> RadialWeight::moment_run(
    double x0, std::size_t count) const {
    if (!(x0 >= 0.0)) throw DomainError("moment run requires x0 >= 0");
    RunKey key{{}, x0, 1.0};
    return run_lookup(*impl_, key, count, [&](double from, std::size_t n) {
        return bulk_run(*impl_, {}, from, n);
    });
}

std::shared_ptr<const std::vector<double>> RadialWeight::generalized_moment_run(
    const std::vector<MomentFactor>& factors, double x0, std::size_t count) const {
    if (!(x0 >= 0.0)) throw DomainError("moment run requires x0 >= 0");
    auto canon = canonical_factors(factors);
    RunKey key{canon, x0, 1.0};
    return run_lookup(*impl_, key, count, [&](double from, std::size_t n) {
        return bulk_run(*impl_, canon, from, n);
    });
}

double RadialWeight::partial_moment(double x, double R) const {
    if (!(x >= 0.0)) throw DomainError("partial moment requires x >= 0");
    if (!(R > 0.0) || !(R < 1.0)) throw DomainError("partial moment requires 0 < R < 1");
    auto res = integrate_clustered_right(
        [&](double r) { return std::pow(r, x) * impl_->profile(r, 1.0 - r); }, 0.0, R,
        impl_->tol);
    if (!res.converged && res.rel_err > 1e-6)
        throw AccuracyError("partial moment quadrature did not converge", res.rel_err);
    return res.value;
}

std::shared_ptr<const std::vector<double>> RadialWeight::partial_moment_run(
    double x0, std::size_t count, double R) const {
    RunKey key{{}, x0, R};
    // partial moments underflow legitimately once R^x drops below double range
    return run_lookup(
        *impl_, key, count,
        [&](double from, std::size_t n) { return bulk_partial_run(*impl_, from, n, R); },
        /*require_positive=*/false);
}

std::shared_ptr<const std::vector<double>> RadialWeight::kernel_coefficients_run(
    std::size_t count) const {
    {
        std::lock_guard<std::mutex> lock(impl_->mtx);
        if (impl_->kernel_coeffs && impl_->kernel_coeffs->size() >= count)
            return impl_->kernel_coeffs;
    }
    auto moments = moment_run(1.0, count);
    std::vector<double> c(moments->size());
    for (std::size_t n = 0; n < c.size(); ++n) c[n] = 1.0 / (2.0 * (*moments)[n]);
    auto fresh = std::make_shared<const std::vector<double>>(std::move(c));
    std::lock_guard<std::mutex> lock(impl_->mtx);
    if (impl_->kernel_coeffs && impl_->kernel_coeffs->size() >= count)
        return impl_->kernel_coeffs;
    impl_->kernel_coeffs = fresh;
    return fresh;
}

// ---------------------------------------------------------------------------
// spec parsing

namespace {

std::vector<std::string> split_top_level(const std::string& s, char sep) {
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char ch : s) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == sep && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

double parse_double(const std::string& tok, const std::string& ctx) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("malformed number '" + tok + "' in " + ctx);
    }
}

std::map<std::string, double> parse_kv(const std::string& s, const std::string& ctx) {
    std::map<std::string, double> kv;
    for (const auto& part : split_top_level(s, ',')) {
        auto eq = part.find('=');
        if (eq == std::string::npos)
            throw ValidationError("expected key=value in '" + part + "' (" + ctx + ")");
        kv[part.substr(0, eq)] = parse_double(part.substr(eq + 1), ctx);
    }
    return kv;
}

RadialWeight parse_base(const std::string& spec) {
    auto colon = spec.find(':');
    std::string head = (colon == std::string::npos) ? spec : spec.substr(0, colon);
    std::string rest = (colon == std::string::npos) ? "" : spec.substr(colon + 1);
    if (head == "standard") {
        auto kv = parse_kv(rest, spec);
        if (!kv.count("alpha")) throw ValidationError("standard weight needs alpha=");
        return RadialWeight::standard(kv["alpha"]);
    }
    if (head == "exp") {
        auto kv = parse_kv(rest, spec);
        if (!kv.count("c") || !kv.count("a"))
            throw ValidationError("exp weight needs c= and a=");
        return RadialWeight::exponential(kv["c"], kv["a"]);
    }
    if (head == "logpow") {
        auto kv = parse_kv(rest, spec);
        if (!kv.count("alpha") || !kv.count("beta"))
            throw ValidationError("logpow weight needs alpha= and beta=");
        return RadialWeight::log_power(kv["alpha"], kv["beta"]);
    }
    if (head == "table") {
        std::ifstream in(rest);
        if (!in) throw ValidationError("cannot open table weight file '" + rest + "'");
        std::vector<std::pair<double, double>> samples;
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            for (char& ch : line)
                if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
            std::istringstream ls(line);
            double r, v;
            if (!(ls >> r >> v)) {
                if (first) {
                    first = false;  // header row
                    continue;
                }
                throw ValidationError("malformed table row '" + line + "'");
            }
            first = false;
            samples.emplace_back(r, v);
        }
        return RadialWeight::table(std::move(samples), rest);
    }
    throw ValidationError("unknown weight family '" + head + "'");
}

}  // namespace

RadialWeight parse_weight_spec(const std::string& spec) {
    auto parts = split_top_level(spec, '*');
    if (parts.empty() || parts.front().empty())
        throw ValidationError("empty weight spec");
    RadialWeight w = parse_base(parts.front());
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const std::string& mod = parts[i];
        if (mod == "log") {
            w = w.log_factor();
        } else if (mod.rfind("pow(", 0) == 0 && mod.back() == ')') {
            w = w.power_factor(
                parse_double(mod.substr(4, mod.size() - 5), "pow modifier"));
        } else if (mod.rfind("tailof(", 0) == 0 && mod.back() == ')') {
            w = w.tail_product(parse_weight_spec(mod.substr(7, mod.size() - 8)));
        } else {
            throw ValidationError("unknown weight modifier '" + mod + "'");
        }
    }
    return w;
}

}  // namespace bergman
