#include "bergman/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "bergman/parallel.hpp"

namespace bergman {

namespace {

std::pair<std::vector<double>, std::vector<double>> compute_gl01(int n) {
    // Newton iteration on Legendre polynomials, nodes mapped to [0,1].
    std::vector<double> x(n), w(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        x[i] = 0.5 * (1.0 - z);
        x[n - 1 - i] = 0.5 * (1.0 + z);
        w[i] = 1.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    return {x, w};
}

constexpr int kPanelOrder = 16;
constexpr int kStubVDepth = 12;

}  // namespace

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre01(int order) {
    static std::mutex mtx;
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_gl01(order)).first;
    return it->second;
}

NodeSet boundary_nodes(double a, int depth, const std::vector<double>& breakpoints) {
    return boundary_nodes_T(1.0 - a, depth, breakpoints, a == 0.0);
}

NodeSet boundary_nodes_T(double T, int depth, const std::vector<double>& breakpoints,
                         bool refine_origin) {
    const auto& [gx, gw] = gauss_legendre01(kPanelOrder);
    NodeSet ns;

    // Panel edges in t = 1-r space, from T down to the stub width T*2^-depth,
    // split at breakpoints (given in r space). When the interval starts at
    // r = 0 the leading panel is also refined toward 0, where fractional
    // moment exponents r^x lose smoothness.
    std::vector<double> edges;
    edges.push_back(T);
    for (int d = 1; d <= depth; ++d) edges.push_back(std::ldexp(T, -d));
    const double t_min = edges.back();
    for (double b : breakpoints) {
        double tb = 1.0 - b;
        if (tb < T && tb > t_min) edges.push_back(tb);
    }
    if (refine_origin) {
        int lead = std::min(depth, 40);
        for (int d = 1; d <= lead; ++d) {
            double tb = 1.0 - std::ldexp(1.0, -d);
            if (tb > 0.0 && tb < T && tb > t_min) edges.push_back(tb);
        }
    }
    std::sort(edges.begin(), edges.end(), std::greater<double>());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        double thi = edges[p], tlo = edges[p + 1];
        double len = thi - tlo;
        for (int q = 0; q < kPanelOrder; ++q) {
            double t = tlo + len * gx[q];
            ns.r.push_back(1.0 - t);
            ns.omr.push_back(t);
            ns.w.push_back(len * gw[q]);
        }
    }

    // Final subinterval [1-h, 1): substitute t = h*exp(1 - 1/v) so that
    // weights with logarithmic tails integrate with a smooth transformed
    // integrand; v-panels geometric toward 0.
    const double h = edges.back();
    double vhi = 1.0;
    for (int j = 0; j <= kStubVDepth; ++j) {
        double vlo = (j < kStubVDepth) ? 0.5 * vhi : 0.0;
        double len = vhi - vlo;
        for (int q = 0; q < kPanelOrder; ++q) {
            double v = vlo + len * gx[q];
            double t = h * std::exp(1.0 - 1.0 / v);
            if (t < 1e-290) continue;  // below pointwise double resolution
            ns.r.push_back(1.0 - t);
            ns.omr.push_back(t);
            ns.w.push_back(len * gw[q] * t / (v * v));
        }
        vhi = vlo;
    }
    return ns;
}

namespace {

double eval_nodes(const BoundaryIntegrand& f, const NodeSet& ns) {
    // parallel evaluation, serial pairwise reduction in index order: the sum
    // is bit-identical in serial and OpenMP modes
    std::vector<double> vals(ns.r.size());
    par::for_index(vals.size(),
                   [&](std::size_t i) { vals[i] = ns.w[i] * f(ns.r[i], ns.omr[i]); });
    return par::pairwise_sum(vals);
}

QuadResult adapt(const std::function<double(int)>& estimate_at, int d0, int step,
                 int max_depth, double rel_tol) {
    QuadResult res;
    double prev = estimate_at(d0);
    int grow_streak = 0;
    for (int d = d0 + step; d <= max_depth; d += step) {
        double cur = estimate_at(d);
        if (!std::isfinite(cur) || !std::isfinite(prev)) {
            res.value = cur;
            res.rel_err = 1.0;
            res.depth = d;
            res.diverging = true;
            return res;
        }
        double scale = std::max({std::abs(cur), std::abs(prev), 1e-300});
        double err = std::abs(cur - prev) / scale;
        if (std::abs(cur) > std::abs(prev) * (1.0 + 4.0 * rel_tol))
            ++grow_streak;
        else
            grow_streak = 0;
        res.value = cur;
        res.rel_err = err;
        res.depth = d;
        if (err <= rel_tol) {
            res.converged = true;
            return res;
        }
        prev = cur;
    }
    res.diverging = grow_streak >= 3;
    return res;
}

}  // namespace

QuadResult integrate_to_one(const BoundaryIntegrand& f, double a, double rel_tol,
                            const std::vector<double>& breakpoints, double scale_hint,
                            int max_depth) {
    int d0 = 8;
    if (scale_hint > 1.0)
        d0 = std::max(d0, static_cast<int>(std::ceil(std::log2(scale_hint))) + 4);
    d0 = std::min(d0, max_depth - 6);
    return adapt(
        [&](int d) { return eval_nodes(f, boundary_nodes(a, d, breakpoints)); }, d0, 3,
        max_depth, rel_tol);
}

QuadResult integrate_boundary_T(const BoundaryIntegrand& f, double T, double rel_tol,
                                const std::vector<double>& breakpoints,
                                double scale_hint, int max_depth) {
    int d0 = 8;
    if (scale_hint > 1.0)
        d0 = std::max(d0, static_cast<int>(std::ceil(std::log2(scale_hint))) + 4);
    d0 = std::min(d0, max_depth - 6);
    return adapt(
        [&](int d) {
            return eval_nodes(f, boundary_nodes_T(T, d, breakpoints, T == 1.0));
        },
        d0, 3, max_depth, rel_tol);
}

QuadResult integrate_clustered_right(const std::function<double(double)>& f, double a,
                                     double b, double rel_tol, int max_depth) {
    if (b <= a) return {0.0, 0.0, true, false, 0};
    const auto& [gx, gw] = gauss_legendre01(kPanelOrder);
    auto estimate = [&](int depth) {
        const double T = b - a;
        std::vector<double> vals;
        vals.reserve(static_cast<std::size_t>(depth + 1) * kPanelOrder);
        double shi = T;  // distance from b
        for (int d = 0; d <= depth; ++d) {
            double slo = (d < depth) ? 0.5 * shi : 0.0;
            double len = shi - slo;
            for (int q = 0; q < kPanelOrder; ++q) {
                double s = slo + len * gx[q];
                vals.push_back(len * gw[q] * f(b - s));
            }
            shi = slo;
        }
        return par::pairwise_sum(vals);
    };
    return adapt(estimate, 6, 3, max_depth, rel_tol);
}

QuadResult integrate_segment(const std::function<double(double)>& f, double a, double b,
                             double rel_tol, int max_level) {
    if (b <= a) return {0.0, 0.0, true, false, 0};
    const auto& [gx, gw] = gauss_legendre01(kPanelOrder);
    auto estimate = [&](int level) {
        int panels = 1 << level;
        double len = (b - a) / panels;
        std::vector<double> vals(static_cast<std::size_t>(panels) * kPanelOrder);
        for (int p = 0; p < panels; ++p) {
            double lo = a + p * len;
            for (int q = 0; q < kPanelOrder; ++q)
                vals[static_cast<std::size_t>(p) * kPanelOrder + q] =
                    len * gw[q] * f(lo + len * gx[q]);
        }
        return par::pairwise_sum(vals);
    };
    return adapt(estimate, 0, 1, max_level, rel_tol);
}

}  // namespace bergman
