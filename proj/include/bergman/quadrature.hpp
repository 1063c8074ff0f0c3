#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace bergman {

/// Gauss-Legendre nodes and weights on [0,1], cached per order.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre01(int order);

/// Integrand on [a,1) evaluated as f(r, 1-r); the second argument is computed
/// without cancellation so profiles like (1-r)^alpha stay accurate at the
/// boundary.
using BoundaryIntegrand = std::function<double(double r, double omr)>;

/// Quadrature nodes for int_a^1: composite Gauss-Legendre panels geometrically
/// refined toward 1 (halving ratio), a log-substituted rule on the final
/// subinterval, and panel splits at the supplied breakpoints.
struct NodeSet {
    std::vector<double> r;    // node locations
    std::vector<double> omr;  // 1 - r, exact
    std::vector<double> w;    // quadrature weights
};
NodeSet boundary_nodes(double a, int depth, const std::vector<double>& breakpoints = {});

/// Same node construction parameterized by the interval length T = 1-a, for
/// integrals over [1-T, 1) with T below the resolution of 1-r at r = a.
NodeSet boundary_nodes_T(double T, int depth, const std::vector<double>& breakpoints = {},
                         bool refine_origin = false);

struct QuadResult {
    double value = 0.0;
    double rel_err = 0.0;   // estimated from the last refinement step
    bool converged = false;
    bool diverging = false; // estimates grew monotonically without settling
    int depth = 0;
};

/// Adaptive integral of f over [a,1): refines the panel depth until two
/// successive estimates agree to rel_tol. scale_hint ~ x for integrands that
/// behave like r^x near 1 (sets the initial depth).
QuadResult integrate_to_one(const BoundaryIntegrand& f, double a, double rel_tol,
                            const std::vector<double>& breakpoints = {},
                            double scale_hint = 1.0, int max_depth = 48);

/// Adaptive integral over [1-T, 1) parameterized by the interval length.
QuadResult integrate_boundary_T(const BoundaryIntegrand& f, double T, double rel_tol,
                                const std::vector<double>& breakpoints = {},
                                double scale_hint = 1.0, int max_depth = 48);

/// Adaptive integral over [a,b], b < 1, with panels clustered toward b.
QuadResult integrate_clustered_right(const std::function<double(double)>& f, double a,
                                     double b, double rel_tol, int max_depth = 40);

/// Adaptive integral over [a,b] by uniform bisection refinement.
QuadResult integrate_segment(const std::function<double(double)>& f, double a, double b,
                             double rel_tol, int max_level = 14);

}  // namespace bergman
