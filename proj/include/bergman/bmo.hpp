#pragma once

#include <vector>

#include "bergman/common.hpp"
#include "bergman/operators.hpp"
#include "bergman/report.hpp"
#include "bergman/weights.hpp"

namespace bergman {

/// Hyperbolic distance beta(z, zeta) = atanh |z - zeta| / |1 - conj(zeta) z|.
double hyp_distance(Complex z, Complex zeta);

/// The hyperbolic disc Delta(z, r) realized as a euclidean disc; construction
/// is validated against beta at boundary samples.
struct HyperbolicDisc {
    Complex center{0.0, 0.0};
    double radius = 0.0;
    Complex euclid_center{0.0, 0.0};
    double euclid_radius = 0.0;
};
HyperbolicDisc hyperbolic_disc(Complex z, double r);

/// omega(Delta(z,r)) = 0: the local mean is undefined there.
struct DegenerateDiscError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Weighted average of f over Delta(z, r).
Complex local_mean(const RadialWeight& w, const SymbolFunction& f, Complex z, double r,
                   double tol = 1e-8);

/// MO_{omega,p,r}(f)(z): p-mean oscillation around the local mean.
double mo_point(const RadialWeight& w, const SymbolFunction& f, Complex z, double p,
                double r, double tol = 1e-8);

/// Probe grid with beta-equispaced radii (hyperbolic steps of 0.25 up to
/// ~0.992) so oscillation pairs sample unit hyperbolic separations.
PolarGrid bmo_default_grid();

struct BmoResult {
    double value = 0.0;
    int dropped = 0;  // grid points with omega(Delta) = 0
};
BmoResult bmo_norm(const RadialWeight& w, const SymbolFunction& f, double p, double r,
                   const PolarGrid& z_grid = bmo_default_grid());

/// sup |f(z) - f(zeta)| over grid pairs with beta(z, zeta) <= 1.
double bo_seminorm(const SymbolFunction& f, const PolarGrid& z_grid = bmo_default_grid());

struct TheoremBOptions {
    double p = 2.0;
    double r = 1.0;  // hyperbolic radius of the oscillation discs
    std::size_t projection_M = 256;
    PolarGrid grid = bmo_default_grid();
    std::vector<double> trend_R;  // cutoff radii for the sign-symbol growth column
};

/// Per-symbol rows (sup|f|, BMO, Bloch of the projection, ratios) with a
/// banded verdict; trend_R adds the truncated-sign growth rows (no pass/fail).
RatioReport theoremB_report(const RadialWeight& w,
                            const std::vector<SymbolFunction>& symbols,
                            const TheoremBOptions& opt = {});

}  // namespace bergman
