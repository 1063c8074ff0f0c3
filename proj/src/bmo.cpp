#include "bergman/bmo.hpp"

#include <algorithm>
#include <cmath>

#include "bergman/parallel.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

double hyp_distance(Complex z, Complex zeta) {
    double rho = std::abs(z - zeta) / std::abs(1.0 - std::conj(zeta) * z);
    return std::atanh(std::min(rho, 1.0 - 1e-16));
}

HyperbolicDisc hyperbolic_disc(Complex z, double r) {
    if (!(std::abs(z) < 1.0)) throw DomainError("disc center must lie in the disc");
    if (!(r > 0.0)) throw DomainError("hyperbolic radius must be positive");
    double s = std::tanh(r);
    double az2 = std::norm(z);
    HyperbolicDisc d;
    d.center = z;
    d.radius = r;
    d.euclid_center = z * ((1.0 - s * s) / (1.0 - s * s * az2));
    d.euclid_radius = s * (1.0 - az2) / (1.0 - s * s * az2);
    if (std::abs(d.euclid_center) + d.euclid_radius >= 1.0)
        throw DomainError("hyperbolic disc realization escaped the unit disc");
    for (int k = 0; k < 8; ++k) {
        double phi = 2.0 * M_PI * k / 8.0;
        Complex boundary =
            d.euclid_center + d.euclid_radius * Complex(std::cos(phi), std::sin(phi));
        if (std::abs(hyp_distance(z, boundary) - r) > 1e-10 * std::max(1.0, r))
            throw std::logic_error("hyperbolic disc boundary check failed");
    }
    return d;
}

namespace {

/// integral of g over the euclidean realization of Delta(z,r) against
/// omega dA, by polar quadrature around the euclidean center. Refinement is
/// capped: symbols with jumps inside the disc limit the attainable accuracy
/// to roughly the cap resolution, which the oscillation bands tolerate.
double disc_region_integral(const RadialWeight& w, const HyperbolicDisc& d,
                            const std::function<double(Complex)>& g, double tol) {
    const std::size_t m_phi = 128;
    auto res = integrate_segment(
        [&](double rho) {
            std::vector<double> vals(m_phi);
            for (std::size_t j = 0; j < m_phi; ++j) {
                double phi =
                    2.0 * M_PI * static_cast<double>(j) / static_cast<double>(m_phi);
                Complex zeta =
                    d.euclid_center + rho * Complex(std::cos(phi), std::sin(phi));
                double az = std::abs(zeta);
                vals[j] = g(zeta) * w.eval_unchecked(az, 1.0 - az);
            }
            return 2.0 * rho * par::pairwise_sum(vals) / static_cast<double>(m_phi);
        },
        0.0, d.euclid_radius, tol, 9);
    return res.value;
}

}  // namespace

Complex local_mean(const RadialWeight& w, const SymbolFunction& f, Complex z, double r,
                   double tol) {
    auto d = hyperbolic_disc(z, r);
    double mass = disc_region_integral(w, d, [](Complex) { return 1.0; }, tol);
    if (!(mass > 0.0))
        throw DegenerateDiscError("omega(Delta(z,r)) = 0: local mean undefined");
    double re = disc_region_integral(
        w, d, [&](Complex zeta) { return f.eval(zeta).real(); }, tol);
    double im = disc_region_integral(
        w, d, [&](Complex zeta) { return f.eval(zeta).imag(); }, tol);
    return Complex(re, im) / mass;
}

double mo_point(const RadialWeight& w, const SymbolFunction& f, Complex z, double p,
                double r, double tol) {
    if (!(p >= 1.0)) throw DomainError("mean oscillation requires p >= 1");
    auto d = hyperbolic_disc(z, r);
    double mass = disc_region_integral(w, d, [](Complex) { return 1.0; }, tol);
    if (!(mass > 0.0))
        throw DegenerateDiscError("omega(Delta(z,r)) = 0: oscillation undefined");
    double re = disc_region_integral(
        w, d, [&](Complex zeta) { return f.eval(zeta).real(); }, tol);
    double im = disc_region_integral(
        w, d, [&](Complex zeta) { return f.eval(zeta).imag(); }, tol);
    Complex mean = Complex(re, im) / mass;
    double osc = disc_region_integral(
        w, d, [&](Complex zeta) { return std::pow(std::abs(f.eval(zeta) - mean), p); },
        tol);
    return std::pow(osc / mass, 1.0 / p);
}

PolarGrid bmo_default_grid() {
    PolarGrid g;
    for (int k = 0; k <= 11; ++k) g.radii.push_back(std::tanh(0.25 * k));
    g.angles = 8;
    return g;
}

BmoResult bmo_norm(const RadialWeight& w, const SymbolFunction& f, double p, double r,
                   const PolarGrid& z_grid) {
    if (z_grid.radii.empty()) throw DomainError("empty BMO grid");
    if (*std::max_element(z_grid.radii.begin(), z_grid.radii.end()) < 0.99)
        throw DomainError("BMO grid must include radii up to 0.99");
    BmoResult out;
    for (double rad : z_grid.radii) {
        for (int a = 0; a < z_grid.angles; ++a) {
            double th = 2.0 * M_PI * a / z_grid.angles;
            Complex z(rad * std::cos(th), rad * std::sin(th));
            try {
                out.value = std::max(out.value, mo_point(w, f, z, p, r));
            } catch (const DegenerateDiscError&) {
                ++out.dropped;
            }
            if (rad == 0.0) break;  // one angle suffices at the origin
        }
    }
    return out;
}

double bo_seminorm(const SymbolFunction& f, const PolarGrid& z_grid) {
    std::vector<Complex> pts;
    for (double rad : z_grid.radii)
        for (int a = 0; a < z_grid.angles; ++a) {
            double th = 2.0 * M_PI * a / z_grid.angles;
            pts.push_back(Complex(rad * std::cos(th), rad * std::sin(th)));
            if (rad == 0.0) break;
        }
    double sup = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            if (hyp_distance(pts[i], pts[j]) > 1.0) continue;
            sup = std::max(sup, std::abs(f.eval(pts[i]) - f.eval(pts[j])));
        }
    return sup;
}

namespace {

double sup_abs(const SymbolFunction& f, const PolarGrid& grid) {
    double sup = 0.0;
    for (double rad : grid.radii)
        for (int a = 0; a < grid.angles; ++a) {
            double th = 2.0 * M_PI * a / grid.angles;
            sup = std::max(sup,
                           std::abs(f.eval(Complex(rad * std::cos(th),
                                                   rad * std::sin(th)))));
            if (rad == 0.0) break;
        }
    return sup;
}

}  // namespace

RatioReport theoremB_report(const RadialWeight& w,
                            const std::vector<SymbolFunction>& symbols,
                            const TheoremBOptions& opt) {
    RatioReport report;
    report.title = "Bloch norm of the projection vs symbol size";
    double key = 0.0;
    int dropped_total = 0;
    for (const auto& f : symbols) {
        RatioRow row;
        row.key = key++;
        row.label = f.label();
        if (f.is_zero()) {
            row.degenerate = true;
            report.rows.push_back(row);
            continue;
        }
        double supf = sup_abs(f, opt.grid);
        auto bmo = bmo_norm(w, f, opt.p, opt.r, opt.grid);
        dropped_total += bmo.dropped;
        std::size_t M = f.kind() == SymbolFunction::Kind::SignRe ? 4096
                                                                 : opt.projection_M;
        double bloch = bloch_norm(project(w, f, M));
        row.lhs = bloch;
        row.rhs = supf;
        row.ratio = supf > 0.0 ? bloch / supf : 0.0;
        row.degenerate = !(supf > 0.0);
        row.extras.emplace_back("bmo", bmo.value);
        row.extras.emplace_back("bloch_over_bmo", bmo.value > 0.0 ? bloch / bmo.value
                                                                  : 0.0);
        report.rows.push_back(row);
    }
    report.provenance.emplace_back("p", opt.p);
    report.provenance.emplace_back("r", opt.r);
    if (dropped_total > 0)
        report.provenance.emplace_back("dropped_grid_points",
                                       static_cast<double>(dropped_total));
    report.finalize(50.0);

    if (!opt.trend_R.empty()) {
        std::vector<double> Rs = opt.trend_R;
        std::sort(Rs.begin(), Rs.end());
        std::vector<double> growth;
        for (double R : Rs) {
            auto sR = SymbolFunction::sign_re(R);
            double bloch = bloch_norm(project(w, sR, 4096));
            RatioRow row;
            row.key = R;
            row.label = sR.label();
            row.lhs = bloch;
            row.rhs = 1.0;  // sup |s_R| = 1
            row.ratio = bloch;
            row.extras.emplace_back("trend", bloch);
            report.rows.push_back(row);
            growth.push_back(bloch);
        }
        bool monotone = true;
        for (std::size_t i = 1; i < growth.size(); ++i)
            if (!(growth[i] > growth[i - 1])) monotone = false;
        report.notes.push_back(std::string("sign-cutoff growth column ") +
                               (monotone ? "monotone increasing" : "not monotone"));
    }
    return report;
}

}  // namespace bergman
