#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bergman/common.hpp"
#include "bergman/report.hpp"
#include "bergman/weights.hpp"

namespace bergman {

/// Finite Taylor coefficient list; represents analytic inputs, projections and
/// V-transform series.
struct AnalyticCoeffs {
    std::vector<Complex> c;

    Complex eval(Complex z) const;
    AnalyticCoeffs derivative() const;
    std::size_t size() const { return c.size(); }
};

/// f_r(z) = f(rz): coefficient n scaled by r^n.
AnalyticCoeffs dilate(const AnalyticCoeffs& f, double r);

struct GridSymbolData {
    std::vector<double> radii;   // sorted, in [0,1)
    std::vector<double> thetas;  // sorted, in [0, 2*pi)
    std::vector<Complex> values; // radii-major: values[i*thetas.size()+j]
};

/// A measurable symbol on the disc. Structured kinds carry closed-form
/// angular Fourier profiles; grid and callable kinds are sampled.
class SymbolFunction {
  public:
    enum class Kind { Analytic, ConjAnalytic, MonomialMix, SignRe, Grid, Callable };
    struct Monomial {
        Complex c;
        int a = 0;  // z^a
        int b = 0;  // conj(z)^b
    };

    static SymbolFunction analytic(AnalyticCoeffs f, std::string label = "analytic");
    static SymbolFunction conj_analytic(AnalyticCoeffs f,
                                        std::string label = "conj-analytic");
    static SymbolFunction monomials(std::vector<Monomial> ms,
                                    std::string label = "monomial-mix");
    /// sign(Re zeta), optionally truncated to |zeta| <= cutoff (the s_R family).
    static SymbolFunction sign_re(double cutoff = 1.0);
    static SymbolFunction grid(GridSymbolData data, std::string label = "grid");
    static SymbolFunction callable(std::function<Complex(Complex)> fn,
                                   std::string label = "callable");

    Kind kind() const { return kind_; }
    const std::string& label() const { return label_; }
    Complex eval(Complex zeta) const;
    bool is_zero() const;

    const AnalyticCoeffs& coeffs() const { return coeffs_; }
    const std::vector<Monomial>& monomial_terms() const { return monomials_; }
    double cutoff() const { return cutoff_; }
    const GridSymbolData& grid_data() const { return grid_; }

  private:
    Kind kind_ = Kind::Analytic;
    std::string label_;
    AnalyticCoeffs coeffs_;
    std::vector<Monomial> monomials_;
    double cutoff_ = 1.0;
    GridSymbolData grid_;
    std::function<Complex(Complex)> fn_;
};

/// Symbol-spec mini-language: poly:[c0,c1,...] | lacunary:K=<int> | logsym |
/// conj:<analytic-spec> | mono:a=<int>,b=<int> | grid:<path> |
/// signre[:R=<float>].
SymbolFunction parse_symbol_spec(const std::string& spec);

// ---------------------------------------------------------------------------
// projections

enum class ProjectPath {
    Auto,        // use orthogonality reductions where the kind allows
    Quadrature,  // force the generic 2-D quadrature route
};

/// Bergman projection coefficients (P_omega f)^(m), m = 0..M.
AnalyticCoeffs project(const RadialWeight& w, const SymbolFunction& f, std::size_t M,
                       ProjectPath path = ProjectPath::Auto);

/// int_D |f| |B_z| omega dA (the maximal projection P+ evaluated pointwise).
double maximal_project_point(const RadialWeight& w, const SymbolFunction& f, Complex z,
                             double tol = 1e-8);

// ---------------------------------------------------------------------------
// small Hankel operator h_{conj f}(g) = int conj(f) g B_z omega dA

/// Output coefficients: h(g)(z) = sum_m coeff[m] conj(z)^m.
AnalyticCoeffs hankel_output_coeffs(const RadialWeight& w, const SymbolFunction& f,
                                    const AnalyticCoeffs& g, std::size_t M = 256);
Complex hankel_apply(const RadialWeight& w, const SymbolFunction& f,
                     const AnalyticCoeffs& g, Complex z, std::size_t M = 256);

struct HankelMatrix {
    std::string weight_spec;
    std::string symbol_label;
    std::size_t rows = 0, cols = 0;
    std::vector<Complex> entries;  // row-major H[m][j]

    Complex& at(std::size_t m, std::size_t j) { return entries[m * cols + j]; }
    const Complex& at(std::size_t m, std::size_t j) const {
        return entries[m * cols + j];
    }
};

/// H[m][j] reproducing h(zeta^j)(z) = sum_m H[m][j] conj(z)^m.
HankelMatrix hankel_matrix(const RadialWeight& w, const SymbolFunction& f,
                           std::size_t M_in, std::size_t M_out);

enum class HankelNormMode { Exact2, LowerP };

struct HankelNormEstimate {
    double value = 0.0;
    std::string kind;  // "truncated-exact" | "lower-bound"
};

/// p = 2: largest singular value of the norm-conjugated truncated matrix.
/// Other p: certified lower bound over a family of test functions.
HankelNormEstimate hankel_norm(const RadialWeight& w, const SymbolFunction& f, double p,
                               std::size_t M, HankelNormMode mode);

/// A^p_omega norm of an analytic coefficient list by disc quadrature.
double analytic_norm_Ap(const RadialWeight& w, const AnalyticCoeffs& f, double p,
                        double tol = 1e-8);

// ---------------------------------------------------------------------------
// V-transform

enum class VPath { Fourier, Direct2D };

/// V_{omega,nu}(f)(z) = nu(z) int f conj(B^{omega nu}_z) omega dA.
Complex v_transform(const RadialWeight& w, const RadialWeight& nu,
                    const SymbolFunction& f, Complex z, VPath path = VPath::Fourier);

/// Multiplier form for analytic f: coefficient n scaled by
/// omega_{2n+1}/(omega nu)_{2n+1}; the value is nu(z) * series(z).
struct VMultiplier {
    AnalyticCoeffs series;
    RadialWeight nu;
    Complex eval(Complex z) const;
};
VMultiplier v_multiplier(const RadialWeight& w, const RadialWeight& nu,
                         const AnalyticCoeffs& f);

struct PolarGrid {
    std::vector<double> radii;
    int angles = 32;
};
PolarGrid default_polar_grid();

struct SupResult {
    double value = 0.0;
    Complex argmax{0.0, 0.0};
};

SupResult v_sup_norm(const RadialWeight& w, const RadialWeight& nu,
                     const SymbolFunction& f, const PolarGrid& grid = default_polar_grid());

// ---------------------------------------------------------------------------
// norms and seminorms of analytic functions

/// |f(0)| + sup (1-|z|^2)|f'(z)| over the grid.
double bloch_norm(const AnalyticCoeffs& f, const PolarGrid& grid = default_polar_grid());

struct LogNormResult {
    double value = 0.0;
    bool finite = true;
};
/// int |f| log(e/(1-|z|)) omega dA, with a divergence flag.
LogNormResult omega_log_norm(const RadialWeight& w, const SymbolFunction& f);

struct SeminormResult {
    double value = 0.0;
    bool diverging = false;
};
/// p = 1: sup |f'|(1-|z|) log(e/(1-|z|)); p < 1: sup |f'|(1-|z|) /
/// (omega_hat(z)(1-|z|))^{1/p-1}.
SeminormResult small_p_seminorm(const RadialWeight& w, const AnalyticCoeffs& f, double p,
                                const PolarGrid& grid = default_polar_grid());

// ---------------------------------------------------------------------------
// equivalence reports

struct Theorem1Options {
    double p = 2.0;
    std::optional<int> n;  // default: ceil(lambda estimate) + 1
    std::size_t M = 128;
    PolarGrid grid = default_polar_grid();
};
RatioReport theorem1_report(const RadialWeight& w,
                            const std::vector<SymbolFunction>& symbols,
                            const Theorem1Options& opt = {});

struct Theorem2Options {
    double p = 2.0;
    std::optional<int> n;
    std::size_t M = 128;
    RadialWeight nu_weight = RadialWeight::standard(0.0);  // nu = tail of this
    PolarGrid grid = default_polar_grid();
};
RatioReport theorem2_report(const RadialWeight& w,
                            const std::vector<AnalyticCoeffs>& symbols,
                            const std::vector<std::string>& labels,
                            const Theorem2Options& opt = {});

}  // namespace bergman
