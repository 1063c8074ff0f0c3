#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bergman/common.hpp"

namespace bergman {

/// One factor (1 - r^y)^n of a generalized moment integrand.
struct MomentFactor {
    int n = 1;
    int y = 1;
    friend bool operator==(const MomentFactor&, const MomentFactor&) = default;
};

/// Specification of (omega_{(n1,y1),...,(nk,yk)})_x, the integral
/// int_0^1 r^x prod_j (1-r^{y_j})^{n_j} omega(r) dr. An empty factor list is a
/// plain moment. Factors are kept canonical: sorted by y with equal-y factors
/// merged.
struct GeneralizedMomentSpec {
    std::vector<MomentFactor> factors;
    double x = 0.0;

    static GeneralizedMomentSpec make(std::vector<MomentFactor> factors, double x);
    int total_n() const;
};

/// Canonicalizes a factor list (sort by y, merge equal y). Throws on n < 1 or
/// y < 1.
std::vector<MomentFactor> canonical_factors(std::vector<MomentFactor> factors);

struct WeightImpl;

/// Tail value fell below the smallest positive double for a family whose tail
/// is mathematically positive (e.g. exponential weights very close to the
/// boundary). Distinct from DegenerateWeightError, which signals a genuinely
/// non-positive tail.
struct TailUnderflowError : AccuracyError {
    using AccuracyError::AccuracyError;
};

/// An evaluable radial profile on [0,1) with family metadata. Immutable after
/// construction; all caches support concurrent use and first-stored-wins
/// inserts, so repeated queries return bit-identical values.
///
/// Weight-spec mini-language accepted by parse_weight_spec:
///   standard:alpha=<float>            (alpha+1)(1-r^2)^alpha
///   exp:c=<float>,a=<float>           exp(-c/(1-r)^a)
///   logpow:alpha=<float>,beta=<float> (1-r)^alpha (log(e/(1-r)))^beta
///   table:<path>                      CSV r,value rows, header optional
///   <spec>*pow(<float>)               multiply by (1-r)^beta
///   <spec>*tailof(<spec>)             multiply by the tail of another weight
///   <spec>*log                        multiply by log(e/(1-r))
class RadialWeight {
  public:
    static RadialWeight standard(double alpha);
    static RadialWeight exponential(double c, double a);
    static RadialWeight log_power(double alpha, double beta);
    static RadialWeight table(std::vector<std::pair<double, double>> samples,
                              const std::string& label);
    /// Weight whose profile is the tail of nu: r -> nu_hat(r).
    static RadialWeight tail_of(const RadialWeight& nu);

    RadialWeight power_factor(double beta) const;
    RadialWeight tail_product(const RadialWeight& nu) const;
    RadialWeight log_factor() const;
    RadialWeight product(const RadialWeight& nu) const;

    /// omega(r); table families interpolate linearly and clamp outside the
    /// sampled range. Throws DomainError unless 0 <= r < 1.
    double eval(double r) const;
    /// Unchecked evaluation with 1-r supplied exactly.
    double eval_unchecked(double r, double omr) const;

    /// Tail integral omega_hat(r) = int_r^1 omega. Cached. Throws
    /// DegenerateWeightError when the tail is not strictly positive and
    /// AccuracyError when it underflows for a mathematically positive family.
    double tail(double r) const;

    /// Tail evaluated from the distance to the boundary; usable when 1-r is
    /// below double resolution around r itself.
    double tail_from_one_minus(double omr) const;

    /// Plain moment omega_x = int_0^1 r^x omega(r) dr, x >= 0. Cached.
    double moment(double x) const;

    double generalized_moment(const GeneralizedMomentSpec& spec) const;

    /// Moments along the arithmetic progression x0, x0+2, ..., x0+2(count-1).
    /// The returned vector is cached and extended by suffix only, so entry
    /// values never change once computed.
    std::shared_ptr<const std::vector<double>> moment_run(double x0,
                                                          std::size_t count) const;
    std::shared_ptr<const std::vector<double>> generalized_moment_run(
        const std::vector<MomentFactor>& factors, double x0, std::size_t count) const;

    /// Partial moment int_0^R r^x omega(r) dr for 0 < R < 1.
    double partial_moment(double x, double R) const;
    std::shared_ptr<const std::vector<double>> partial_moment_run(double x0,
                                                                  std::size_t count,
                                                                  double R) const;

    /// Kernel coefficients c_n = 1/(2 omega_{2n+1}) for n < count.
    std::shared_ptr<const std::vector<double>> kernel_coefficients_run(
        std::size_t count) const;

    const std::string& spec() const;
    bool continuous() const;
    const std::vector<double>& breakpoints() const;
    /// Relative tolerance used for 1-D moment/tail quadrature.
    double tolerance() const;

    friend bool operator==(const RadialWeight& a, const RadialWeight& b) {
        return a.impl_ == b.impl_;
    }

  private:
    friend struct WeightAccess;
    explicit RadialWeight(std::shared_ptr<WeightImpl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<WeightImpl> impl_;
};

RadialWeight parse_weight_spec(const std::string& spec);

}  // namespace bergman
