#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bergman/report.hpp"
#include "bergman/weights.hpp"

namespace bergman {

/// An asymptotic class membership cannot be decided from finitely many
/// samples; verdicts are consistency statements plus a trend diagnostic.
enum class ClassVerdict { MemberConsistent, NonMemberConsistent, Inconclusive };
std::string to_string(ClassVerdict v);

struct ClassReport {
    std::string class_name;  // Dhat | Dcheck | D | M
    std::string weight_spec;
    std::vector<double> grid;    // probe radii, or moment indices for M
    std::vector<double> ratios;  // defining ratio per grid point (best K for Dcheck/M)
    double observed_constant = 0.0;
    double used_K = 0.0;  // Dcheck/M only
    ClassVerdict verdict = ClassVerdict::Inconclusive;
    std::string trend_note;
    bool truncated = false;  // grid cut at tail underflow
};

nlohmann::ordered_json to_json(const ClassReport& report);

/// Default dyadic probe grid r_k = 1 - 2^-k, k = 1..kmax.
std::vector<double> dyadic_radii(int kmax = 20);

/// Upper doubling: omega_hat(r) <= C omega_hat((1+r)/2).
ClassReport dhat_report(const RadialWeight& w, std::vector<double> r_grid = {});

/// Lower doubling: omega_hat(r) >= C omega_hat(1-(1-r)/K), C > 1.
ClassReport dcheck_report(const RadialWeight& w, std::vector<double> r_grid = {},
                          std::vector<double> K_candidates = {});

/// Both doubling conditions together.
ClassReport d_report(const RadialWeight& w, std::vector<double> r_grid = {});

/// Moment doubling: omega_x >= C omega_{Kx} for x >= 1.
ClassReport m_report(const RadialWeight& w, std::vector<double> x_grid = {},
                     std::vector<double> K_candidates = {});

struct PowerFit {
    double exponent = 0.0;
    double constant = 0.0;
    bool stable = false;
};

/// Least beta (scanned over {0, 0.25, ..., 64}) making
/// omega_hat(r) <= C ((1-r)/(1-t))^beta omega_hat(t) stable over sample pairs.
PowerFit dhat_beta_estimate(const RadialWeight& w);

/// Least eta making omega_x <= C (y/x)^eta omega_y stable over sample pairs.
PowerFit moment_eta_estimate(const RadialWeight& w);

/// Two-sided check of int_D omega(z)/|1-conj(zeta) z|^{lambda+1} dA(z) against
/// omega_hat(zeta)/(1-|zeta|)^lambda over a grid of |zeta|.
RatioReport dhat_integral_ratio(const RadialWeight& w, double lambda,
                                std::vector<double> zeta_grid = {});

/// Least lambda candidate whose integral ratio stays in a band of width <= 50
/// with no divergence trend. Used to pick the default n0.
std::optional<double> estimate_lambda(const RadialWeight& w);

/// ceil(estimated lambda) + 1; throws InconclusiveError-like ValidationError
/// when no lambda candidate passes.
int default_n0(const RadialWeight& w);

/// Hardy-Littlewood summation check: the moment series against the tail
/// integral, one row per s.
RatioReport hl_sum_ratio(const RadialWeight& w, double p, double alpha,
                         std::vector<double> s_grid = {});

struct RoomReport {
    RatioReport hat_product;  // tail of omega*nu_hat vs omega_hat*nu_hat
    RatioReport gamma_ratio;  // int_r^1 omega/nu_hat^gamma vs pointwise quotient
};

RoomReport room_report(const RadialWeight& w, const RadialWeight& nu, double gamma,
                       std::vector<double> r_grid = {});

}  // namespace bergman
