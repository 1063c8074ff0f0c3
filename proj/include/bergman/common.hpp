#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace bergman {

inline constexpr const char* kVersion = "bergman-lab 0.1.0";

using Complex = std::complex<double>;

/// Input outside the documented domain of an operation (r >= 1, p < 0, ...).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A weight that violates the standing positivity assumptions (tail <= 0,
/// non-integrable profile).
struct DegenerateWeightError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Quadrature or series truncation failed to reach the requested tolerance.
/// Carries the error actually achieved.
struct AccuracyError : std::runtime_error {
    double achieved;
    AccuracyError(const std::string& what, double achieved_err)
        : std::runtime_error(what), achieved(achieved_err) {}
};

/// Malformed spec strings, out-of-range parameters, unknown config keys.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An estimator scan exhausted its candidate list without stabilizing.
struct InconclusiveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bergman
