#pragma once

#include <complex>
#include <vector>

namespace bergman {

/// In-place radix-2 FFT, n must be a power of two.
/// sign = -1: forward transform sum x_j exp(-2*pi*i*jm/n);
/// sign = +1: unnormalized inverse.
void fft_pow2(std::vector<std::complex<double>>& x, int sign);

/// Smallest power of two >= n.
std::size_t next_pow2(std::size_t n);

/// Values of the truncated power series sum_k coeff[k] * base^k * e^{i k theta}
/// at the m_angles uniform angles theta_m = 2*pi*m/m_angles (m_angles a power
/// of two). Evaluation is exact for the truncated series: coefficients are
/// folded mod m_angles and transformed.
std::vector<std::complex<double>> series_on_circle(
    const std::vector<std::complex<double>>& coeff, std::complex<double> base,
    std::size_t m_angles);

}  // namespace bergman
