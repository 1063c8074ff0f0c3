#include "bergman/fft.hpp"

#include <cmath>

namespace bergman {

void fft_pow2(std::vector<std::complex<double>>& x, int sign) {
    const std::size_t n = x.size();
    if (n < 2) return;
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    const double two_pi = 2.0 * M_PI;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = sign * two_pi / static_cast<double>(len);
        std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = x[i + k];
                std::complex<double> v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::vector<std::complex<double>> series_on_circle(
    const std::vector<std::complex<double>>& coeff, std::complex<double> base,
    std::size_t m_angles) {
    std::vector<std::complex<double>> folded(m_angles, std::complex<double>(0.0, 0.0));
    std::complex<double> p(1.0, 0.0);
    for (std::size_t k = 0; k < coeff.size(); ++k) {
        folded[k % m_angles] += coeff[k] * p;
        p *= base;
        // re-anchor the power to avoid slow drift on long series
        if ((k & 1023u) == 1023u) p = std::pow(base, static_cast<double>(k + 1));
    }
    fft_pow2(folded, +1);
    return folded;
}

}  // namespace bergman
