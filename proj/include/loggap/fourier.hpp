#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "loggap/errors.hpp"
#include "loggap/well.hpp"

namespace loggap {

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// Iterative Cooley-Tukey, size must be a power of two. sign = -1 forward,
/// +1 inverse (unnormalized).
inline void fft_pow2(std::vector<std::complex<double>>& a, int sign) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const std::size_t half = len / 2;
        std::vector<std::complex<double>> w(half);
        for (std::size_t k = 0; k < half; ++k)
            w[k] = std::polar(1.0, angle * static_cast<double>(k));
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + half] * w[k];
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
        }
    }
}

/// Bluestein chirp-z: arbitrary-size DFT via a power-of-two convolution.
/// The quadratic phase is reduced mod 2n to keep the trig argument small.
inline void fft_bluestein(std::vector<std::complex<double>>& a, int sign) {
    const std::size_t n = a.size();
    const std::size_t m = next_pow2(2 * n - 1);
    std::vector<std::complex<double>> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::uint64_t k2 = (static_cast<std::uint64_t>(k) * k) % (2 * n);
        const double angle = sign * std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
        chirp[k] = std::polar(1.0, angle);
    }
    std::vector<std::complex<double>> u(m), v(m);
    for (std::size_t k = 0; k < n; ++k) u[k] = a[k] * chirp[k];
    v[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) v[k] = v[m - k] = std::conj(chirp[k]);
    fft_pow2(u, -1);
    fft_pow2(v, -1);
    for (std::size_t k = 0; k < m; ++k) u[k] *= v[k];
    fft_pow2(u, +1);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) a[k] = u[k] * inv_m * chirp[k];
}

/// Unnormalized transform of any size; sign = -1 forward, +1 inverse.
inline void fft_any(std::vector<std::complex<double>>& a, int sign) {
    if (a.size() <= 1) return;
    if (is_pow2(a.size()))
        fft_pow2(a, sign);
    else
        fft_bluestein(a, sign);
}

}  // namespace detail

/// Forward DFT of a real series: X[k] = sum_n x[n]·e^{-2πi kn/N}.
inline std::vector<std::complex<double>> dft(std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        if (is_missing(values[i]))
            throw DataError("dft input has a missing sample at index " + std::to_string(i));
    std::vector<std::complex<double>> a(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) a[i] = values[i];
    detail::fft_any(a, -1);
    return a;
}

/// Inverse DFT back to a real series: x[n] = (1/N) sum_k X[k]·e^{+2πi kn/N}.
/// The spectrum must be conjugate-symmetric (i.e. come from a real series).
inline std::vector<double> idft(std::span<const std::complex<double>> spectrum) {
    const std::size_t n = spectrum.size();
    if (n == 0) return {};
    double max_mag = 0.0;
    for (const auto& z : spectrum) max_mag = std::max(max_mag, std::abs(z));
    const double tol = 1e-9 * std::max(1.0, max_mag);
    if (std::fabs(spectrum[0].imag()) > tol)
        throw NumericError("idft: spectrum is not conjugate-symmetric (bin 0 not real)");
    for (std::size_t k = 1; k < n; ++k) {
        if (std::abs(spectrum[k] - std::conj(spectrum[n - k])) > tol)
            throw NumericError("idft: spectrum is not conjugate-symmetric at bin " + std::to_string(k));
    }
    std::vector<std::complex<double>> a(spectrum.begin(), spectrum.end());
    detail::fft_any(a, +1);
    std::vector<double> out(n);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i].real() * inv_n;
    return out;
}

/// How many low-frequency bins to zero when detrending.
struct DetrendConfig {
    std::size_t cutoff = 5;
};

/// High-pass detrend: zero bins 0..cutoff-1 plus their conjugate mirrors and
/// invert. Output has zero mean (the DC bin is removed). Gaps are linearly
/// interpolated for the transform and re-masked afterwards.
inline Curve fourier_detrend(const Curve& curve, const DetrendConfig& config = {}) {
    const std::size_t n = curve.values.size();
    if (config.cutoff < 1 || 2 * config.cutoff >= n)
        throw std::invalid_argument("detrend cutoff out of range: " + std::to_string(config.cutoff) +
                                    " for series length " + std::to_string(n));
    std::vector<double> filled = curve.values;
    fill_missing_inplace(filled);
    auto spectrum = dft(filled);
    for (std::size_t k = 0; k < config.cutoff; ++k) {
        spectrum[k] = 0.0;
        if (k > 0) spectrum[n - k] = 0.0;
    }
    auto detrended = idft(spectrum);
    Curve out = curve;
    for (std::size_t i = 0; i < n; ++i)
        out.values[i] = is_missing(curve.values[i]) ? missing_value() : detrended[i];
    return out;
}

}  // namespace loggap
