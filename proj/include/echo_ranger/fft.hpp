#pragma once

// Minimal radix-2 FFT and FFT-based linear convolution.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "echo_ranger/error.hpp"

namespace echo_ranger::fft {

using Complex = std::complex<double>;

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// In-place transform; size must be a power of two. The inverse is scaled by 1/n.
inline void transform(std::vector<Complex>& a, bool inverse = false) {
  const std::size_t n = a.size();
  detail::require(n > 0 && (n & (n - 1)) == 0, "fft: size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    const std::size_t half = len / 2;
    // Twiddles per stage, computed directly to keep rounding error flat.
    std::vector<Complex> w(half);
    for (std::size_t k = 0; k < half; ++k) {
      const double a_k = ang * static_cast<double>(k);
      w[k] = Complex(std::cos(a_k), std::sin(a_k));
    }
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const Complex u = a[i + k];
        const Complex v = a[i + k + half] * w[k];
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= inv;
  }
}

inline std::vector<Complex> forward_real(std::span<const double> x, std::size_t n) {
  std::vector<Complex> a(n);
  for (std::size_t i = 0; i < x.size() && i < n; ++i) a[i] = x[i];
  transform(a, false);
  return a;
}

/// Full linear convolution, length a.size() + b.size() - 1.
inline std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  const std::size_t n = next_pow2(out_len);
  auto fa = forward_real(a, n);
  const auto fb = forward_real(b, n);
  for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
  transform(fa, true);
  std::vector<double> out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) out[i] = fa[i].real();
  return out;
}

}  // namespace echo_ranger::fft
