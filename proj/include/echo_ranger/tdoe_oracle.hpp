#pragma once

// Dense reference for the gain estimator. Materializes the delay operator as
// an explicit N x N permutation matrix; intended for tests on small frames.

#include <cstddef>
#include <vector>

#include "echo_ranger/error.hpp"
#include "echo_ranger/signal.hpp"

namespace echo_ranger {

inline constexpr std::size_t kOracleMaxFrame = 1024;

/// Permutation matrix of the cyclic delay, row-major: row k picks x[(k - tau) mod N].
inline std::vector<double> shift_matrix(std::size_t n, std::size_t tau) {
  std::vector<double> m(n * n, 0.0);
  for (std::size_t col = 0; col < n; ++col) m[((col + tau) % n) * n + col] = 1.0;
  return m;
}

inline double brute_force_gain_oracle(const FrameObservation& frame, int delta_tau) {
  frame.validate();
  const std::size_t n = frame.size();
  detail::require(n <= kOracleMaxFrame, "oracle: frame too large for a dense shift matrix");
  detail::require(delta_tau >= 0 && static_cast<std::size_t>(delta_tau) < n, "oracle: delay outside [0, N)");

  const auto d = shift_matrix(n, static_cast<std::size_t>(delta_tau));
  std::vector<double> shifted(n, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) shifted[r] += d[r * n + c] * frame.direct[c];

  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    num += (frame.y[k] - frame.direct[k]) * shifted[k];
    den += frame.direct[k] * frame.direct[k];
  }
  detail::require(den > 0.0, "direct-path component is all zero");
  return num / den;
}

}  // namespace echo_ranger
