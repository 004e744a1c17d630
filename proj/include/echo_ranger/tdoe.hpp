#pragma once

#include <cstddef>
#include <vector>

#include "echo_ranger/error.hpp"
#include "echo_ranger/signal.hpp"

namespace echo_ranger {

struct TdoeEstimate {
  int delta_tau = 0;       // samples
  double alpha = 0.0;      // signed gain ratio g_r / g_d at delta_tau
  double distance_m = 0.0;
  std::vector<int> delays;         // candidate delays, same order as objective
  std::vector<double> objective;   // alpha_hat(delay)^2
};

/// Reflector distance from a TDOE, assuming collocated source and receiver.
inline double tdoe_to_distance(double delta_tau, double sample_rate = kDefaultSampleRate,
                               double speed_of_sound = kDefaultSpeedOfSound) {
  detail::require(delta_tau >= 0.0, "tdoe_to_distance: negative delay");
  return speed_of_sound * (delta_tau / sample_rate) / 2.0;
}

/// Inverse of tdoe_to_distance, rounded to the nearest sample.
inline int distance_to_tdoe(double distance_m, double sample_rate = kDefaultSampleRate,
                            double speed_of_sound = kDefaultSpeedOfSound) {
  return static_cast<int>(std::lround(2.0 * distance_m * sample_rate / speed_of_sound));
}

namespace detail {

inline double direct_energy_checked(const FrameObservation& frame) {
  frame.validate();
  const double e = energy(frame.direct);
  require(e > 0.0, "direct-path component is all zero");
  return e;
}

// Cross-correlation of the residual y - x_d with x_d cyclically delayed by tau.
inline double residual_correlation(std::span<const double> residual, std::span<const double> direct,
                                   std::size_t tau) {
  const std::size_t n = residual.size();
  double acc = 0.0;
  // (D_tau x)[k] = x[k - tau] for k >= tau, x[k - tau + n] otherwise.
  for (std::size_t k = 0; k < tau; ++k) acc += residual[k] * direct[k + n - tau];
  for (std::size_t k = tau; k < n; ++k) acc += residual[k] * direct[k - tau];
  return acc;
}

inline std::vector<double> residual_of(const FrameObservation& frame) {
  std::vector<double> r(frame.size());
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = frame.y[k] - frame.direct[k];
  return r;
}

}  // namespace detail

/// Least-squares gain ratio for a given delay:
/// alpha(tau) = (y - x_d)^T D_tau x_d / ||x_d||^2.
inline double estimate_gain(const FrameObservation& frame, int delta_tau) {
  const double e = detail::direct_energy_checked(frame);
  detail::require(delta_tau >= 0 && static_cast<std::size_t>(delta_tau) < frame.size(),
                  "estimate_gain: delay outside [0, N)");
  const auto residual = detail::residual_of(frame);
  return detail::residual_correlation(residual, frame.direct, static_cast<std::size_t>(delta_tau)) / e;
}

/// Grid search for the TDOE maximizing alpha(tau)^2. Ties go to the smallest delay.
inline TdoeEstimate estimate_tdoe(const FrameObservation& frame, const DelayGrid& grid,
                                  double sample_rate = kDefaultSampleRate,
                                  double speed_of_sound = kDefaultSpeedOfSound) {
  const double e = detail::direct_energy_checked(frame);
  grid.validate(frame.size());
  const auto residual = detail::residual_of(frame);

  TdoeEstimate est;
  est.delays = grid.delays();
  est.objective.reserve(est.delays.size());
  double best = -1.0;
  for (int tau : est.delays) {
    const double a = detail::residual_correlation(residual, frame.direct, static_cast<std::size_t>(tau)) / e;
    const double j = a * a;
    est.objective.push_back(j);
    if (j > best) {
      best = j;
      est.delta_tau = tau;
      est.alpha = a;
    }
  }
  est.distance_m = tdoe_to_distance(est.delta_tau, sample_rate, speed_of_sound);
  return est;
}

}  // namespace echo_ranger
