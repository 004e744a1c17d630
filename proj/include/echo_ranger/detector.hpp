#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "echo_ranger/error.hpp"
#include "echo_ranger/signal.hpp"

namespace echo_ranger {

inline constexpr double kDefaultLnGamma = 2500.0;

enum class Hypothesis { H0, H1 };

struct DetectionOutcome {
  double statistic = 0.0;  // ||y - x_d||^2
  double threshold = 0.0;  // 2 sigma_v^2 ln(gamma)
  Hypothesis decision = Hypothesis::H0;
  double ln_gamma = 0.0;
  double noise_variance = 0.0;

  bool reflector_present() const noexcept { return decision == Hypothesis::H1; }
};

/// Maximum-likelihood estimate of the reflected component under H1.
inline std::vector<double> reflected_component(const FrameObservation& frame) {
  frame.validate();
  std::vector<double> r(frame.size());
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = frame.y[k] - frame.direct[k];
  return r;
}

/// Energy detector: H1 iff ||y - x_d||^2 > 2 sigma_v^2 ln(gamma).
inline DetectionOutcome detect(const FrameObservation& frame, double ln_gamma = kDefaultLnGamma) {
  detail::require(frame.noise_variance.has_value() && *frame.noise_variance > 0.0,
                  "detect: noise variance is unset or zero; calibrate it from free-space frames "
                  "(calibrate_noise_variance) or supply it in the configuration");
  detail::require(std::isfinite(ln_gamma), "detect: ln_gamma must be finite");
  DetectionOutcome out;
  out.noise_variance = *frame.noise_variance;
  out.ln_gamma = ln_gamma;
  out.statistic = energy(reflected_component(frame));
  out.threshold = 2.0 * out.noise_variance * ln_gamma;
  out.decision = out.statistic > out.threshold ? Hypothesis::H1 : Hypothesis::H0;
  return out;
}

/// Mean residual variance over frames captured away from any reflector.
inline double calibrate_noise_variance(std::span<const FrameObservation> frames) {
  detail::require(!frames.empty(), "calibrate_noise_variance: no frames");
  double acc = 0.0;
  for (const auto& f : frames) acc += variance(reflected_component(f));
  return acc / static_cast<double>(frames.size());
}

}  // namespace echo_ranger
