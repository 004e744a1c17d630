#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "echo_ranger/error.hpp"

namespace echo_ranger {

inline constexpr double kDefaultSampleRate = 5512.5;
inline constexpr double kDefaultSpeedOfSound = 343.0;
inline constexpr std::size_t kDefaultFrameLength = 2048;

/// Mono sample buffer tagged with its sample rate.
struct SampledSignal {
  std::vector<double> samples;
  double sample_rate = kDefaultSampleRate;

  SampledSignal() = default;
  SampledSignal(std::vector<double> s, double fs) : samples(std::move(s)), sample_rate(fs) {
    validate();
  }

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
  std::span<const double> view() const noexcept { return samples; }
  double duration() const noexcept { return static_cast<double>(samples.size()) / sample_rate; }

  void validate() const {
    detail::require(sample_rate > 0.0 && std::isfinite(sample_rate),
                    "sample_rate must be positive");
    for (double v : samples) detail::require(std::isfinite(v), "signal contains non-finite samples");
  }
};

/// An observed frame `y` and the known direct-path component `direct`,
/// time-aligned sample by sample. `n0` locates the frame in its parent stream.
struct FrameObservation {
  std::vector<double> y;
  std::vector<double> direct;
  std::size_t n0 = 0;
  std::optional<double> noise_variance;

  FrameObservation() = default;
  FrameObservation(std::vector<double> observed, std::vector<double> direct_path, std::size_t start = 0,
                   std::optional<double> sigma2 = std::nullopt)
      : y(std::move(observed)), direct(std::move(direct_path)), n0(start), noise_variance(sigma2) {
    validate();
  }

  std::size_t size() const noexcept { return y.size(); }

  void validate() const {
    detail::require(y.size() == direct.size(), "frame: y and x_d lengths differ");
    detail::require(y.size() >= 2, "frame: length must be at least 2");
  }
};

/// Candidate delays {min_delay, min_delay + step, ..., <= max_delay}.
struct DelayGrid {
  int min_delay = 1;
  int max_delay = 64;
  int step = 1;

  void validate(std::size_t frame_length) const {
    detail::require(min_delay >= 0, "grid: min_delay must be >= 0");
    detail::require(step >= 1, "grid: step must be >= 1");
    detail::require(min_delay <= max_delay, "grid: min_delay must not exceed max_delay");
    detail::require(static_cast<std::size_t>(max_delay) < frame_length,
                    "grid: max_delay must be smaller than the frame length");
  }

  std::vector<int> delays() const {
    std::vector<int> out;
    for (int d = min_delay; d <= max_delay; d += step) out.push_back(d);
    return out;
  }

  bool contains(int d) const noexcept {
    return d >= min_delay && d <= max_delay && (d - min_delay) % step == 0;
  }
};

/// D_tau applied to x: output[k] = x[(k - tau) mod N].
inline std::vector<double> cyclic_shift(std::span<const double> x, std::size_t tau) {
  const std::size_t n = x.size();
  std::vector<double> out(n);
  if (n == 0) return out;
  tau %= n;
  for (std::size_t k = 0; k < n; ++k) out[(k + tau) % n] = x[k];
  return out;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  detail::require(a.size() == b.size(), "dot: length mismatch");
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double energy(std::span<const double> x) { return dot(x, x); }

inline double mean(std::span<const double> x) {
  detail::require(!x.empty(), "mean of empty signal");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Population variance (divisor = length).
inline double variance(std::span<const double> x) {
  detail::require(!x.empty(), "variance of empty signal");
  const double m = mean(x);
  double acc = 0.0;
  for (double v : x) acc += (v - m) * (v - m);
  return acc / static_cast<double>(x.size());
}

inline double variance(const SampledSignal& s) { return variance(s.view()); }

inline double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }
inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }
inline double power_to_db(double ratio) { return 10.0 * std::log10(ratio); }

/// Gain g such that 10 log10(signal_var / (g^2 noise_var)) == ratio_db.
inline double mixing_gain(double signal_var, double noise_var, double ratio_db) {
  detail::require(noise_var > 0.0, "mix: noise has zero variance");
  if (ratio_db == std::numeric_limits<double>::infinity()) return 0.0;
  return std::sqrt(signal_var / (noise_var * db_to_power(ratio_db)));
}

/// Returns signal + g * noise at the requested signal-to-noise ratio.
///
/// A ratio of -inf marks an absent signal: the noise is returned unscaled.
/// A ratio of +inf returns the signal untouched.
inline SampledSignal mix_at_ratio(const SampledSignal& signal, const SampledSignal& noise, double ratio_db) {
  detail::require(signal.size() == noise.size(), "mix: length mismatch");
  detail::require(signal.sample_rate == noise.sample_rate, "mix: sample rate mismatch");
  detail::require(!std::isnan(ratio_db), "mix: ratio is NaN");
  const double nv = variance(noise);
  detail::require(nv > 0.0, "mix: noise has zero variance");
  if (ratio_db == -std::numeric_limits<double>::infinity()) return noise;
  const double g = mixing_gain(variance(signal), nv, ratio_db);
  std::vector<double> out(signal.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = signal.samples[i] + g * noise.samples[i];
  return {std::move(out), signal.sample_rate};
}

}  // namespace echo_ranger
