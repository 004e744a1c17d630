#pragma once

// Scene synthesis: image-source room impulse responses, time-varying
// convolution for a moving rig, synthetic rotor ego-noise, diffuse background
// noise and rational resampling.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "echo_ranger/error.hpp"
#include "echo_ranger/fft.hpp"
#include "echo_ranger/signal.hpp"

namespace echo_ranger {

using Vec3 = std::array<double, 3>;
using Rng = std::mt19937_64;

inline double distance(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

struct TrajectoryPoint {
  double time = 0.0;  // s
  Vec3 position{};    // source position, m
};

struct SceneSpec {
  Vec3 room_dims{8.0, 6.0, 5.0};
  double t60 = 0.4;
  double speed_of_sound = kDefaultSpeedOfSound;
  double sample_rate = kDefaultSampleRate;
  double source_mic_offset = 0.2;
  // Unit vector pointing from the source to the microphone; the rig is rigid.
  Vec3 mic_direction{1.0, 0.0, 0.0};
  std::vector<TrajectoryPoint> trajectory;
  std::size_t rir_length = 2560;
  int max_image_order = -1;  // -1: every image that fits in rir_length
  std::size_t hop = 2048;

  Vec3 mic_position(const Vec3& source) const {
    const double n = std::hypot(mic_direction[0], mic_direction[1], mic_direction[2]);
    Vec3 m;
    for (int i = 0; i < 3; ++i) m[i] = source[i] + source_mic_offset * mic_direction[i] / n;
    return m;
  }

  bool inside(const Vec3& p) const noexcept {
    for (int i = 0; i < 3; ++i)
      if (!(p[i] > 0.0 && p[i] < room_dims[i])) return false;
    return true;
  }

  void validate() const {
    for (int i = 0; i < 3; ++i) detail::require(room_dims[i] > 0.0, "scene.room_dims must be positive");
    detail::require(t60 > 0.0, "scene.t60 must be positive");
    detail::require(speed_of_sound > 0.0, "scene.speed_of_sound must be positive");
    detail::require(sample_rate > 0.0, "scene.sample_rate must be positive");
    detail::require(source_mic_offset >= 0.0, "scene.source_mic_offset must be >= 0");
    detail::require(std::hypot(mic_direction[0], mic_direction[1], mic_direction[2]) > 0.0,
                    "scene.mic_direction must be nonzero");
    detail::require(rir_length >= 1, "scene.rir_length must be >= 1");
    detail::require(hop >= 1, "scene.hop must be >= 1");
    detail::require(max_image_order >= -1, "scene.max_image_order must be >= -1");
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
      const auto& p = trajectory[i];
      detail::require(inside(p.position), "scene.trajectory: source leaves the room at point " + std::to_string(i));
      detail::require(inside(mic_position(p.position)),
                      "scene.trajectory: microphone leaves the room at point " + std::to_string(i));
      if (i > 0)
        detail::require(p.time >= trajectory[i - 1].time, "scene.trajectory: times must be nondecreasing");
    }
    if (!trajectory.empty()) {
      const auto d = distance(trajectory.front().position, mic_position(trajectory.front().position));
      detail::require(static_cast<double>(rir_length) > d / speed_of_sound * sample_rate,
                      "scene.rir_length is shorter than the direct-path delay");
    }
  }

  /// Source position at time t (linear interpolation, held constant outside the trajectory).
  Vec3 source_at(double t) const {
    detail::require(!trajectory.empty(), "scene.trajectory is empty");
    if (t <= trajectory.front().time) return trajectory.front().position;
    if (t >= trajectory.back().time) return trajectory.back().position;
    const auto it = std::upper_bound(trajectory.begin(), trajectory.end(), t,
                                     [](double v, const TrajectoryPoint& p) { return v < p.time; });
    const auto& b = *it;
    const auto& a = *(it - 1);
    const double span = b.time - a.time;
    const double w = span > 0.0 ? (t - a.time) / span : 1.0;
    Vec3 out;
    for (int i = 0; i < 3; ++i) out[i] = a.position[i] + w * (b.position[i] - a.position[i]);
    return out;
  }
};

struct RotorNoiseSpec {
  double fundamental = 140.0;  // Hz, two blades at 70 rotations per second
  int num_harmonics = 10;
  double harmonic_decay = 1.0;    // dB per harmonic
  double broadband_level = 20.0;  // dB, broadband power relative to harmonic power
  double duration = 1.0;          // s

  void validate(double sample_rate) const {
    detail::require(fundamental > 0.0, "rotor.fundamental must be positive");
    detail::require(num_harmonics >= 1, "rotor.num_harmonics must be >= 1");
    detail::require(duration > 0.0, "rotor.duration must be positive");
    detail::require(!std::isnan(broadband_level) && broadband_level != std::numeric_limits<double>::infinity(),
                    "rotor.broadband_level must be finite or -inf");
    detail::require(fundamental * num_harmonics < sample_rate / 2.0,
                    "rotor: highest harmonic exceeds the Nyquist frequency");
  }
};

/// Uniform wall reflection coefficient matching t60 by Sabine's formula,
/// beta = sqrt(1 - 24 ln(10) V / (c S t60)).
inline double reflection_coefficient_from_t60(const Vec3& room_dims, double t60, double speed_of_sound) {
  detail::require(t60 > 0.0, "t60 must be positive");
  detail::require(speed_of_sound > 0.0, "speed_of_sound must be positive");
  const double v = room_dims[0] * room_dims[1] * room_dims[2];
  const double s = 2.0 * (room_dims[0] * room_dims[1] + room_dims[0] * room_dims[2] + room_dims[1] * room_dims[2]);
  detail::require(v > 0.0, "room volume must be positive");
  const double absorption = 24.0 * std::numbers::ln10 * v / (speed_of_sound * s * t60);
  detail::require(absorption < 1.0, "t60 is too short for this room: reflection coefficient would be <= 0");
  return std::sqrt(1.0 - absorption);
}

inline std::size_t direct_path_index(const SceneSpec& scene, const Vec3& source, const Vec3& mic) {
  return static_cast<std::size_t>(std::lround(distance(source, mic) / scene.speed_of_sound * scene.sample_rate));
}

/// Image-source room impulse response with integer-sample arrivals and
/// amplitude beta^order / (4 pi r).
inline SampledSignal image_source_rir(const SceneSpec& scene, const Vec3& source, const Vec3& mic) {
  detail::require(scene.inside(source), "image_source_rir: source outside the room");
  detail::require(scene.inside(mic), "image_source_rir: microphone outside the room");
  detail::require(distance(source, mic) > 0.0, "image_source_rir: source and microphone coincide");

  const double beta = reflection_coefficient_from_t60(scene.room_dims, scene.t60, scene.speed_of_sound);
  const double fs = scene.sample_rate;
  const double c = scene.speed_of_sound;
  const std::size_t len = scene.rir_length;
  std::vector<double> h(len, 0.0);

  const double max_path = static_cast<double>(len) * c / fs;
  std::array<int, 3> reach{};
  for (int a = 0; a < 3; ++a) reach[a] = static_cast<int>(std::ceil(max_path / (2.0 * scene.room_dims[a]))) + 1;

  const auto& l = scene.room_dims;
  for (int mx = -reach[0]; mx <= reach[0]; ++mx) {
    for (int my = -reach[1]; my <= reach[1]; ++my) {
      for (int mz = -reach[2]; mz <= reach[2]; ++mz) {
        for (int q = 0; q <= 1; ++q) {
          for (int j = 0; j <= 1; ++j) {
            for (int k = 0; k <= 1; ++k) {
              const int order = std::abs(2 * mx - q) + std::abs(2 * my - j) + std::abs(2 * mz - k);
              if (scene.max_image_order >= 0 && order > scene.max_image_order) continue;
              const Vec3 img{(1 - 2 * q) * source[0] + 2 * mx * l[0], (1 - 2 * j) * source[1] + 2 * my * l[1],
                             (1 - 2 * k) * source[2] + 2 * mz * l[2]};
              const double r = distance(img, mic);
              const long idx = std::lround(r / c * fs);
              if (idx < 0 || static_cast<std::size_t>(idx) >= len) continue;
              h[static_cast<std::size_t>(idx)] += std::pow(beta, order) / (4.0 * std::numbers::pi * r);
            }
          }
        }
      }
    }
  }
  return {std::move(h), fs};
}

/// Direct-path-only impulse response (image order 0).
inline SampledSignal direct_path_rir(const SceneSpec& scene, const Vec3& source, const Vec3& mic) {
  SceneSpec direct = scene;
  direct.max_image_order = 0;
  return image_source_rir(direct, source, mic);
}

namespace detail {

// Samples m0 .. m0+count-1 of the linear convolution (h * s).
inline std::vector<double> convolve_range(std::span<const double> s, std::span<const double> h, std::size_t m0,
                                          std::size_t count) {
  const std::size_t l = h.size();
  std::vector<double> a(count + l - 1, 0.0);
  for (std::size_t p = 0; p < a.size(); ++p) {
    const long idx = static_cast<long>(m0) - static_cast<long>(l) + 1 + static_cast<long>(p);
    if (idx >= 0 && static_cast<std::size_t>(idx) < s.size()) a[p] = s[static_cast<std::size_t>(idx)];
  }
  const auto full = fft::convolve(a, h);
  return {full.begin() + static_cast<long>(l - 1), full.begin() + static_cast<long>(l - 1 + count)};
}

}  // namespace detail

/// Microphone signal for a source moving along scene.trajectory.
///
/// RIRs are evaluated at every hop boundary and the outputs of consecutive
/// RIRs are cross-faded linearly across the hop. The output has the length
/// of the input.
inline SampledSignal moving_convolve(const SampledSignal& source, const SceneSpec& scene) {
  scene.validate();
  detail::require(!scene.trajectory.empty(), "moving_convolve: empty trajectory");
  detail::require(source.sample_rate == scene.sample_rate, "moving_convolve: sample rate mismatch");
  const std::size_t n = source.size();
  const std::size_t hop = scene.hop;
  const std::size_t hops = (n + hop - 1) / hop;
  std::vector<double> out(n, 0.0);
  if (n == 0) return {std::move(out), source.sample_rate};

  std::vector<Vec3> points(hops + 1);
  for (std::size_t i = 0; i <= hops; ++i) {
    points[i] = scene.source_at(static_cast<double>(i * hop) / scene.sample_rate);
    detail::require(scene.inside(points[i]) && scene.inside(scene.mic_position(points[i])),
                    "moving_convolve: trajectory leaves the room");
  }

  SampledSignal h_cur = image_source_rir(scene, points[0], scene.mic_position(points[0]));
  for (std::size_t i = 0; i < hops; ++i) {
    const bool moving = points[i + 1] != points[i];
    SampledSignal h_next = moving ? image_source_rir(scene, points[i + 1], scene.mic_position(points[i + 1])) : h_cur;
    const std::size_t m0 = i * hop;
    const std::size_t count = std::min(hop, n - m0);
    const auto a = detail::convolve_range(source.samples, h_cur.samples, m0, count);
    if (!moving) {
      std::copy(a.begin(), a.end(), out.begin() + static_cast<long>(m0));
    } else {
      const auto b = detail::convolve_range(source.samples, h_next.samples, m0, count);
      for (std::size_t k = 0; k < count; ++k) {
        const double w = static_cast<double>(k) / static_cast<double>(hop);
        out[m0 + k] = (1.0 - w) * a[k] + w * b[k];
      }
    }
    h_cur = std::move(h_next);
  }
  return {std::move(out), source.sample_rate};
}

namespace detail {
inline void normalize_unit_variance(std::vector<double>& x, const char* what) {
  const double v = variance(x);
  require(v > 0.0, std::string(what) + ": generated signal has zero variance");
  const double g = 1.0 / std::sqrt(v);
  for (auto& s : x) s *= g;
}
}  // namespace detail

/// Harmonic rotor tones with random phases plus a white Gaussian floor,
/// normalized to unit variance.
inline SampledSignal synth_rotor_noise(const RotorNoiseSpec& spec, double sample_rate, Rng& rng) {
  detail::require(sample_rate > 0.0, "rotor: sample_rate must be positive");
  spec.validate(sample_rate);
  const auto n = static_cast<std::size_t>(std::max(1L, std::lround(spec.duration * sample_rate)));
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<double> tones(n, 0.0);
  for (int k = 1; k <= spec.num_harmonics; ++k) {
    const double amp = db_to_amplitude(-spec.harmonic_decay * (k - 1));
    const double w = 2.0 * std::numbers::pi * spec.fundamental * k / sample_rate;
    const double ph = phase(rng);
    for (std::size_t i = 0; i < n; ++i) tones[i] += amp * std::cos(w * static_cast<double>(i) + ph);
  }

  std::vector<double> out = tones;
  if (spec.broadband_level != -std::numeric_limits<double>::infinity()) {
    const double tone_power = variance(tones);
    const double sd = std::sqrt(tone_power * db_to_power(spec.broadband_level));
    for (auto& s : out) s += sd * gauss(rng);
  }
  detail::normalize_unit_variance(out, "rotor");
  return {std::move(out), sample_rate};
}

inline constexpr double kDiffuseRingRadius = 1.0;  // m

/// Single-microphone approximation of a cylindrically isotropic field built
/// from `reference`: plane waves from directions evenly spaced on a horizontal
/// circle, each an independently random-phase all-pass copy of the reference
/// delayed by its projection onto a ring of radius kDiffuseRingRadius.
/// The result has unit variance.
inline SampledSignal diffuse_noise(const SampledSignal& reference, int num_directions, double sample_rate,
                                   Rng& rng) {
  detail::require(num_directions >= 8, "diffuse_noise: need at least 8 directions");
  detail::require(!reference.empty() && variance(reference) > 0.0, "diffuse_noise: reference has zero variance");
  const std::size_t n = reference.size();
  const std::size_t m = fft::next_pow2(n);
  const auto spectrum = fft::forward_real(reference.samples, m);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double offset = 2.0 * std::numbers::pi * unit(rng);
  // Combined response of all directions, only for bins 0..m/2.
  std::vector<fft::Complex> response(m / 2 + 1, fft::Complex(0.0, 0.0));
  for (int d = 0; d < num_directions; ++d) {
    const double theta = offset + 2.0 * std::numbers::pi * d / num_directions;
    const double delay = kDiffuseRingRadius * (1.0 + std::cos(theta)) / kDefaultSpeedOfSound * sample_rate;
    for (std::size_t b = 0; b <= m / 2; ++b) {
      double ph = 2.0 * std::numbers::pi * unit(rng);
      if (b == 0 || b == m / 2) ph = unit(rng) < 0.5 ? 0.0 : std::numbers::pi;
      const double w = 2.0 * std::numbers::pi * static_cast<double>(b) / static_cast<double>(m);
      // Integer-sample delay keeps the Nyquist bin real.
      response[b] += std::polar(1.0, ph - w * std::round(delay));
    }
  }
  std::vector<fft::Complex> shaped(m);
  for (std::size_t b = 0; b <= m / 2; ++b) shaped[b] = spectrum[b] * response[b];
  for (std::size_t b = 1; b < m / 2; ++b) shaped[m - b] = std::conj(shaped[b]);
  shaped[0] = fft::Complex(shaped[0].real(), 0.0);
  if (m >= 2) shaped[m / 2] = fft::Complex(shaped[m / 2].real(), 0.0);
  fft::transform(shaped, true);

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = shaped[i].real();
  detail::normalize_unit_variance(out, "diffuse_noise");
  return {std::move(out), sample_rate};
}

inline std::vector<double> white_noise(std::size_t n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& v : out) v = gauss(rng);
  return out;
}

namespace detail {

inline std::pair<long, long> rational_ratio(double from, double to) {
  for (long q = 1; q <= 4096; ++q) {
    const double p = std::round(to / from * static_cast<double>(q));
    if (p >= 1.0 && std::abs(p / static_cast<double>(q) * from - to) <= 1e-9 * to) {
      const long pi = static_cast<long>(p);
      const long g = std::gcd(pi, q);
      return {pi / g, q / g};
    }
  }
  fail("resample: rate ratio is not a small rational number");
}

inline double bessel_i0(double x) {
  double sum = 1.0, term = 1.0;
  for (int k = 1; k < 64; ++k) {
    term *= (x / (2.0 * k)) * (x / (2.0 * k));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

}  // namespace detail

/// Rational resampling by up/down factors p/q with a Kaiser-windowed sinc
/// anti-aliasing filter (zero-phase, no group delay).
inline SampledSignal resample(const SampledSignal& signal, double target_rate) {
  detail::require(target_rate > 0.0 && std::isfinite(target_rate), "resample: target rate must be positive");
  if (target_rate == signal.sample_rate) return signal;
  const auto [p, q] = detail::rational_ratio(signal.sample_rate, target_rate);

  constexpr int kZeroCrossings = 24;
  constexpr double kKaiserBeta = 8.0;
  const long factor = std::max(p, q);
  const double cutoff = 0.5 / static_cast<double>(factor);  // cycles per upsampled sample
  const long half = kZeroCrossings * factor;
  std::vector<double> taps(static_cast<std::size_t>(2 * half + 1));
  const double i0b = detail::bessel_i0(kKaiserBeta);
  for (long t = -half; t <= half; ++t) {
    const double x = static_cast<double>(t);
    const double sinc = t == 0 ? 2.0 * cutoff : std::sin(2.0 * std::numbers::pi * cutoff * x) / (std::numbers::pi * x);
    const double r = x / static_cast<double>(half);
    const double win = detail::bessel_i0(kKaiserBeta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0b;
    taps[static_cast<std::size_t>(t + half)] = static_cast<double>(p) * sinc * win;
  }

  const long n_in = static_cast<long>(signal.size());
  const long n_out = (n_in * p + q - 1) / q;
  std::vector<double> out(static_cast<std::size_t>(n_out), 0.0);
  for (long mo = 0; mo < n_out; ++mo) {
    const long centre = mo * q;  // position on the upsampled grid
    // Input samples n with |n p - centre| <= half.
    const long lo = std::max(0L, (centre - half + p - 1) / p);
    const long hi = std::min(n_in - 1, (centre + half) / p);
    double acc = 0.0;
    for (long ni = lo; ni <= hi; ++ni)
      acc += signal.samples[static_cast<std::size_t>(ni)] * taps[static_cast<std::size_t>(centre - ni * p + half)];
    out[static_cast<std::size_t>(mo)] = acc;
  }
  return {std::move(out), target_rate};
}

/// T60 from a line fit to the Schroeder energy decay curve between from_db and to_db.
inline double estimate_t60_schroeder(std::span<const double> rir, double sample_rate, double from_db = -5.0,
                                     double to_db = -25.0) {
  detail::require(!rir.empty(), "schroeder: empty impulse response");
  detail::require(to_db < from_db && from_db <= 0.0, "schroeder: invalid fit range");
  std::vector<double> edc(rir.size());
  double acc = 0.0;
  for (std::size_t i = rir.size(); i-- > 0;) {
    acc += rir[i] * rir[i];
    edc[i] = acc;
  }
  detail::require(acc > 0.0, "schroeder: impulse response has no energy");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < edc.size(); ++i) {
    if (edc[i] <= 0.0) break;
    const double db = 10.0 * std::log10(edc[i] / acc);
    if (db > from_db) continue;
    if (db < to_db) break;
    const double t = static_cast<double>(i) / sample_rate;
    sx += t;
    sy += db;
    sxx += t * t;
    sxy += t * db;
    ++count;
  }
  detail::require(count >= 2, "schroeder: decay does not span the fit range");
  const double nn = static_cast<double>(count);
  const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  detail::require(slope < 0.0, "schroeder: energy decay curve is not decaying");
  return -60.0 / slope;
}

}  // namespace echo_ranger
