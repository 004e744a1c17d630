#pragma once

// Monte-Carlo experiments: distance x SDNR accuracy sweep, SENR comparison
// against a probe-signal baseline, and a wall-to-wall traversal.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "echo_ranger/acoustics.hpp"
#include "echo_ranger/detector.hpp"
#include "echo_ranger/error.hpp"
#include "echo_ranger/parallel.hpp"
#include "echo_ranger/signal.hpp"
#include "echo_ranger/tdoe.hpp"

namespace echo_ranger {

struct SweepConfig {
  std::vector<double> distances{0.1, 0.3, 0.5, 0.7, 0.9, 1.1, 1.3, 1.5, 1.7, 1.9};
  std::vector<double> sdnr_points{-40.0, -30.0, -20.0, -10.0, 0.0, 10.0};
  std::vector<double> senr_points{-40.0, -30.0, -20.0, -10.0, 0.0, 10.0, 20.0};
  int trials = 100;
  std::uint64_t seed = 2020;
  DelayGrid grid{};
  std::size_t frame_length = kDefaultFrameLength;
  double ln_gamma = kDefaultLnGamma;

  double comparison_distance = 0.5;  // m, SENR experiment
  double comparison_sdnr_db = 40.0;
  double traversal_sdnr_db = 10.0;
  double white_snr_db = 40.0;        // white floor relative to the observed signal
  int diffuse_directions = 32;
  int calibration_frames = 10;

  void validate() const {
    detail::require(trials >= 1, "sweep.trials must be >= 1");
    detail::require(!distances.empty(), "sweep.distances must be nonempty");
    detail::require(!sdnr_points.empty(), "sweep.sdnr_points must be nonempty");
    detail::require(!senr_points.empty(), "sweep.senr_points must be nonempty");
    for (double d : distances) detail::require(d > 0.0, "sweep.distances must be positive");
    detail::require(frame_length >= 2, "sweep.frame_length must be >= 2");
    grid.validate(frame_length);
    detail::require(std::isfinite(ln_gamma), "sweep.ln_gamma must be finite");
    detail::require(comparison_distance > 0.0, "sweep.comparison_distance must be positive");
    detail::require(diffuse_directions >= 8, "sweep.diffuse_directions must be >= 8");
    detail::require(calibration_frames >= 1, "sweep.calibration_frames must be >= 1");
  }
};

/// Straight source path along x at fixed (y, z); the microphone trails the source.
struct TraversalPath {
  double start_x = 0.3;
  double end_x = 7.9;
  double y = 3.0;
  double z = 2.5;
  double step_m = 0.05;  // source displacement per frame

  void validate() const {
    detail::require(step_m > 0.0, "traversal.step_m must be positive");
    detail::require(end_x != start_x, "traversal.start_x and traversal.end_x must differ");
  }
};

struct AccuracyCell {
  double distance = 0.0;
  double snr = 0.0;  // SDNR or SENR, dB
  double accuracy = 0.0;
  int trials = 0;
  double mean_abs_tdoe_error = 0.0;
  double alpha_mean = 0.0;
  double detect_rate = 0.0;
  int true_delta_tau = 0;
};

struct SenrRow {
  double senr_db = 0.0;
  double accuracy_intrusive = 0.0;
  double accuracy_proposed = 0.0;
  AccuracyCell intrusive;
};

struct SenrComparison {
  std::vector<SenrRow> rows;
  AccuracyCell proposed;  // no probe, SENR = -inf
};

struct TraversalFrame {
  std::size_t index = 0;
  double position_m = 0.0;  // source x at the frame centre
  double wall_distance_m = 0.0;
  int true_delta_tau = 0;
  bool within_tolerance = false;
  TdoeEstimate estimate;
  DetectionOutcome detection;
};

struct TraversalResult {
  std::vector<TraversalFrame> frames;
  double noise_variance = 0.0;
  SampledSignal observed;  // full microphone stream, warm-up included
  SampledSignal direct;    // its direct-path component
};

/// +-10 % of the true TDOE, widened to +-1 sample where that is narrower.
inline bool tdoe_within_tolerance(int estimate, int truth) {
  const double tol = std::max(1.0, 0.1 * static_cast<double>(truth));
  return std::abs(static_cast<double>(estimate - truth)) <= tol;
}

/// Distance from the nearest rig element (source or microphone) to the nearest wall.
inline double nearest_wall_distance(const SceneSpec& scene, const Vec3& source) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vec3& p : {source, scene.mic_position(source)})
    for (int a = 0; a < 3; ++a) best = std::min({best, p[a], scene.room_dims[a] - p[a]});
  return best;
}

/// Lag between the direct impulse and the next nonzero tap of an RIR.
inline int first_echo_lag(std::span<const double> rir, std::size_t direct_index) {
  for (std::size_t i = direct_index + 1; i < rir.size(); ++i)
    if (rir[i] != 0.0) return static_cast<int>(i - direct_index);
  return -1;
}

inline Rng trial_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t cell, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(cell),
                    static_cast<std::uint32_t>(trial)};
  return Rng(seq);
}

namespace detail {

enum Stream : std::uint64_t { kSweep = 1, kIntrusive = 2, kProposed = 3, kCalibration = 4, kTraversal = 5 };

struct StaticRig {
  Vec3 source{};
  Vec3 mic{};
  SampledSignal rir;
  SampledSignal direct;
  std::size_t direct_index = 0;
};

inline StaticRig make_rig(const SceneSpec& scene, const Vec3& source) {
  StaticRig rig;
  rig.source = source;
  rig.mic = scene.mic_position(source);
  rig.rir = image_source_rir(scene, rig.source, rig.mic);
  rig.direct = direct_path_rir(scene, rig.source, rig.mic);
  rig.direct_index = direct_path_index(scene, rig.source, rig.mic);
  return rig;
}

// Rig approaching the x = 0 wall: source at distance d, microphone trailing behind it.
inline SceneSpec static_scene(const SceneSpec& base) {
  SceneSpec s = base;
  s.mic_direction = {1.0, 0.0, 0.0};
  s.trajectory.clear();
  return s;
}

inline Vec3 wall_placement(const SceneSpec& scene, double d) {
  return {d, scene.room_dims[1] / 2.0, scene.room_dims[2] / 2.0};
}

inline Vec3 free_space_placement(const SceneSpec& scene) {
  return {scene.room_dims[0] / 2.0 - scene.source_mic_offset / 2.0, scene.room_dims[1] / 2.0,
          scene.room_dims[2] / 2.0};
}

inline RotorNoiseSpec with_samples(RotorNoiseSpec spec, std::size_t n, double fs) {
  spec.duration = static_cast<double>(n) / fs;
  return spec;
}

inline std::vector<double> slice(std::span<const double> x, std::size_t start, std::size_t count) {
  return {x.begin() + static_cast<long>(start), x.begin() + static_cast<long>(start + count)};
}

// Diffuse noise from an independent ego-noise realization plus a white floor.
struct NoiseBuffers {
  std::vector<double> diffuse;
  std::vector<double> white;
};

inline NoiseBuffers make_noise(const RotorNoiseSpec& rotor, std::size_t n, double fs, int directions, Rng& rng) {
  const auto reference = synth_rotor_noise(with_samples(rotor, n, fs), fs, rng);
  NoiseBuffers b;
  b.diffuse = diffuse_noise(reference, directions, fs, rng).samples;
  b.white = white_noise(n, rng);
  return b;
}

// Adds background noise to `clean` so that var(clean)/var(diffuse) = sdnr_db
// and var(clean)/var(white) = white_snr_db over the window.
inline std::vector<double> add_background_at_ratio(const std::vector<double>& clean, std::span<const double> diffuse,
                                                   std::span<const double> white, double sdnr_db,
                                                   double white_snr_db) {
  const double cv = variance(clean);
  const double gd = mixing_gain(cv, variance(diffuse), sdnr_db);
  const double gw = mixing_gain(cv, variance(white), white_snr_db);
  std::vector<double> y(clean.size());
  for (std::size_t k = 0; k < y.size(); ++k) y[k] = clean[k] + gd * diffuse[k] + gw * white[k];
  return y;
}

struct TrialOutcome {
  int delta_tau = 0;
  double alpha = 0.0;
  bool detected = false;
};

// One static frame: source x rig RIR, observed over [L, L + N).
inline FrameObservation simulate_ego_frame(const StaticRig& rig, const SceneSpec& scene, const RotorNoiseSpec& rotor,
                                           const SweepConfig& cfg, double sdnr_db, Rng& rng) {
  const std::size_t l = scene.rir_length;
  const std::size_t n = cfg.frame_length;
  const double fs = scene.sample_rate;
  const auto s = synth_rotor_noise(with_samples(rotor, l + n, fs), fs, rng);
  const auto clean = convolve_range(s.samples, rig.rir.samples, l, n);
  auto direct = convolve_range(s.samples, rig.direct.samples, l, n);
  const auto noise = make_noise(rotor, l + n, fs, cfg.diffuse_directions, rng);
  auto y = add_background_at_ratio(clean, slice(noise.diffuse, l, n), slice(noise.white, l, n), sdnr_db,
                                   cfg.white_snr_db);
  return {std::move(y), std::move(direct), l};
}

inline double calibrate_static(const SceneSpec& scene, const RotorNoiseSpec& rotor, const SweepConfig& cfg,
                               double sdnr_db, std::uint64_t cell) {
  const auto rig = make_rig(scene, free_space_placement(scene));
  std::vector<FrameObservation> frames(static_cast<std::size_t>(cfg.calibration_frames));
  parallel_for(frames.size(), [&](std::size_t i) {
    auto rng = trial_rng(cfg.seed, kCalibration, cell, i);
    frames[i] = simulate_ego_frame(rig, scene, rotor, cfg, sdnr_db, rng);
  });
  return calibrate_noise_variance(frames);
}

inline AccuracyCell aggregate(double distance, double snr, int truth, const std::vector<TrialOutcome>& outcomes) {
  AccuracyCell cell;
  cell.distance = distance;
  cell.snr = snr;
  cell.trials = static_cast<int>(outcomes.size());
  cell.true_delta_tau = truth;
  double hits = 0, err = 0, alpha = 0, det = 0;
  for (const auto& o : outcomes) {
    hits += tdoe_within_tolerance(o.delta_tau, truth) ? 1.0 : 0.0;
    err += std::abs(static_cast<double>(o.delta_tau - truth));
    alpha += o.alpha;
    det += o.detected ? 1.0 : 0.0;
  }
  const double t = static_cast<double>(outcomes.size());
  cell.accuracy = hits / t;
  cell.mean_abs_tdoe_error = err / t;
  cell.alpha_mean = alpha / t;
  cell.detect_rate = det / t;
  return cell;
}

inline std::string error_context(const std::string& where, const std::exception& e) {
  return where + ": " + e.what();
}

}  // namespace detail

/// Probe-signal baseline: the frame's `direct` member holds the direct-path
/// image of the known probe; the ego-noise is additive interference.
inline TdoeEstimate intrusive_baseline_estimate(const FrameObservation& probe_frame, const DelayGrid& grid,
                                                double sample_rate = kDefaultSampleRate,
                                                double speed_of_sound = kDefaultSpeedOfSound) {
  return estimate_tdoe(probe_frame, grid, sample_rate, speed_of_sound);
}

/// Accuracy grid over (distance, SDNR), row-major in distance.
inline std::vector<AccuracyCell> run_distance_sdnr_sweep(const SweepConfig& cfg, const SceneSpec& base = {},
                                                         const RotorNoiseSpec& rotor = {}) {
  cfg.validate();
  const SceneSpec scene = detail::static_scene(base);
  scene.validate();

  std::vector<double> noise_var(cfg.sdnr_points.size());
  for (std::size_t j = 0; j < cfg.sdnr_points.size(); ++j)
    noise_var[j] = detail::calibrate_static(scene, rotor, cfg, cfg.sdnr_points[j], j);

  std::vector<AccuracyCell> cells;
  cells.reserve(cfg.distances.size() * cfg.sdnr_points.size());
  for (std::size_t i = 0; i < cfg.distances.size(); ++i) {
    const double d = cfg.distances[i];
    detail::StaticRig rig;
    try {
      rig = detail::make_rig(scene, detail::wall_placement(scene, d));
    } catch (const std::exception& e) {
      throw Error(detail::error_context("sweep cell distance=" + std::to_string(d), e));
    }
    const int truth = distance_to_tdoe(d, scene.sample_rate, scene.speed_of_sound);
    for (std::size_t j = 0; j < cfg.sdnr_points.size(); ++j) {
      const std::uint64_t cell_id = i * cfg.sdnr_points.size() + j;
      std::vector<detail::TrialOutcome> outcomes(static_cast<std::size_t>(cfg.trials));
      try {
        parallel_for(outcomes.size(), [&](std::size_t t) {
          auto rng = trial_rng(cfg.seed, detail::kSweep, cell_id, t);
          auto frame = detail::simulate_ego_frame(rig, scene, rotor, cfg, cfg.sdnr_points[j], rng);
          frame.noise_variance = noise_var[j];
          const auto est = estimate_tdoe(frame, cfg.grid, scene.sample_rate, scene.speed_of_sound);
          const auto det = detect(frame, cfg.ln_gamma);
          outcomes[t] = {est.delta_tau, est.alpha, det.reflector_present()};
        });
      } catch (const std::exception& e) {
        throw Error(detail::error_context(
            "sweep cell distance=" + std::to_string(d) + " sdnr=" + std::to_string(cfg.sdnr_points[j]), e));
      }
      cells.push_back(detail::aggregate(d, cfg.sdnr_points[j], truth, outcomes));
    }
  }
  return cells;
}

/// Probe-signal baseline versus the ego-noise estimator at a fixed distance.
inline SenrComparison run_senr_comparison(const SweepConfig& cfg, const SceneSpec& base = {},
                                          const RotorNoiseSpec& rotor = {}) {
  cfg.validate();
  const SceneSpec scene = detail::static_scene(base);
  scene.validate();
  const double d = cfg.comparison_distance;
  const auto rig = detail::make_rig(scene, detail::wall_placement(scene, d));
  const int truth = distance_to_tdoe(d, scene.sample_rate, scene.speed_of_sound);
  const std::size_t l = scene.rir_length;
  const std::size_t n = cfg.frame_length;
  const double fs = scene.sample_rate;

  SenrComparison out;
  {
    std::vector<detail::TrialOutcome> outcomes(static_cast<std::size_t>(cfg.trials));
    parallel_for(outcomes.size(), [&](std::size_t t) {
      auto rng = trial_rng(cfg.seed, detail::kProposed, 0, t);
      const auto frame = detail::simulate_ego_frame(rig, scene, rotor, cfg, cfg.comparison_sdnr_db, rng);
      const auto est = estimate_tdoe(frame, cfg.grid, fs, scene.speed_of_sound);
      outcomes[t] = {est.delta_tau, est.alpha, false};
    });
    out.proposed = detail::aggregate(d, -std::numeric_limits<double>::infinity(), truth, outcomes);
  }

  for (std::size_t j = 0; j < cfg.senr_points.size(); ++j) {
    const double senr = cfg.senr_points[j];
    std::vector<detail::TrialOutcome> outcomes(static_cast<std::size_t>(cfg.trials));
    try {
      parallel_for(outcomes.size(), [&](std::size_t t) {
        auto rng = trial_rng(cfg.seed, detail::kIntrusive, j, t);
        const auto probe = white_noise(l + n, rng);
        const auto ego = synth_rotor_noise(detail::with_samples(rotor, l + n, fs), fs, rng);
        // Probe and ego-noise share the emission point; SENR is measured at the source.
        const double g = mixing_gain(variance(probe), variance(ego), senr);
        std::vector<double> emitted(l + n);
        for (std::size_t k = 0; k < emitted.size(); ++k) emitted[k] = probe[k] + g * ego.samples[k];
        const auto clean = detail::convolve_range(emitted, rig.rir.samples, l, n);
        auto probe_direct = detail::convolve_range(probe, rig.direct.samples, l, n);
        const auto noise = detail::make_noise(rotor, l + n, fs, cfg.diffuse_directions, rng);
        auto y = detail::add_background_at_ratio(clean, detail::slice(noise.diffuse, l, n),
                                                 detail::slice(noise.white, l, n), cfg.comparison_sdnr_db,
                                                 cfg.white_snr_db);
        const FrameObservation frame(std::move(y), std::move(probe_direct), l);
        const auto est = intrusive_baseline_estimate(frame, cfg.grid, fs, scene.speed_of_sound);
        outcomes[t] = {est.delta_tau, est.alpha, false};
      });
    } catch (const std::exception& e) {
      throw Error(detail::error_context("senr point " + std::to_string(senr), e));
    }
    SenrRow row;
    row.senr_db = senr;
    row.intrusive = detail::aggregate(d, senr, truth, outcomes);
    row.accuracy_intrusive = row.intrusive.accuracy;
    row.accuracy_proposed = out.proposed.accuracy;
    out.rows.push_back(row);
  }
  return out;
}

/// Scene for a traversal along `path`: rig held at the start for a warm-up
/// of whole frames covering the RIR, then moved at constant speed.
inline SceneSpec make_traversal_scene(const SceneSpec& base, const TraversalPath& path, std::size_t frame_length,
                                      std::size_t* warmup_frames = nullptr, std::size_t* moving_frames = nullptr) {
  path.validate();
  SceneSpec scene = base;
  scene.hop = frame_length;
  const double dir = path.end_x > path.start_x ? 1.0 : -1.0;
  scene.mic_direction = {-dir, 0.0, 0.0};
  const std::size_t warm = (scene.rir_length + frame_length - 1) / frame_length;
  const auto frames = static_cast<std::size_t>(std::max(1L, std::lround(std::abs(path.end_x - path.start_x) / path.step_m)));
  const double frame_time = static_cast<double>(frame_length) / scene.sample_rate;
  const Vec3 a{path.start_x, path.y, path.z};
  const Vec3 b{path.end_x, path.y, path.z};
  scene.trajectory = {{0.0, a}, {static_cast<double>(warm) * frame_time, a},
                      {static_cast<double>(warm + frames) * frame_time, b}};
  scene.validate();
  if (warmup_frames) *warmup_frames = warm;
  if (moving_frames) *moving_frames = frames;
  return scene;
}

inline TraversalResult run_traversal(const SweepConfig& cfg, const SceneSpec& scene, const RotorNoiseSpec& rotor = {}) {
  cfg.validate();
  scene.validate();
  detail::require(scene.trajectory.size() >= 2, "traversal: scene needs a trajectory");
  const std::size_t n = cfg.frame_length;
  detail::require(scene.hop == n, "traversal: scene hop must equal the frame length");
  const double fs = scene.sample_rate;
  const std::size_t warm = (scene.rir_length + n - 1) / n;
  const double t_end = scene.trajectory.back().time;
  const auto total_frames = static_cast<std::size_t>(std::lround(t_end * fs / static_cast<double>(n)));
  detail::require(total_frames > warm, "traversal: trajectory shorter than the warm-up");
  const std::size_t frames = total_frames - warm;
  const std::size_t total = total_frames * n;

  auto rng = trial_rng(cfg.seed, detail::kTraversal, 0, 0);
  const auto s = synth_rotor_noise(detail::with_samples(rotor, total, fs), fs, rng);
  SceneSpec direct_scene = scene;
  direct_scene.max_image_order = 0;
  const auto x = moving_convolve(s, scene);
  const auto xd = moving_convolve(s, direct_scene);
  const auto noise = detail::make_noise(rotor, total, fs, cfg.diffuse_directions, rng);

  // Background level is set once for the whole observed stream.
  const auto observed = detail::slice(x.samples, warm * n, frames * n);
  const double cv = variance(observed);
  const double gd = mixing_gain(cv, variance(detail::slice(noise.diffuse, warm * n, frames * n)), cfg.traversal_sdnr_db);
  const double gw = mixing_gain(cv, variance(detail::slice(noise.white, warm * n, frames * n)), cfg.white_snr_db);

  // Free-space calibration with the same absolute background at the room centre.
  TraversalResult result;
  {
    SceneSpec cal = scene;
    const Vec3 centre = detail::free_space_placement(scene);
    cal.trajectory = {{0.0, centre}};
    const std::size_t cal_frames = static_cast<std::size_t>(cfg.calibration_frames);
    const std::size_t cal_total = (warm + cal_frames) * n;
    auto cal_rng = trial_rng(cfg.seed, detail::kCalibration, 1000, 0);
    const auto cs = synth_rotor_noise(detail::with_samples(rotor, cal_total, fs), fs, cal_rng);
    SceneSpec cal_direct = cal;
    cal_direct.max_image_order = 0;
    const auto cx = moving_convolve(cs, cal);
    const auto cxd = moving_convolve(cs, cal_direct);
    const auto cn = detail::make_noise(rotor, cal_total, fs, cfg.diffuse_directions, cal_rng);
    std::vector<FrameObservation> cal_obs;
    for (std::size_t k = 0; k < cal_frames; ++k) {
      const std::size_t m0 = (warm + k) * n;
      std::vector<double> y(n);
      for (std::size_t i = 0; i < n; ++i) y[i] = cx.samples[m0 + i] + gd * cn.diffuse[m0 + i] + gw * cn.white[m0 + i];
      cal_obs.emplace_back(std::move(y), detail::slice(cxd.samples, m0, n), m0);
    }
    result.noise_variance = calibrate_noise_variance(cal_obs);
  }

  std::vector<double> y(total);
  for (std::size_t i = 0; i < total; ++i) y[i] = x.samples[i] + gd * noise.diffuse[i] + gw * noise.white[i];
  result.observed = SampledSignal(std::move(y), fs);
  result.direct = xd;

  result.frames.resize(frames);
  const double frame_time = static_cast<double>(n) / fs;
  parallel_for(frames, [&](std::size_t k) {
    const std::size_t m0 = (warm + k) * n;
    const FrameObservation frame(detail::slice(result.observed.samples, m0, n), detail::slice(xd.samples, m0, n), m0,
                                 result.noise_variance);
    TraversalFrame& out = result.frames[k];
    out.index = k;
    const Vec3 pos = scene.source_at((static_cast<double>(warm + k) + 0.5) * frame_time);
    out.position_m = pos[0];
    out.wall_distance_m = nearest_wall_distance(scene, pos);
    out.true_delta_tau = distance_to_tdoe(out.wall_distance_m, fs, scene.speed_of_sound);
    out.estimate = estimate_tdoe(frame, cfg.grid, fs, scene.speed_of_sound);
    out.detection = detect(frame, cfg.ln_gamma);
    out.within_tolerance = tdoe_within_tolerance(out.estimate.delta_tau, out.true_delta_tau);
  });
  return result;
}

// ---------------------------------------------------------------------------
// CSV output

namespace detail {
inline std::string fmt_num(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}
}  // namespace detail

inline constexpr const char* kCsvTail = "trial_count,accuracy,mean_abs_error_samples,alpha_mean,detect_rate";

inline std::string sweep_csv(const std::vector<AccuracyCell>& cells) {
  std::ostringstream os;
  os << "experiment,distance_m,sdnr_db," << kCsvTail << '\n';
  for (const auto& c : cells)
    os << "distance_sdnr_sweep," << detail::fmt_num(c.distance) << ',' << detail::fmt_num(c.snr) << ',' << c.trials
       << ',' << detail::fmt_num(c.accuracy) << ',' << detail::fmt_num(c.mean_abs_tdoe_error) << ','
       << detail::fmt_num(c.alpha_mean) << ',' << detail::fmt_num(c.detect_rate) << '\n';
  return os.str();
}

inline std::string senr_csv(const SenrComparison& cmp) {
  std::ostringstream os;
  os << "experiment,distance_m,senr_db," << kCsvTail << '\n';
  auto row = [&](const char* name, const AccuracyCell& c) {
    os << name << ',' << detail::fmt_num(c.distance) << ',' << detail::fmt_num(c.snr) << ',' << c.trials << ','
       << detail::fmt_num(c.accuracy) << ',' << detail::fmt_num(c.mean_abs_tdoe_error) << ','
       << detail::fmt_num(c.alpha_mean) << ",nan\n";
  };
  for (const auto& r : cmp.rows) row("senr_comparison_intrusive", r.intrusive);
  row("senr_comparison_proposed", cmp.proposed);
  return os.str();
}

/// One row per frame; the trailing columns carry the TDOE curve and the detector inputs.
inline std::string traversal_csv(const TraversalResult& result) {
  std::ostringstream os;
  os << "experiment,distance_m,position_m," << kCsvTail
     << ",tdoe_samples,true_tdoe_samples,statistic,threshold\n";
  for (const auto& f : result.frames)
    os << "traversal," << detail::fmt_num(f.wall_distance_m) << ',' << detail::fmt_num(f.position_m) << ",1,"
       << (f.within_tolerance ? "1.000000" : "0.000000") << ','
       << detail::fmt_num(std::abs(static_cast<double>(f.estimate.delta_tau - f.true_delta_tau))) << ','
       << detail::fmt_num(f.estimate.alpha) << ',' << (f.detection.reflector_present() ? "1.000000" : "0.000000")
       << ',' << f.estimate.delta_tau << ',' << f.true_delta_tau << ',' << detail::fmt_num(f.detection.statistic)
       << ',' << detail::fmt_num(f.detection.threshold) << '\n';
  return os.str();
}

}  // namespace echo_ranger
