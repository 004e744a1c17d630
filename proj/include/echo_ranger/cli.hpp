#pragma once

// Experiment dispatch shared by the echo-ranger executable and its tests.

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>

#include "json.hpp"

#include "echo_ranger/config.hpp"
#include "echo_ranger/detector.hpp"
#include "echo_ranger/harness.hpp"
#include "echo_ranger/tdoe.hpp"
#include "echo_ranger/wav.hpp"

namespace echo_ranger {

namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), "cannot write " + path.string());
  out << text;
  require(static_cast<bool>(out), "write failed for " + path.string());
}

inline nlohmann::json estimate_json(const TdoeEstimate& est) {
  nlohmann::json objective = nlohmann::json::array();
  for (std::size_t i = 0; i < est.delays.size(); ++i) objective.push_back({est.delays[i], est.objective[i]});
  return {{"delta_tau", est.delta_tau}, {"alpha", est.alpha}, {"distance_m", est.distance_m}, {"objective", objective}};
}

inline nlohmann::json detection_json(const DetectionOutcome& det) {
  return {{"statistic", det.statistic},
          {"threshold", det.threshold},
          {"decision", det.reflector_present() ? "H1" : "H0"},
          {"ln_gamma", det.ln_gamma},
          {"noise_variance", det.noise_variance}};
}

inline nlohmann::json estimate_file(const RunConfig& cfg) {
  const auto y = read_wav(*cfg.input_wav);
  const auto xd = read_wav(*cfg.direct_wav);
  require(y.size() == xd.size(), "estimate_file: input_wav and direct_wav lengths differ");
  require(y.sample_rate == xd.sample_rate, "estimate_file: input_wav and direct_wav sample rates differ");
  const FrameObservation frame(y.samples, xd.samples, 0, cfg.noise_variance);
  const auto est = estimate_tdoe(frame, cfg.sweep.grid, y.sample_rate, cfg.scene.speed_of_sound);
  nlohmann::json out;
  out["sample_rate"] = y.sample_rate;
  out["frame_length"] = frame.size();
  out["estimate"] = estimate_json(est);
  if (cfg.noise_variance) {
    out["detection"] = detection_json(detect(frame, cfg.sweep.ln_gamma));
  } else {
    out["detection"] = nullptr;
    out["detection_note"] = "noise_variance not configured; detection skipped";
  }
  return out;
}

}  // namespace detail

/// Runs the selected experiment, writing `<experiment>.csv` (or
/// `estimate.json`) and `manifest.json` into cfg.output_dir. Returns the exit status.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    const std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);
    const std::string name = to_string(cfg.experiment);

    switch (cfg.experiment) {
      case Experiment::DistanceSdnrSweep: {
        const auto cells = run_distance_sdnr_sweep(cfg.sweep, cfg.scene, cfg.rotor);
        detail::write_text(dir / (name + ".csv"), sweep_csv(cells));
        break;
      }
      case Experiment::SenrComparison: {
        const auto cmp = run_senr_comparison(cfg.sweep, cfg.scene, cfg.rotor);
        detail::write_text(dir / (name + ".csv"), senr_csv(cmp));
        break;
      }
      case Experiment::Traversal: {
        const auto scene = make_traversal_scene(cfg.scene, cfg.traversal, cfg.sweep.frame_length);
        const auto result = run_traversal(cfg.sweep, scene, cfg.rotor);
        detail::write_text(dir / (name + ".csv"), traversal_csv(result));
        if (cfg.render_wav) {
          write_wav((dir / "traversal_observed.wav").string(), result.observed);
          write_wav((dir / "traversal_direct.wav").string(), result.direct);
        }
        break;
      }
      case Experiment::EstimateFile: {
        const auto j = detail::estimate_file(cfg);
        out << j.dump(2) << '\n';
        detail::write_text(dir / "estimate.json", j.dump(2) + "\n");
        break;
      }
    }

    auto manifest = to_json(cfg);
    manifest["code_version"] = kCodeVersion;
    detail::write_text(dir / "manifest.json", manifest.dump(2) + "\n");
    if (cfg.experiment != Experiment::EstimateFile) out << "wrote " << (dir / (name + ".csv")).string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "echo-ranger: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace echo_ranger
