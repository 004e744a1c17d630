#pragma once

// Run configuration: a JSON document with optional sections `scene`, `sweep`,
// `rotor` and `traversal`. Missing keys keep their defaults; unknown keys are
// rejected with their full key path.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "echo_ranger/acoustics.hpp"
#include "echo_ranger/error.hpp"
#include "echo_ranger/harness.hpp"

namespace echo_ranger {

enum class Experiment { SenrComparison, DistanceSdnrSweep, Traversal, EstimateFile };

inline std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::SenrComparison: return "senr_comparison";
    case Experiment::DistanceSdnrSweep: return "distance_sdnr_sweep";
    case Experiment::Traversal: return "traversal";
    case Experiment::EstimateFile: return "estimate_file";
  }
  return "unknown";
}

inline Experiment parse_experiment(std::string_view name) {
  for (auto e : {Experiment::SenrComparison, Experiment::DistanceSdnrSweep, Experiment::Traversal,
                 Experiment::EstimateFile})
    if (to_string(e) == name) return e;
  detail::fail("experiment: unknown experiment '" + std::string(name) +
               "' (expected senr_comparison, distance_sdnr_sweep, traversal or estimate_file)");
}

struct RunConfig {
  Experiment experiment = Experiment::DistanceSdnrSweep;
  SceneSpec scene;
  SweepConfig sweep;
  RotorNoiseSpec rotor;
  TraversalPath traversal;
  std::string output_dir = "out";
  std::optional<std::string> input_wav;
  std::optional<std::string> direct_wav;
  std::optional<double> noise_variance;  // estimate_file only
  bool render_wav = false;

  void validate() const {
    scene.validate();
    sweep.validate();
    rotor.validate(scene.sample_rate);
    traversal.validate();
    detail::require(!output_dir.empty(), "output_dir must not be empty");
    if (noise_variance) detail::require(*noise_variance > 0.0, "noise_variance must be positive");
    if (experiment == Experiment::EstimateFile) {
      detail::require(input_wav.has_value(), "input_wav is required for estimate_file");
      detail::require(direct_wav.has_value(), "direct_wav is required for estimate_file");
    }
    if (experiment == Experiment::Traversal) {
      try {
        make_traversal_scene(scene, traversal, sweep.frame_length);
      } catch (const Error& e) {
        detail::fail(std::string("traversal: ") + e.what());
      }
    }
  }
};

inline constexpr const char* kCodeVersion =
#ifdef ECHO_RANGER_VERSION
    ECHO_RANGER_VERSION;
#else
    "0.1.0";
#endif

namespace detail {

using nlohmann::json;

class ObjectReader {
public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    require(j_.is_object(), where("") + " must be an object");
  }

  ~ObjectReader() = default;

  std::string where(const std::string& key) const {
    if (path_.empty()) return key.empty() ? "config" : key;
    return key.empty() ? path_ : path_ + "." + key;
  }

  const json* get(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  static double as_number(const json& v, const std::string& where) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
      if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    fail(where + " must be a number");
  }

  void number(const std::string& key, double& out) {
    if (const auto* v = get(key)) out = as_number(*v, where(key));
  }

  template <typename Int>
  void integer(const std::string& key, Int& out) {
    if (const auto* v = get(key)) {
      require(v->is_number_integer(), where(key) + " must be an integer");
      if constexpr (std::is_unsigned_v<Int>) {
        require(v->is_number_unsigned() || v->get<long long>() >= 0, where(key) + " must be >= 0");
        out = static_cast<Int>(v->get<unsigned long long>());
      } else {
        out = static_cast<Int>(v->get<long long>());
      }
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const auto* v = get(key)) {
      require(v->is_string(), where(key) + " must be a string");
      out = v->get<std::string>();
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const auto* v = get(key)) {
      require(v->is_boolean(), where(key) + " must be a boolean");
      out = v->get<bool>();
    }
  }

  void numbers(const std::string& key, std::vector<double>& out) {
    if (const auto* v = get(key)) {
      require(v->is_array(), where(key) + " must be an array of numbers");
      out.clear();
      for (std::size_t i = 0; i < v->size(); ++i)
        out.push_back(as_number((*v)[i], where(key) + "[" + std::to_string(i) + "]"));
    }
  }

  void vec3(const std::string& key, Vec3& out) {
    std::vector<double> tmp;
    numbers(key, tmp);
    if (get(key) == nullptr) return;
    require(tmp.size() == 3, where(key) + " must have three entries");
    out = {tmp[0], tmp[1], tmp[2]};
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      require(seen_.count(key) > 0, "unknown configuration key '" + where(key) + "'");
  }

private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

inline json number_json(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  return v;
}

inline json numbers_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number_json(x));
  return a;
}

}  // namespace detail

/// Parses a configuration document. An empty document (or `{}`) yields every default.
inline RunConfig parse_config(std::string_view text) {
  using detail::json;
  json doc;
  const std::string body(text);
  if (body.find_first_not_of(" \t\r\n") == std::string::npos) {
    doc = json::object();
  } else {
    try {
      doc = json::parse(body);
    } catch (const json::parse_error& e) {
      detail::fail(std::string("config: parse error: ") + e.what());
    }
  }

  RunConfig cfg;
  detail::ObjectReader top(doc, "");
  std::string experiment;
  top.string("experiment", experiment);
  if (!experiment.empty()) cfg.experiment = parse_experiment(experiment);
  top.string("output_dir", cfg.output_dir);
  if (const auto* v = top.get("input_wav")) {
    detail::require(v->is_string(), "input_wav must be a string");
    cfg.input_wav = v->get<std::string>();
  }
  if (const auto* v = top.get("direct_wav")) {
    detail::require(v->is_string(), "direct_wav must be a string");
    cfg.direct_wav = v->get<std::string>();
  }
  if (const auto* v = top.get("noise_variance")) cfg.noise_variance = detail::ObjectReader::as_number(*v, "noise_variance");
  top.boolean("render_wav", cfg.render_wav);
  if (const auto* v = top.get("code_version")) detail::require(v->is_string(), "code_version must be a string");

  if (const auto* v = top.get("scene")) {
    detail::ObjectReader r(*v, "scene");
    r.vec3("room_dims", cfg.scene.room_dims);
    r.number("t60", cfg.scene.t60);
    r.number("speed_of_sound", cfg.scene.speed_of_sound);
    r.number("sample_rate", cfg.scene.sample_rate);
    r.number("source_mic_offset", cfg.scene.source_mic_offset);
    r.integer("rir_length", cfg.scene.rir_length);
    r.integer("max_image_order", cfg.scene.max_image_order);
    r.finish();
  }
  if (const auto* v = top.get("sweep")) {
    detail::ObjectReader r(*v, "sweep");
    r.numbers("distances", cfg.sweep.distances);
    r.numbers("sdnr_points", cfg.sweep.sdnr_points);
    r.numbers("senr_points", cfg.sweep.senr_points);
    r.integer("trials", cfg.sweep.trials);
    r.integer("seed", cfg.sweep.seed);
    r.integer("frame_length", cfg.sweep.frame_length);
    r.number("ln_gamma", cfg.sweep.ln_gamma);
    r.number("comparison_distance", cfg.sweep.comparison_distance);
    r.number("comparison_sdnr_db", cfg.sweep.comparison_sdnr_db);
    r.number("traversal_sdnr_db", cfg.sweep.traversal_sdnr_db);
    r.number("white_snr_db", cfg.sweep.white_snr_db);
    r.integer("diffuse_directions", cfg.sweep.diffuse_directions);
    r.integer("calibration_frames", cfg.sweep.calibration_frames);
    if (const auto* g = r.get("grid")) {
      detail::ObjectReader gr(*g, "sweep.grid");
      gr.integer("min_delay", cfg.sweep.grid.min_delay);
      gr.integer("max_delay", cfg.sweep.grid.max_delay);
      gr.integer("step", cfg.sweep.grid.step);
      gr.finish();
    }
    r.finish();
  }
  if (const auto* v = top.get("rotor")) {
    detail::ObjectReader r(*v, "rotor");
    r.number("fundamental", cfg.rotor.fundamental);
    r.integer("num_harmonics", cfg.rotor.num_harmonics);
    r.number("harmonic_decay", cfg.rotor.harmonic_decay);
    r.number("broadband_level", cfg.rotor.broadband_level);
    r.number("duration", cfg.rotor.duration);
    r.finish();
  }
  if (const auto* v = top.get("traversal")) {
    detail::ObjectReader r(*v, "traversal");
    r.number("start_x", cfg.traversal.start_x);
    r.number("end_x", cfg.traversal.end_x);
    r.number("y", cfg.traversal.y);
    r.number("z", cfg.traversal.z);
    r.number("step_m", cfg.traversal.step_m);
    r.finish();
  }
  top.finish();
  cfg.validate();
  return cfg;
}

/// Full configuration echo; parse_config(to_json(c).dump()) reproduces c.
inline nlohmann::json to_json(const RunConfig& c) {
  using detail::json;
  using detail::number_json;
  json j;
  j["experiment"] = to_string(c.experiment);
  j["output_dir"] = c.output_dir;
  if (c.input_wav) j["input_wav"] = *c.input_wav;
  if (c.direct_wav) j["direct_wav"] = *c.direct_wav;
  if (c.noise_variance) j["noise_variance"] = *c.noise_variance;
  j["render_wav"] = c.render_wav;
  j["scene"] = {{"room_dims", {c.scene.room_dims[0], c.scene.room_dims[1], c.scene.room_dims[2]}},
                {"t60", c.scene.t60},
                {"speed_of_sound", c.scene.speed_of_sound},
                {"sample_rate", c.scene.sample_rate},
                {"source_mic_offset", c.scene.source_mic_offset},
                {"rir_length", c.scene.rir_length},
                {"max_image_order", c.scene.max_image_order}};
  const auto& s = c.sweep;
  j["sweep"] = {{"distances", detail::numbers_json(s.distances)},
                {"sdnr_points", detail::numbers_json(s.sdnr_points)},
                {"senr_points", detail::numbers_json(s.senr_points)},
                {"trials", s.trials},
                {"seed", s.seed},
                {"grid", {{"min_delay", s.grid.min_delay}, {"max_delay", s.grid.max_delay}, {"step", s.grid.step}}},
                {"frame_length", s.frame_length},
                {"ln_gamma", number_json(s.ln_gamma)},
                {"comparison_distance", s.comparison_distance},
                {"comparison_sdnr_db", number_json(s.comparison_sdnr_db)},
                {"traversal_sdnr_db", number_json(s.traversal_sdnr_db)},
                {"white_snr_db", number_json(s.white_snr_db)},
                {"diffuse_directions", s.diffuse_directions},
                {"calibration_frames", s.calibration_frames}};
  j["rotor"] = {{"fundamental", c.rotor.fundamental},
                {"num_harmonics", c.rotor.num_harmonics},
                {"harmonic_decay", c.rotor.harmonic_decay},
                {"broadband_level", number_json(c.rotor.broadband_level)},
                {"duration", c.rotor.duration}};
  j["traversal"] = {{"start_x", c.traversal.start_x},
                    {"end_x", c.traversal.end_x},
                    {"y", c.traversal.y},
                    {"z", c.traversal.z},
                    {"step_m", c.traversal.step_m}};
  return j;
}

}  // namespace echo_ranger
