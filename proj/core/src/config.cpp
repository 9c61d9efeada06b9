#include "noclick/config.hpp"

#include "noclick/errors.hpp"
#include "noclick/rng.hpp"
#include "noclick/serialization.hpp"
#include "noclick/states.hpp"

#include <complex>
#include <fstream>
#include <sstream>

namespace noclick {

namespace {

const nlohmann::json& require_field(const nlohmann::json& obj, const char* key,
                                    const std::string& path) {
  if (!obj.is_object()) {
    throw ConfigError(path + ": expected an object");
  }
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ConfigError(path + "." + key + ": missing required field");
  }
  return *it;
}

double as_double(const nlohmann::json& value, const std::string& path) {
  if (!value.is_number()) {
    throw ConfigError(path + ": expected a number");
  }
  return value.get<double>();
}

std::int64_t as_int(const nlohmann::json& value, const std::string& path) {
  if (!value.is_number_integer()) {
    throw ConfigError(path + ": expected an integer");
  }
  return value.get<std::int64_t>();
}

std::uint64_t as_uint(const nlohmann::json& value, const std::string& path) {
  if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<std::int64_t>() >= 0)) {
    throw ConfigError(path + ": expected a nonnegative integer");
  }
  return value.get<std::uint64_t>();
}

std::vector<double> as_double_list(const nlohmann::json& value, const std::string& path) {
  if (!value.is_array() || value.empty()) {
    throw ConfigError(path + ": expected a non-empty array of numbers");
  }
  std::vector<double> out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); i++) {
    out.push_back(as_double(value[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

GaussianState parse_state(const nlohmann::json& j, const std::string& path) {
  const nlohmann::json& kind_field = require_field(j, "kind", path);
  if (!kind_field.is_string()) {
    throw ConfigError(path + ".kind: expected a string");
  }
  std::string kind = kind_field.get<std::string>();
  if (kind == "vacuum") {
    std::int64_t modes = j.contains("modes") ? as_int(j["modes"], path + ".modes") : 1;
    if (modes < 1) {
      throw ConfigError(path + ".modes: must be at least 1");
    }
    return vacuum(static_cast<int>(modes));
  }
  if (kind == "thermal") {
    return thermal(as_double(require_field(j, "nbar", path), path + ".nbar"));
  }
  if (kind == "squeezed_vacuum") {
    double r = as_double(require_field(j, "r", path), path + ".r");
    double theta = j.contains("theta") ? as_double(j["theta"], path + ".theta") : 0.0;
    return squeezed_vacuum(r, theta);
  }
  if (kind == "coherent") {
    double re = as_double(require_field(j, "alpha_re", path), path + ".alpha_re");
    double im = j.contains("alpha_im") ? as_double(j["alpha_im"], path + ".alpha_im") : 0.0;
    return coherent(std::complex<double>(re, im));
  }
  if (kind == "tmsv") {
    return two_mode_squeezed_vacuum(as_double(require_field(j, "r", path), path + ".r"));
  }
  if (kind == "explicit") {
    return state_from_json(j);
  }
  if (kind == "product") {
    const nlohmann::json& factors = require_field(j, "factors", path);
    if (!factors.is_array() || factors.empty()) {
      throw ConfigError(path + ".factors: expected a non-empty array of states");
    }
    GaussianState state =
        parse_state(factors[0], path + ".factors[0]");
    for (std::size_t i = 1; i < factors.size(); i++) {
      state = tensor_product(state, parse_state(factors[i], path + ".factors[" +
                                                               std::to_string(i) + "]"));
    }
    return state;
  }
  throw ConfigError(path + ".kind: unknown state kind '" + kind + "'");
}

ScheduleConfig parse_schedule(const nlohmann::json& j, const std::string& path,
                              bool transmittances_required) {
  ScheduleConfig schedule;
  if (!j.is_object()) {
    throw ConfigError(path + ": expected an object");
  }
  if (j.contains("transmittances")) {
    schedule.transmittances = as_double_list(j["transmittances"], path + ".transmittances");
  } else if (transmittances_required) {
    throw ConfigError(path + ".transmittances: missing required field");
  }
  for (std::size_t i = 0; i < schedule.transmittances.size(); i++) {
    double t = schedule.transmittances[i];
    if (!(t > 0.0 && t <= 1.0)) {
      throw ConfigError(path + ".transmittances[" + std::to_string(i) +
                        "]: must lie in (0, 1]");
    }
  }
  if (j.contains("eta")) {
    schedule.eta = as_double(j["eta"], path + ".eta");
    if (!(schedule.eta > 0.0 && schedule.eta <= 1.0)) {
      throw ConfigError(path + ".eta: must lie in (0, 1]");
    }
  }
  if (j.contains("shots")) {
    schedule.shots = as_int(j["shots"], path + ".shots");
    if (schedule.shots <= 0) {
      throw ConfigError(path + ".shots: must be positive");
    }
  }
  if (j.contains("seed")) {
    schedule.seed = as_uint(j["seed"], path + ".seed");
  }
  return schedule;
}

PipelineOptions parse_negativity_options(const nlohmann::json& root,
                                         const ScheduleConfig& schedule) {
  PipelineOptions options;
  options.shots_per_setting = schedule.shots;
  options.eta = schedule.eta;
  options.seed = schedule.seed;
  if (!root.contains("negativity")) {
    return options;
  }
  const nlohmann::json& j = root["negativity"];
  if (!j.is_object()) {
    throw ConfigError("negativity: expected an object");
  }
  if (j.contains("band_sigmas")) {
    options.band_sigmas = as_double(j["band_sigmas"], "negativity.band_sigmas");
    if (!(options.band_sigmas >= 0.0)) {
      throw ConfigError("negativity.band_sigmas: must be nonnegative");
    }
  }
  if (j.contains("extra_band")) {
    options.extra_band = as_double(j["extra_band"], "negativity.extra_band");
    if (!(options.extra_band >= 0.0)) {
      throw ConfigError("negativity.extra_band: must be nonnegative");
    }
  }
  if (j.contains("single_mode_transmittances")) {
    options.single_mode_ts =
        as_double_list(j["single_mode_transmittances"], "negativity.single_mode_transmittances");
  }
  if (j.contains("two_mode_transmittances")) {
    options.two_mode_ts =
        as_double_list(j["two_mode_transmittances"], "negativity.two_mode_transmittances");
  }
  if (j.contains("shot_weights")) {
    const nlohmann::json& weights = j["shot_weights"];
    if (!weights.is_object()) {
      throw ConfigError("negativity.shot_weights: expected an object of label -> factor");
    }
    for (auto it = weights.begin(); it != weights.end(); ++it) {
      options.shot_weights[it.key()] =
          as_double(it.value(), "negativity.shot_weights." + it.key());
    }
  }
  return options;
}

}  // namespace

std::string pipeline_kind_name(PipelineKind kind) {
  switch (kind) {
    case PipelineKind::SingleMode:
      return "single-mode";
    case PipelineKind::Multimode:
      return "multimode";
    case PipelineKind::Negativity:
      return "negativity";
  }
  return "single-mode";
}

ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw ConfigError("config: expected a JSON object");
  }
  int version = static_cast<int>(as_int(require_field(j, "version", "config"), "version"));
  if (version != 1) {
    throw ConfigError("version: only version 1 is supported, got " + std::to_string(version));
  }

  const nlohmann::json& kind_field = require_field(j, "kind", "config");
  if (!kind_field.is_string()) {
    throw ConfigError("kind: expected a string");
  }
  std::string kind_name = kind_field.get<std::string>();
  PipelineKind kind;
  if (kind_name == "single-mode") {
    kind = PipelineKind::SingleMode;
  } else if (kind_name == "multimode") {
    kind = PipelineKind::Multimode;
  } else if (kind_name == "negativity") {
    kind = PipelineKind::Negativity;
  } else {
    throw ConfigError("kind: expected single-mode, multimode or negativity, got '" + kind_name +
                      "'");
  }

  GaussianState state = parse_state(require_field(j, "state", "config"), "state");
  bool needs_ts = kind != PipelineKind::Negativity;
  ScheduleConfig schedule = parse_schedule(require_field(j, "schedule", "config"), "schedule",
                                           needs_ts);

  if (kind == PipelineKind::SingleMode && state.mode_count() != 1) {
    throw ConfigError("state: single-mode pipeline requires a 1-mode state, got " +
                      std::to_string(state.mode_count()) + " modes");
  }
  if (kind == PipelineKind::Negativity && state.mode_count() != 2) {
    throw ConfigError("state: negativity pipeline requires a 2-mode state, got " +
                      std::to_string(state.mode_count()) + " modes");
  }
  if (kind == PipelineKind::Multimode &&
      static_cast<int>(schedule.transmittances.size()) < 2 * state.mode_count()) {
    throw ConfigError("schedule.transmittances: multimode pipeline needs at least " +
                      std::to_string(2 * state.mode_count()) + " settings for " +
                      std::to_string(state.mode_count()) + " modes");
  }
  if (kind == PipelineKind::SingleMode && schedule.transmittances.size() < 2) {
    throw ConfigError("schedule.transmittances: single-mode pipeline needs at least 2 settings");
  }

  PipelineOptions negativity = parse_negativity_options(j, schedule);
  return ExperimentConfig{version, kind, std::move(state), std::move(schedule),
                          std::move(negativity)};
}

LoadedConfig load_config_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << file.rdbuf();
  std::string bytes = buffer.str();

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return LoadedConfig{parse_config(j), fnv1a64(bytes)};
}

}  // namespace noclick
