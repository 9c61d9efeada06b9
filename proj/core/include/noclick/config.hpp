#pragma once

#include "noclick/pipeline.hpp"
#include "noclick/state.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace noclick {

enum class PipelineKind { SingleMode, Multimode, Negativity };

std::string pipeline_kind_name(PipelineKind kind);

struct ScheduleConfig {
  std::vector<double> transmittances;
  double eta = 1.0;
  std::int64_t shots = 100000;
  std::uint64_t seed = 0;
};

// A fully materialized experiment description: the state is constructed and
// physicality-checked at parse time, so downstream code never sees raw JSON.
struct ExperimentConfig {
  int version;
  PipelineKind kind;
  GaussianState state;
  ScheduleConfig schedule;
  PipelineOptions negativity;
};

ExperimentConfig parse_config(const nlohmann::json& j);

struct LoadedConfig {
  ExperimentConfig config;
  std::uint64_t config_hash;  // FNV-1a over the raw file bytes
};

LoadedConfig load_config_file(const std::string& path);

}  // namespace noclick
