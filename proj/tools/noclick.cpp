#include "noclick/config.hpp"
#include "noclick/detection.hpp"
#include "noclick/errors.hpp"
#include "noclick/estimator.hpp"
#include "noclick/pipeline.hpp"
#include "noclick/serialization.hpp"
#include "noclick/version.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace noclick;

std::string hash_string(std::uint64_t hash) {
  char buffer[24];
  std::snprintf(buffer, sizeof(buffer), "0x%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw ConfigError("cannot open '" + path.string() + "' for writing");
  }
  file << content;
  if (!file) {
    throw ConfigError("failed while writing '" + path.string() + "'");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw ConfigError("cannot open '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

nlohmann::json report_envelope(const LoadedConfig& loaded, std::uint64_t seed) {
  nlohmann::json j;
  j["library_version"] = kVersion;
  j["convention"] = kConvention;
  j["config_hash"] = hash_string(loaded.config_hash);
  j["kind"] = pipeline_kind_name(loaded.config.kind);
  j["seed"] = seed;
  return j;
}

// The estimators assume zero displacement, so every scan measures the
// two-copy difference state. For centered inputs this is the identity.
GaussianState measured_state(const ExperimentConfig& config) {
  return prepare_minus_mode(config.state);
}

SettingSchedule scan_schedule(const ExperimentConfig& config) {
  return make_schedule(config.schedule.transmittances, config.schedule.eta,
                       config.schedule.shots, config.schedule.seed, "scan");
}

TallyTable simulate_all(const ExperimentConfig& config) {
  if (config.kind == PipelineKind::Negativity) {
    TallyTable combined;
    combined.rng_seed = config.negativity.seed;
    for (const SubExperimentPlan& sub :
         plan_negativity_measurements(config.state, config.negativity)) {
      TallyTable table = simulate_tallies(sub.state, sub.schedule);
      combined.rows.insert(combined.rows.end(), table.rows.begin(), table.rows.end());
    }
    return combined;
  }
  return simulate_tallies(measured_state(config), scan_schedule(config));
}

TallyTable concatenated_sub_tallies(const NegativityReport& report, std::uint64_t seed) {
  TallyTable combined;
  combined.rng_seed = seed;
  for (const SubExperimentResult& sub : report.sub_experiments) {
    combined.rows.insert(combined.rows.end(), sub.tallies.rows.begin(), sub.tallies.rows.end());
  }
  return combined;
}

nlohmann::json estimate_report(const ExperimentConfig& config, bool exact,
                               const TallyTable* tallies) {
  nlohmann::json j;
  j["mode"] = exact ? "exact" : "sampled";
  switch (config.kind) {
    case PipelineKind::SingleMode: {
      if (exact) {
        SettingSchedule schedule = scan_schedule(config);
        std::vector<double> p = exact_probabilities(measured_state(config), schedule.settings);
        std::vector<double> t_eff;
        for (const DetectorSetting& setting : schedule.settings) {
          t_eff.push_back(setting.effective_transmittance());
        }
        j["estimate"] = single_mode_estimate_to_json(estimate_single_mode_exact(p, t_eff));
      } else {
        j["estimate"] = single_mode_estimate_to_json(estimate_single_mode(*tallies));
        j["tallies"] = tally_to_json(*tallies);
      }
      break;
    }
    case PipelineKind::Multimode: {
      int modes = config.state.mode_count();
      if (exact) {
        SettingSchedule schedule = scan_schedule(config);
        std::vector<double> p = exact_probabilities(measured_state(config), schedule.settings);
        std::vector<double> t_eff;
        for (const DetectorSetting& setting : schedule.settings) {
          t_eff.push_back(setting.effective_transmittance());
        }
        j["estimate"] = multimode_estimate_to_json(estimate_multimode_exact(p, t_eff, modes));
      } else {
        j["estimate"] = multimode_estimate_to_json(estimate_multimode(*tallies, modes));
        j["tallies"] = tally_to_json(*tallies);
      }
      break;
    }
    case PipelineKind::Negativity: {
      if (exact) {
        PipelineOptions options = config.negativity;
        options.exact = true;
        j["negativity"] = negativity_report_to_json(
            measure_negativity_pipeline(config.state, options));
      } else {
        j["negativity"] = negativity_report_to_json(
            estimate_negativity_from_tallies(config.state, config.negativity, *tallies));
      }
      break;
    }
  }
  return j;
}

void merge_envelope(nlohmann::json& report, const nlohmann::json& envelope) {
  for (auto it = envelope.begin(); it != envelope.end(); ++it) {
    report[it.key()] = it.value();
  }
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
  LoadedConfig loaded = load_config_file(config_path);
  std::filesystem::create_directories(out_dir);
  TallyTable table = simulate_all(loaded.config);

  std::filesystem::path out(out_dir);
  write_file(out / "tally.csv", tally_to_csv(table));

  nlohmann::json meta = report_envelope(loaded, loaded.config.schedule.seed);
  meta["rows"] = table.rows.size();
  meta["output"] = "tally.csv";
  write_file(out / "meta.json", meta.dump(2) + "\n");
  std::cout << "wrote " << (out / "tally.csv").string() << " (" << table.rows.size()
            << " rows)\n";
  return 0;
}

int cmd_estimate(const std::string& config_path, const std::string& out_dir, bool exact,
                 std::optional<std::string> tally_path) {
  LoadedConfig loaded = load_config_file(config_path);
  std::filesystem::create_directories(out_dir);
  std::filesystem::path out(out_dir);

  nlohmann::json report;
  if (exact) {
    report = estimate_report(loaded.config, true, nullptr);
  } else {
    std::filesystem::path source =
        tally_path ? std::filesystem::path(*tally_path) : out / "tally.csv";
    TallyTable table = tally_from_csv(read_file(source));
    report = estimate_report(loaded.config, false, &table);
  }
  merge_envelope(report, report_envelope(loaded, loaded.config.schedule.seed));
  write_file(out / "report.json", report.dump(2) + "\n");
  std::cout << "wrote " << (out / "report.json").string() << "\n";
  return 0;
}

int cmd_pipeline(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed_override) {
  LoadedConfig loaded = load_config_file(config_path);
  if (seed_override) {
    loaded.config.schedule.seed = *seed_override;
    loaded.config.negativity.seed = *seed_override;
  }
  std::filesystem::create_directories(out_dir);
  std::filesystem::path out(out_dir);

  nlohmann::json report;
  TallyTable table;
  if (loaded.config.kind == PipelineKind::Negativity) {
    NegativityReport negativity =
        measure_negativity_pipeline(loaded.config.state, loaded.config.negativity);
    table = concatenated_sub_tallies(negativity, loaded.config.negativity.seed);
    report["mode"] = "sampled";
    report["negativity"] = negativity_report_to_json(negativity);
  } else {
    table = simulate_all(loaded.config);
    report = estimate_report(loaded.config, false, &table);
  }
  merge_envelope(report, report_envelope(loaded, loaded.config.schedule.seed));

  write_file(out / "tally.csv", tally_to_csv(table));
  write_file(out / "report.json", report.dump(2) + "\n");
  std::cout << "wrote " << (out / "tally.csv").string() << " and "
            << (out / "report.json").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"no-click Gaussian state measurement toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  bool exact = false;
  std::string tally_path;
  std::uint64_t seed_value = 0;

  CLI::App* simulate = app.add_subcommand("simulate", "sample no-click tallies for a config");
  simulate->add_option("--config", config_path, "experiment config JSON")->required();
  simulate->add_option("--out", out_dir, "output directory");

  CLI::App* estimate = app.add_subcommand("estimate", "recover invariants from tallies");
  estimate->add_option("--config", config_path, "experiment config JSON")->required();
  estimate->add_option("--out", out_dir, "output directory");
  CLI::Option* tally_opt =
      estimate->add_option("--tally", tally_path, "tally CSV (default: <out>/tally.csv)");
  estimate->add_flag("--exact", exact, "use analytic probabilities instead of tallies")
      ->excludes(tally_opt);

  CLI::App* pipeline = app.add_subcommand("pipeline", "simulate and estimate in one run");
  pipeline->add_option("--config", config_path, "experiment config JSON")->required();
  pipeline->add_option("--out", out_dir, "output directory");
  CLI::Option* seed_opt = pipeline->add_option("--seed", seed_value, "override the config seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (simulate->parsed()) {
      return cmd_simulate(config_path, out_dir);
    }
    if (estimate->parsed()) {
      std::optional<std::string> tally;
      if (tally_opt->count() > 0) {
        tally = tally_path;
      }
      return cmd_estimate(config_path, out_dir, exact, tally);
    }
    std::optional<std::uint64_t> seed;
    if (seed_opt->count() > 0) {
      seed = seed_value;
    }
    return cmd_pipeline(config_path, out_dir, seed);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const PhysicsError& e) {
    std::cerr << "physics error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
