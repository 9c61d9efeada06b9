#pragma once

#include "noclick/detection.hpp"
#include "noclick/estimator.hpp"
#include "noclick/pipeline.hpp"
#include "noclick/state.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace noclick {

// JSON <-> state. The covariance is stored as a flat row-major array and the
// sign convention is recorded explicitly so files are self-describing.
nlohmann::json state_to_json(const GaussianState& state);
GaussianState state_from_json(const nlohmann::json& j);

// Tally CSV with schema label,T,eta,phi,shots,no_click_count. Doubles print
// with 17 significant digits, so writing and re-reading is lossless.
std::string tally_to_csv(const TallyTable& table);
TallyTable tally_from_csv(const std::string& text);

// Tally rows given as a JSON list, for ingesting externally measured data.
// Each row carries T, eta and shots plus either no_click_count or phat
// (rounded to the nearest count).
TallyTable tally_from_json_rows(const nlohmann::json& rows);

nlohmann::json tally_to_json(const TallyTable& table);

// JSON has no encoding for non-finite doubles; they become the strings
// "inf", "-inf", "nan".
nlohmann::json json_number(double value);

nlohmann::json single_mode_estimate_to_json(const SingleModeEstimate& est);
nlohmann::json multimode_estimate_to_json(const MultimodeEstimate& est);
nlohmann::json negativity_report_to_json(const NegativityReport& report);

std::string verdict_name(Verdict verdict);

}  // namespace noclick
