#include "noclick/serialization.hpp"

#include "noclick/errors.hpp"
#include "noclick/version.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <vector>

namespace noclick {

namespace {

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

double parse_double(const std::string& field, const std::string& where) {
  const char* begin = field.c_str();
  char* end = nullptr;
  double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw ConfigError(where + ": '" + field + "' is not a number");
  }
  return value;
}

std::int64_t parse_int(const std::string& field, const std::string& where) {
  const char* begin = field.c_str();
  char* end = nullptr;
  long long value = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0') {
    throw ConfigError(where + ": '" + field + "' is not an integer");
  }
  return value;
}

constexpr const char* kCsvHeader = "label,T,eta,phi,shots,no_click_count";

}  // namespace

nlohmann::json state_to_json(const GaussianState& state) {
  nlohmann::json j;
  j["convention"] = kConvention;
  j["modes"] = state.mode_count();
  j["displacement"] = std::vector<double>(
      state.displacement().data(), state.displacement().data() + state.displacement().size());
  std::vector<double> cov;
  cov.reserve(static_cast<std::size_t>(state.dim()) * state.dim());
  for (int r = 0; r < state.dim(); r++) {
    for (int c = 0; c < state.dim(); c++) {
      cov.push_back(state.gamma()(r, c));
    }
  }
  j["covariance"] = cov;
  return j;
}

GaussianState state_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw ConfigError("state: expected an object");
  }
  if (j.contains("convention") && j["convention"] != kConvention) {
    throw ConfigError("state.convention: only \"" + std::string(kConvention) +
                      "\" is supported");
  }
  if (!j.contains("displacement") || !j["displacement"].is_array()) {
    throw ConfigError("state.displacement: expected an array of numbers");
  }
  if (!j.contains("covariance") || !j["covariance"].is_array()) {
    throw ConfigError("state.covariance: expected a flat row-major array");
  }
  std::vector<double> xi;
  for (const auto& v : j["displacement"]) {
    if (!v.is_number()) {
      throw ConfigError("state.displacement: expected an array of numbers");
    }
    xi.push_back(v.get<double>());
  }
  std::size_t dim = xi.size();
  if (j["covariance"].size() != dim * dim) {
    throw ConfigError("state.covariance: expected " + std::to_string(dim * dim) +
                      " entries for a displacement of length " + std::to_string(dim));
  }
  Eigen::VectorXd displacement(static_cast<int>(dim));
  for (std::size_t i = 0; i < dim; i++) {
    displacement(static_cast<int>(i)) = xi[i];
  }
  Eigen::MatrixXd covariance(static_cast<int>(dim), static_cast<int>(dim));
  std::size_t k = 0;
  for (std::size_t r = 0; r < dim; r++) {
    for (std::size_t c = 0; c < dim; c++, k++) {
      const auto& v = j["covariance"][k];
      if (!v.is_number()) {
        throw ConfigError("state.covariance[" + std::to_string(k) + "]: expected a number");
      }
      covariance(static_cast<int>(r), static_cast<int>(c)) = v.get<double>();
    }
  }
  return make_state(displacement, covariance);
}

std::string tally_to_csv(const TallyTable& table) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const TallyRow& row : table.rows) {
    if (row.setting.label.find_first_of(",\"\n\r") != std::string::npos) {
      throw InvalidParameter("tally label '" + row.setting.label +
                             "' contains CSV delimiter characters");
    }
    out += row.setting.label;
    out += ',';
    out += format_double(row.setting.transmittance);
    out += ',';
    out += format_double(row.setting.efficiency);
    out += ',';
    out += format_double(row.setting.phase);
    out += ',';
    out += std::to_string(row.setting.shots);
    out += ',';
    out += std::to_string(row.no_click_count);
    out += '\n';
  }
  return out;
}

TallyTable tally_from_csv(const std::string& text) {
  std::istringstream stream(text);
  std::string line;
  if (!std::getline(stream, line)) {
    throw ConfigError("tally CSV is empty");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  if (line != kCsvHeader) {
    throw ConfigError("tally CSV header must be '" + std::string(kCsvHeader) + "', got '" +
                      line + "'");
  }
  TallyTable table;
  int line_number = 1;
  while (std::getline(stream, line)) {
    line_number++;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    std::string where = "tally CSV row " + std::to_string(line_number);
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (fields.size() != 6) {
      throw ConfigError(where + ": expected 6 fields, got " + std::to_string(fields.size()));
    }
    TallyRow row;
    row.setting.label = fields[0];
    row.setting.transmittance = parse_double(fields[1], where + " (T)");
    row.setting.efficiency = parse_double(fields[2], where + " (eta)");
    row.setting.phase = parse_double(fields[3], where + " (phi)");
    row.setting.shots = parse_int(fields[4], where + " (shots)");
    row.no_click_count = parse_int(fields[5], where + " (no_click_count)");
    if (row.setting.shots <= 0) {
      throw ConfigError(where + ": shots must be positive");
    }
    if (row.no_click_count < 0 || row.no_click_count > row.setting.shots) {
      throw ConfigError(where + ": no_click_count must lie in [0, shots]");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

TallyTable tally_from_json_rows(const nlohmann::json& rows) {
  if (!rows.is_array()) {
    throw ConfigError("tally rows: expected an array");
  }
  TallyTable table;
  for (std::size_t i = 0; i < rows.size(); i++) {
    const auto& r = rows[i];
    std::string where = "rows[" + std::to_string(i) + "]";
    if (!r.is_object()) {
      throw ConfigError(where + ": expected an object");
    }
    TallyRow row;
    if (!r.contains("T") || !r["T"].is_number()) {
      throw ConfigError(where + ".T: expected a number");
    }
    row.setting.transmittance = r["T"].get<double>();
    row.setting.efficiency = r.value("eta", 1.0);
    row.setting.phase = r.value("phi", 0.0);
    row.setting.label = r.value("label", "row" + std::to_string(i));
    if (!r.contains("shots") || !r["shots"].is_number_integer()) {
      throw ConfigError(where + ".shots: expected an integer");
    }
    row.setting.shots = r["shots"].get<std::int64_t>();
    if (row.setting.shots <= 0) {
      throw ConfigError(where + ".shots: must be positive");
    }
    if (r.contains("no_click_count")) {
      if (!r["no_click_count"].is_number_integer()) {
        throw ConfigError(where + ".no_click_count: expected an integer");
      }
      row.no_click_count = r["no_click_count"].get<std::int64_t>();
    } else if (r.contains("phat")) {
      if (!r["phat"].is_number()) {
        throw ConfigError(where + ".phat: expected a number");
      }
      double phat = r["phat"].get<double>();
      if (!(phat >= 0.0 && phat <= 1.0)) {
        throw ConfigError(where + ".phat: must lie in [0, 1]");
      }
      row.no_click_count = std::llround(phat * static_cast<double>(row.setting.shots));
    } else {
      throw ConfigError(where + ": needs either no_click_count or phat");
    }
    if (row.no_click_count < 0 || row.no_click_count > row.setting.shots) {
      throw ConfigError(where + ".no_click_count: must lie in [0, shots]");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

nlohmann::json tally_to_json(const TallyTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const TallyRow& row : table.rows) {
    rows.push_back({{"label", row.setting.label},
                    {"T", row.setting.transmittance},
                    {"eta", row.setting.efficiency},
                    {"phi", row.setting.phase},
                    {"shots", row.setting.shots},
                    {"no_click_count", row.no_click_count}});
  }
  return rows;
}

nlohmann::json json_number(double value) {
  if (std::isfinite(value)) {
    return value;
  }
  if (std::isnan(value)) {
    return "nan";
  }
  return value > 0 ? "inf" : "-inf";
}

std::string verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::Detected:
      return "detected";
    case Verdict::NotDetected:
      return "not_detected";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

namespace {

nlohmann::json criterion_to_json(const CriterionResult& result) {
  return {{"verdict", verdict_name(result.verdict)},
          {"entangled", result.detected()},
          {"margin", json_number(result.margin)},
          {"threshold", json_number(result.threshold)}};
}

}  // namespace

nlohmann::json single_mode_estimate_to_json(const SingleModeEstimate& est) {
  nlohmann::json j;
  j["tr_gamma"] = json_number(est.tr_gamma);
  j["se_tr_gamma"] = json_number(est.se_tr_gamma);
  j["det_gamma"] = json_number(est.det_gamma);
  j["se_det_gamma"] = json_number(est.se_det_gamma);
  j["lambda"] = json_number(est.lambda);
  j["se_lambda"] = json_number(est.se_lambda);
  j["purity"] = json_number(est.purity);
  j["se_purity"] = json_number(est.se_purity);
  j["physical"] = est.physical;
  j["distance_to_physical"] = json_number(est.distance_to_physical);
  j["wilson_fallback"] = est.wilson_fallback;
  j["dropped_rows"] = est.dropped_rows;
  return j;
}

nlohmann::json multimode_estimate_to_json(const MultimodeEstimate& est) {
  nlohmann::json j;
  nlohmann::json f = nlohmann::json::array();
  nlohmann::json se_f = nlohmann::json::array();
  for (double v : est.f.f) {
    f.push_back(json_number(v));
  }
  for (double v : est.se_f) {
    se_f.push_back(json_number(v));
  }
  j["mode_count"] = est.f.mode_count;
  j["f"] = f;
  j["se_f"] = se_f;
  j["lambda"] = json_number(est.lambda);
  j["se_lambda"] = json_number(est.se_lambda);
  j["purity"] = json_number(est.purity);
  j["se_purity"] = json_number(est.se_purity);
  j["condition_number"] = json_number(est.condition_number);
  j["physical"] = est.physical;
  j["distance_to_physical"] = json_number(est.distance_to_physical);
  j["wilson_fallback"] = est.wilson_fallback;
  j["dropped_rows"] = est.dropped_rows;
  return j;
}

nlohmann::json negativity_report_to_json(const NegativityReport& report) {
  nlohmann::json j;
  nlohmann::json dets;
  dets["det_a"] = json_number(report.determinants.det_a);
  dets["se_det_a"] = json_number(report.determinants.se_det_a);
  dets["det_b"] = json_number(report.determinants.det_b);
  dets["se_det_b"] = json_number(report.determinants.se_det_b);
  dets["det_ab"] = json_number(report.determinants.det_ab);
  dets["se_det_ab"] = json_number(report.determinants.se_det_ab);
  dets["det_sigma"] = json_number(report.determinants.det_sigma.value_or(
      std::numeric_limits<double>::quiet_NaN()));
  dets["se_det_sigma"] = json_number(report.determinants.se_det_sigma);
  j["determinants"] = dets;
  j["zeta1"] = json_number(report.zeta1);
  j["zeta2"] = json_number(report.zeta2);
  j["se_zeta2"] = json_number(report.se_zeta2);
  j["log_negativity"] = json_number(report.log_negativity);
  j["se_log_negativity"] = json_number(report.se_log_negativity);
  j["phi_star"] = json_number(report.phi_star);
  j["criteria"] = {{"nec_suf", criterion_to_json(report.nec_suf)},
                   {"local_sufficient", criterion_to_json(report.local_sufficient)}};
  j["entangled_nec_suf"] = report.entangled_nec_suf;
  j["entangled_sufficient_local"] = report.entangled_sufficient_local;
  j["inconclusive"] = report.inconclusive;
  j["zeta2_snapped"] = report.zeta2_snapped;
  nlohmann::json y = nlohmann::json::array();
  nlohmann::json se_y = nlohmann::json::array();
  for (int k = 0; k < 3; k++) {
    y.push_back(json_number(report.y_phase[static_cast<std::size_t>(k)]));
    se_y.push_back(json_number(report.se_y_phase[static_cast<std::size_t>(k)]));
  }
  j["y_phase"] = y;
  j["se_y_phase"] = se_y;
  j["condition_number_ab"] = json_number(report.condition_number_ab);
  j["wilson_fallback"] = report.wilson_fallback;
  j["dropped_rows"] = report.dropped_rows;
  nlohmann::json subs = nlohmann::json::array();
  for (const SubExperimentResult& sub : report.sub_experiments) {
    nlohmann::json s;
    s["label"] = sub.label;
    s["phi"] = json_number(sub.phi);
    s["det"] = json_number(sub.det);
    s["se_det"] = json_number(sub.se_det);
    s["tallies"] = tally_to_json(sub.tallies);
    subs.push_back(s);
  }
  j["sub_experiments"] = subs;
  return j;
}

}  // namespace noclick
