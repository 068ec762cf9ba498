#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace holonomy::cli {

/// One line of an analyze or phase report. Phase quantities are absent on
/// analyze rows.
struct ReportRow {
  std::string command;
  int label = 1;  // one-based
  std::string monodromy;
  int traversals = 1;
  std::optional<double> delta_re, delta_im;
  std::optional<double> gamma_raw, gamma_mod, gamma_im;
  std::optional<double> holonomy_abs;
  int refinement_depth = 0;
  double min_gap = 0.0;
  /// Largest relative change of the holonomy under random gauges, when run.
  std::optional<double> gauge_residual;

  bool operator==(const ReportRow&) const = default;
};

struct SweepReportRow {
  int label = 1;
  double T = 0.0;
  std::optional<double> error;
  double fidelity = 0.0;
  std::optional<double> gamma_re, gamma_im;
  std::string status;

  bool operator==(const SweepReportRow&) const = default;
};

void to_json(nlohmann::json& j, const ReportRow& r);
void from_json(const nlohmann::json& j, ReportRow& r);
void to_json(nlohmann::json& j, const SweepReportRow& r);
void from_json(const nlohmann::json& j, SweepReportRow& r);

/// Numbers with 17 significant digits; absent values are empty cells.
std::string format_number(double v);
std::string report_csv(const std::vector<ReportRow>& rows);
std::string sweep_csv(const std::vector<SweepReportRow>& rows);
std::string report_json(const std::vector<ReportRow>& rows);
std::vector<ReportRow> parse_report_json(const std::string& text);

}  // namespace holonomy::cli
