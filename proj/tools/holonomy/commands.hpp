#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "report.hpp"

namespace holonomy::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kNearEP = 3,
  kPrecisionLoss = 4,
};

struct CurvatureCell {
  double u = 0.0, v = 0.0;
  int label = 1;  // one-based frame column at the grid point
  std::optional<cplx> sum_over_states, exterior_derivative;
  bool masked = false;
};

struct CurvatureReport {
  std::vector<CurvatureCell> cells;
  int masked = 0;
};

// Each command writes its files into config.out_dir and a short summary to `out`.
std::vector<ReportRow> cmd_analyze(const JobConfig& config, std::ostream& out);
std::vector<ReportRow> cmd_phase(const JobConfig& config, std::ostream& out);
CurvatureReport cmd_curvature(const JobConfig& config, std::ostream& out);
std::vector<SweepReportRow> cmd_sweep(const JobConfig& config, std::ostream& out);

std::string curvature_csv(const CurvatureReport& report);

/// Parses the command line, runs one command and maps failures to exit codes.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace holonomy::cli
