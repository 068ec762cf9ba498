#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <holonomy/holonomy.hpp>

namespace holonomy::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  int axis_u = 0;
  int axis_v = 1;
  double u_min = -1.0, u_max = 1.0;
  double v_min = -1.0, v_max = 1.0;
  int nu = 21, nv = 21;
  Point base;
  std::vector<CurvatureMethod> methods{CurvatureMethod::SumOverStates};
  /// <= 0 selects the per-point default step.
  double step = 0.0;
};

struct JobConfig {
  std::optional<MatrixFamily> family;
  std::optional<Curve> curve;
  /// Zero-based frame labels; nullopt means all.
  std::optional<std::vector<int>> labels;
  int samples = 2048;
  std::vector<std::string> commands;
  std::filesystem::path out_dir = ".";
  std::string format = "csv";
  bool plot = false;
  std::optional<GridSpec> grid;
  std::vector<double> sweep_T;
  double rel_tol = 1e-10;
  unsigned seed = 1;
  int gauge_trials = 0;

  /// Labels to run for a family of dimension n.
  std::vector<int> label_list(int n) const;
};

/// Parses a YAML job file. Throws ConfigError naming the offending key.
JobConfig load_config(const std::filesystem::path& path);
JobConfig parse_config(const std::string& yaml_text);

}  // namespace holonomy::cli
