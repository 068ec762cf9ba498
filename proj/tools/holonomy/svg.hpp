#pragma once

#include <string>
#include <vector>

namespace holonomy::cli {

struct Series {
  std::string name;
  std::vector<double> x, y;
};

/// Static line chart with axes, tick labels and a legend.
std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series);

/// Heatmap of values[iv * nu + iu]; NaN cells are drawn as masked.
std::string heatmap(const std::string& title, const std::vector<double>& values, int nu, int nv, double u_min,
                    double u_max, double v_min, double v_max);

}  // namespace holonomy::cli
