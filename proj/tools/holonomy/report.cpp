#include "report.hpp"

#include <fmt/format.h>

namespace holonomy::cli {

namespace {

template <class T>
void put(nlohmann::json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
void get(const nlohmann::json& j, const char* key, std::optional<T>& v) {
  if (j.contains(key) && !j.at(key).is_null()) {
    v = j.at(key).get<T>();
  } else {
    v.reset();
  }
}

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

}  // namespace

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

void to_json(nlohmann::json& j, const ReportRow& r) {
  j = nlohmann::json{{"command", r.command},
                     {"label", r.label},
                     {"monodromy", r.monodromy},
                     {"traversals", r.traversals},
                     {"refinement_depth", r.refinement_depth},
                     {"min_gap", r.min_gap}};
  put(j, "delta_re", r.delta_re);
  put(j, "delta_im", r.delta_im);
  put(j, "gamma_raw", r.gamma_raw);
  put(j, "gamma_mod", r.gamma_mod);
  put(j, "gamma_im", r.gamma_im);
  put(j, "holonomy_abs", r.holonomy_abs);
  put(j, "gauge_residual", r.gauge_residual);
}

void from_json(const nlohmann::json& j, ReportRow& r) {
  j.at("command").get_to(r.command);
  j.at("label").get_to(r.label);
  j.at("monodromy").get_to(r.monodromy);
  j.at("traversals").get_to(r.traversals);
  j.at("refinement_depth").get_to(r.refinement_depth);
  j.at("min_gap").get_to(r.min_gap);
  get(j, "delta_re", r.delta_re);
  get(j, "delta_im", r.delta_im);
  get(j, "gamma_raw", r.gamma_raw);
  get(j, "gamma_mod", r.gamma_mod);
  get(j, "gamma_im", r.gamma_im);
  get(j, "holonomy_abs", r.holonomy_abs);
  get(j, "gauge_residual", r.gauge_residual);
}

void to_json(nlohmann::json& j, const SweepReportRow& r) {
  j = nlohmann::json{{"label", r.label}, {"T", r.T}, {"fidelity", r.fidelity}, {"status", r.status}};
  put(j, "error", r.error);
  put(j, "gamma_re", r.gamma_re);
  put(j, "gamma_im", r.gamma_im);
}

void from_json(const nlohmann::json& j, SweepReportRow& r) {
  j.at("label").get_to(r.label);
  j.at("T").get_to(r.T);
  j.at("fidelity").get_to(r.fidelity);
  j.at("status").get_to(r.status);
  get(j, "error", r.error);
  get(j, "gamma_re", r.gamma_re);
  get(j, "gamma_im", r.gamma_im);
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::string out =
      "command,label,monodromy,traversals,delta_re,delta_im,gamma_raw,gamma_mod,gamma_im,holonomy_abs,"
      "refinement_depth,min_gap,gauge_residual\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.command, r.label, r.monodromy, r.traversals,
                       cell(r.delta_re), cell(r.delta_im), cell(r.gamma_raw), cell(r.gamma_mod), cell(r.gamma_im),
                       cell(r.holonomy_abs), r.refinement_depth, format_number(r.min_gap), cell(r.gauge_residual));
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepReportRow>& rows) {
  std::string out = "label,T,error,fidelity,gamma_re,gamma_im,status\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", r.label, format_number(r.T), cell(r.error), format_number(r.fidelity),
                       cell(r.gamma_re), cell(r.gamma_im), r.status);
  }
  return out;
}

std::string report_json(const std::vector<ReportRow>& rows) {
  return nlohmann::json{{"rows", rows}}.dump(2) + "\n";
}

std::vector<ReportRow> parse_report_json(const std::string& text) {
  return nlohmann::json::parse(text).at("rows").get<std::vector<ReportRow>>();
}

}  // namespace holonomy::cli
