#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/cfg/helpers.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "svg.hpp"

namespace holonomy::cli {

namespace {

// Relative gap below which analyze warns about a nearby degeneracy.
constexpr double kGapWarning = 1e-3;

std::shared_ptr<spdlog::logger> logger() {
  static const auto log = [] {
    auto l = std::make_shared<spdlog::logger>("holonomy", std::make_shared<spdlog::sinks::stderr_sink_mt>());
    l->set_pattern("[%l] %v");
    l->set_level(spdlog::level::info);
    spdlog::register_logger(l);
    const char* env = std::getenv("HOLONOMY_LOG");
    if (!env) env = std::getenv("SPDLOG_LEVEL");
    if (env) spdlog::cfg::helpers::load_levels(env);
    return l;
  }();
  return log;
}

const MatrixFamily& family_of(const JobConfig& c) {
  if (!c.family) throw ConfigError("family: missing");
  return *c.family;
}

const Curve& curve_of(const JobConfig& c) {
  if (!c.curve) throw ConfigError("curve: missing");
  if (!c.curve->closed()) throw ConfigError("curve: this command needs a closed curve");
  return *c.curve;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  logger()->debug("wrote {}", path.string());
}

void write_report(const JobConfig& c, const std::vector<ReportRow>& rows) {
  if (c.format == "json") {
    write_file(c.out_dir / "report.json", report_json(rows));
  } else {
    write_file(c.out_dir / "report.csv", report_csv(rows));
  }
}

std::vector<int> checked_labels(const JobConfig& c, int n) {
  std::vector<int> labels = c.label_list(n);
  for (int l : labels) {
    if (l < 0 || l >= n) throw ConfigError(fmt::format("labels: label {} out of range 1..{}", l + 1, n));
  }
  return labels;
}

ReportRow base_row(const std::string& command, int label, const SpectralPath& path, const Monodromy& m) {
  ReportRow r;
  r.command = command;
  r.label = label + 1;
  r.monodromy = m.sigma.cycle_notation();
  r.traversals = m.periods[static_cast<std::size_t>(label)];
  r.refinement_depth = path.refinement_depth();
  r.min_gap = path.min_gap();
  return r;
}

std::vector<std::vector<cplx>> random_rescalings(const SpectralPath& path, std::mt19937& rng) {
  std::uniform_real_distribution<double> mag(std::log(0.5), std::log(2.0));
  std::uniform_real_distribution<double> arg(-std::numbers::pi, std::numbers::pi);
  std::vector<std::vector<cplx>> out(static_cast<std::size_t>(path.size()));
  for (auto& row : out) {
    row.resize(static_cast<std::size_t>(path.dim()));
    for (auto& k : row) k = std::polar(std::exp(mag(rng)), arg(rng));
  }
  if (path.closed()) out.back() = out.front();
  return out;
}

}  // namespace

std::vector<ReportRow> cmd_analyze(const JobConfig& c, std::ostream& out) {
  const MatrixFamily& family = family_of(c);
  const SpectralPath path = track(family, curve_of(c), c.samples);
  const Monodromy m = monodromy_of(path);
  const std::vector<Permutation> gens{m.sigma};
  const auto group = generated_group(gens, path.dim());

  out << "sigma = " << m.sigma.cycle_notation() << ", |H| = " << group.size() << '\n';
  out << "periods:";
  for (std::size_t j = 0; j < m.periods.size(); ++j) out << ' ' << j + 1 << ':' << m.periods[j];
  out << '\n';
  out << "min gap = " << format_number(path.min_gap()) << " (relative " << format_number(path.min_gap_rel()) << ")\n";
  if (path.min_gap_rel() < kGapWarning) {
    logger()->warn("curve passes close to a degeneracy: relative gap {:.3g}", path.min_gap_rel());
  }
  if (path.refinement_depth() > 0) logger()->info("tracking bisected steps to depth {}", path.refinement_depth());

  std::vector<ReportRow> rows;
  for (int label : checked_labels(c, path.dim())) rows.push_back(base_row("analyze", label, path, m));
  write_report(c, rows);
  return rows;
}

std::vector<ReportRow> cmd_phase(const JobConfig& c, std::ostream& out) {
  const MatrixFamily& family = family_of(c);
  const Curve& curve = curve_of(c);
  const SpectralPath base = track(family, curve, c.samples);
  const Monodromy m = monodromy_of(base);
  const std::vector<int> labels = checked_labels(c, base.dim());

  struct LabelRun {
    ReportRow row;
    std::vector<RunningPhase> running;
  };
  const auto runs = parallel_map(labels.size(), [&](std::size_t i) {
    const int label = labels[i];
    const int k = m.periods[static_cast<std::size_t>(label)];
    const SpectralPath path = k == 1 ? base : track(family, lift_closed(curve, label, m), c.samples * k);
    const PhaseResult r = geometric_phase(path, label);
    const cplx delta = dynamical_phase(path, label);

    LabelRun run{base_row("phase", label, path, m), {}};
    run.row.traversals = k;
    run.row.delta_re = delta.real();
    run.row.delta_im = delta.imag();
    run.row.gamma_raw = r.geometric.real();
    run.row.gamma_mod = r.geometric_mod;
    run.row.gamma_im = r.geometric.imag();
    run.row.holonomy_abs = std::abs(r.holonomy_factor);
    if (c.gauge_trials > 0) {
      std::mt19937 rng(c.seed + static_cast<unsigned>(label));
      double worst = 0.0;
      for (int trial = 0; trial < c.gauge_trials; ++trial) {
        const PhaseResult g = geometric_phase(gauge_perturb(path, random_rescalings(path, rng)), label);
        worst = std::max(worst, std::abs(g.holonomy_factor - r.holonomy_factor) / std::abs(r.holonomy_factor));
      }
      run.row.gauge_residual = worst;
    }
    if (c.plot) run.running = running_phase(path, label);
    return run;
  });

  std::vector<ReportRow> rows;
  for (const auto& run : runs) {
    const auto& r = run.row;
    out << fmt::format("label {}: k = {}, gamma = {:.12g} (mod 2pi {:.12g}), Im gamma = {:.3g}, |holonomy| = {:.12g}\n",
                       r.label, r.traversals, *r.gamma_raw, *r.gamma_mod, *r.gamma_im, *r.holonomy_abs);
    if (r.gauge_residual) out << fmt::format("label {}: gauge residual {:.3g}\n", r.label, *r.gauge_residual);
    rows.push_back(r);
  }
  write_report(c, rows);

  if (c.plot) {
    std::vector<Series> eig;
    for (int j = 0; j < base.dim(); ++j) {
      Series s{fmt::format("E{}", j + 1), {}, {}};
      for (int k = 0; k < base.size(); ++k) {
        s.x.push_back(base.energy(k, j).real());
        s.y.push_back(base.energy(k, j).imag());
      }
      eig.push_back(std::move(s));
    }
    write_file(c.out_dir / "eigencurves.svg", line_chart("Eigenvalues along the curve", "Re E", "Im E", eig));

    std::vector<Series> running;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      Series re{fmt::format("Re gamma {}", runs[i].row.label), {}, {}};
      Series im{fmt::format("Im gamma {}", runs[i].row.label), {}, {}};
      for (const auto& p : runs[i].running) {
        re.x.push_back(p.t);
        re.y.push_back(p.geometric.real());
        im.x.push_back(p.t);
        im.y.push_back(p.geometric.imag());
      }
      running.push_back(std::move(re));
      running.push_back(std::move(im));
    }
    write_file(c.out_dir / "phase_running.svg", line_chart("Running geometric phase", "t", "gamma", running));
  }
  return rows;
}

std::string curvature_csv(const CurvatureReport& report) {
  std::string s = "u,v,label,F_sos_re,F_sos_im,F_ext_re,F_ext_im,disagreement,masked\n";
  auto opt = [](const std::optional<cplx>& z, bool imag) {
    return z ? format_number(imag ? z->imag() : z->real()) : std::string();
  };
  for (const auto& cell : report.cells) {
    std::string dis;
    if (cell.sum_over_states && cell.exterior_derivative) {
      dis = format_number(std::abs(*cell.sum_over_states - *cell.exterior_derivative));
    }
    s += fmt::format("{},{},{},{},{},{},{},{},{}\n", format_number(cell.u), format_number(cell.v), cell.label,
                     opt(cell.sum_over_states, false), opt(cell.sum_over_states, true),
                     opt(cell.exterior_derivative, false), opt(cell.exterior_derivative, true), dis,
                     cell.masked ? 1 : 0);
  }
  return s;
}

CurvatureReport cmd_curvature(const JobConfig& c, std::ostream& out) {
  const MatrixFamily& family = family_of(c);
  if (!c.grid) throw ConfigError("curvature: missing grid section");
  const GridSpec& g = *c.grid;
  if (g.base.size() != family.param_dim()) throw ConfigError("curvature.base: wrong dimension");
  const std::vector<int> labels = checked_labels(c, family.matrix_dim());
  const auto coord = [](double lo, double hi, int n, int i) { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); };

  const std::size_t points = static_cast<std::size_t>(g.nu) * static_cast<std::size_t>(g.nv);
  const auto per_point = parallel_map(points, [&](std::size_t idx) {
    const int iu = static_cast<int>(idx % static_cast<std::size_t>(g.nu));
    const int iv = static_cast<int>(idx / static_cast<std::size_t>(g.nu));
    Point p = g.base;
    p(g.axis_u) = coord(g.u_min, g.u_max, g.nu, iu);
    p(g.axis_v) = coord(g.v_min, g.v_max, g.nv, iv);
    std::vector<CurvatureCell> cells;
    for (int label : labels) {
      CurvatureCell cell{p(g.axis_u), p(g.axis_v), label + 1, {}, {}, false};
      try {
        const double h = g.step > 0.0 ? g.step : default_curvature_step(family, p);
        for (CurvatureMethod method : g.methods) {
          const cplx f = curvature(family, p, label, h, method).components(g.axis_u, g.axis_v);
          if (!std::isfinite(f.real()) || !std::isfinite(f.imag())) throw Error(ErrorKind::NearEP, "non-finite curvature");
          (method == CurvatureMethod::SumOverStates ? cell.sum_over_states : cell.exterior_derivative) = f;
        }
      } catch (const Error& e) {
        cell = CurvatureCell{p(g.axis_u), p(g.axis_v), label + 1, {}, {}, true};
        logger()->debug("masked ({:.6g}, {:.6g}) label {}: {}", cell.u, cell.v, cell.label, e.what());
      }
      cells.push_back(cell);
    }
    return cells;
  });

  CurvatureReport report;
  for (const auto& cells : per_point) {
    for (const auto& cell : cells) {
      report.masked += cell.masked ? 1 : 0;
      report.cells.push_back(cell);
    }
  }
  out << fmt::format("curvature: {} cells, {} masked\n", report.cells.size(), report.masked);
  if (report.masked > 0) logger()->warn("{} of {} curvature cells masked near degeneracies", report.masked, report.cells.size());
  write_file(c.out_dir / "curvature.csv", curvature_csv(report));

  if (c.plot && !labels.empty()) {
    std::vector<double> values;
    for (std::size_t idx = 0; idx < points; ++idx) {
      const CurvatureCell& cell = report.cells[idx * labels.size()];
      const auto& f = cell.sum_over_states ? cell.sum_over_states : cell.exterior_derivative;
      values.push_back(f ? f->real() : std::numeric_limits<double>::quiet_NaN());
    }
    write_file(c.out_dir / "curvature.svg",
               heatmap(fmt::format("Re F, label {}", labels.front() + 1), values, g.nu, g.nv, g.u_min, g.u_max,
                       g.v_min, g.v_max));
  }
  if (!report.cells.empty() && report.masked == static_cast<int>(report.cells.size())) {
    throw Error(ErrorKind::NearEP, "every curvature cell is masked");
  }
  return report;
}

std::vector<SweepReportRow> cmd_sweep(const JobConfig& c, std::ostream& out) {
  const MatrixFamily& family = family_of(c);
  const Curve& curve = curve_of(c);
  const std::vector<int> labels = checked_labels(c, family.matrix_dim());
  if (labels.empty()) {
    logger()->warn("sweep: no labels selected, nothing to do");
    return {};
  }
  if (c.sweep_T.empty()) throw ConfigError("sweep.T: no durations given");

  const Monodromy m = monodromy_of(track(family, curve, c.samples));
  std::vector<SweepReportRow> rows;
  for (int label : labels) {
    const int k = m.periods[static_cast<std::size_t>(label)];
    const Curve lifted = k == 1 ? curve : lift_closed(curve, label, m);
    for (const SweepRow& s : sweep(family, lifted, label, c.sweep_T, c.rel_tol, c.samples * k)) {
      SweepReportRow r;
      r.label = label + 1;
      r.T = s.T;
      r.fidelity = s.fidelity;
      r.status = s.status;
      if (s.status == "ok") {
        r.error = s.error;
        r.gamma_re = s.gamma_exact.real();
        r.gamma_im = s.gamma_exact.imag();
      }
      out << fmt::format("label {} T = {:.6g}: fidelity {:.6g}, status {}{}\n", r.label, r.T, r.fidelity, r.status,
                         r.error ? fmt::format(", error {:.3g}", *r.error) : std::string());
      rows.push_back(std::move(r));
    }
  }
  if (c.format == "json") {
    write_file(c.out_dir / "sweep.json", nlohmann::json(rows).dump(2) + "\n");
  } else {
    write_file(c.out_dir / "sweep.csv", sweep_csv(rows));
  }
  return rows;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geometric phases of non-Hermitian matrix families"};
  app.require_subcommand(1);
  std::string config_path, out_dir, format;
  int samples = 0;
  bool plot = false;
  for (const char* name : {"analyze", "phase", "curvature", "sweep"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "YAML job file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--samples", samples, "samples per traversal")->check(CLI::Range(8, 1 << 24));
    sub->add_option("--format", format, "report format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--plot", plot, "write SVG plots");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  logger();

  int used_samples = samples;
  try {
    JobConfig c = load_config(config_path);
    if (!c.commands.empty() && std::find(c.commands.begin(), c.commands.end(), command) == c.commands.end()) {
      throw ConfigError("commands: '" + command + "' is not enabled in this config");
    }
    if (!out_dir.empty()) c.out_dir = out_dir;
    if (samples > 0) c.samples = samples;
    if (!format.empty()) c.format = format;
    if (plot) c.plot = true;
    used_samples = c.samples;

    if (command == "analyze") {
      cmd_analyze(c, out);
    } else if (command == "phase") {
      cmd_phase(c, out);
    } else if (command == "curvature") {
      cmd_curvature(c, out);
    } else {
      cmd_sweep(c, out);
    }
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    std::string where;
    if (e.curve_parameter()) where = fmt::format(" at t = {:.17g}", *e.curve_parameter());
    err << to_string(e.kind()) << where << ": " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::NearEP:
      case ErrorKind::AmbiguousMatching:
        return kNearEP;
      case ErrorKind::PrecisionLoss:
        err << "try --samples " << 4 * used_samples << " or more\n";
        return kPrecisionLoss;
      case ErrorKind::InvalidSampling:
      case ErrorKind::InvalidCurve:
      case ErrorKind::InvalidParams:
      case ErrorKind::OpenCurve:
        return kConfigError;
      default:
        return kFailure;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace holonomy::cli
