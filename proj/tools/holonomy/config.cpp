#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "polynomial.hpp"

namespace holonomy::cli {

namespace {

std::string where(const YAML::Node& n) {
  try {
    const auto m = n.Mark();
    return m.is_null() ? std::string() : " (line " + std::to_string(m.line + 1) + ")";
  } catch (const YAML::Exception&) {
    return {};
  }
}

[[noreturn]] void fail(const std::string& key, const std::string& what, const YAML::Node& n = {}) {
  throw ConfigError(key + ": " + what + where(n));
}

template <class T>
T scalar(const YAML::Node& n, const std::string& key) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    fail(key, "expected a scalar of the right type", n);
  }
}

cplx complex_value(const YAML::Node& n, const std::string& key) {
  if (n.IsScalar()) return {scalar<double>(n, key), 0.0};
  if (n.IsSequence() && n.size() == 2) return {scalar<double>(n[0], key), scalar<double>(n[1], key)};
  fail(key, "complex numbers are [re, im] pairs", n);
}

std::vector<double> reals(const YAML::Node& n, const std::string& key) {
  if (!n.IsSequence()) fail(key, "expected a list of numbers", n);
  std::vector<double> out;
  for (const auto& v : n) out.push_back(scalar<double>(v, key));
  return out;
}

Point point_value(const YAML::Node& n, const std::string& key, int dim) {
  const std::vector<double> v = reals(n, key);
  if (static_cast<int>(v.size()) != dim) fail(key, "expected " + std::to_string(dim) + " coordinates", n);
  return Eigen::Map<const Point>(v.data(), dim);
}

MatrixFamily family_from(const YAML::Node& n) {
  if (!n || !n.IsMap()) fail("family", "missing or not a table");
  if (n["builtin"]) {
    const std::string name = scalar<std::string>(n["builtin"], "family.builtin");
    const auto ex = analytic::example_from_name(name);
    if (!ex) fail("family.builtin", "unknown family '" + name + "'", n["builtin"]);
    analytic::ExampleParams p;
    if (n["alpha"]) p.alpha = complex_value(n["alpha"], "family.alpha");
    if (n["beta"]) p.beta = complex_value(n["beta"], "family.beta");
    if (n["gamma"]) p.gamma = scalar<double>(n["gamma"], "family.gamma");
    return analytic::example_family(*ex, p);
  }
  if (n["polynomial"]) {
    const YAML::Node poly = n["polynomial"];
    PolynomialSpec spec;
    spec.dim = scalar<int>(poly["dim"], "family.polynomial.dim");
    const std::string var = poly["variable"] ? scalar<std::string>(poly["variable"], "family.polynomial.variable") : "z";
    spec.complex_variable = var == "z";
    if (!spec.complex_variable && var != "real") fail("family.polynomial.variable", "expected 'z' or 'real'", poly);
    const YAML::Node rows = poly["entries"];
    if (!rows || !rows.IsSequence() || static_cast<int>(rows.size()) != spec.dim) {
      fail("family.polynomial.entries", "expected " + std::to_string(spec.dim) + " rows", poly);
    }
    if (!spec.complex_variable) spec.param_dim = scalar<int>(poly["params"], "family.polynomial.params");
    for (const auto& row : rows) {
      if (!row.IsSequence() || static_cast<int>(row.size()) != spec.dim) {
        fail("family.polynomial.entries", "each row needs " + std::to_string(spec.dim) + " entries", row);
      }
      for (const auto& entry : row) {
        if (spec.complex_variable) {
          std::vector<cplx> coeffs;
          if (entry.IsSequence()) {
            for (const auto& c : entry) coeffs.push_back(complex_value(c, "family.polynomial.entries"));
          } else {
            coeffs.push_back(complex_value(entry, "family.polynomial.entries"));
          }
          spec.complex_entries.push_back(std::move(coeffs));
        } else {
          std::vector<Monomial> terms;
          if (!entry.IsSequence()) fail("family.polynomial.entries", "real mode entries are lists of terms", entry);
          for (const auto& t : entry) {
            Monomial m;
            m.coeff = complex_value(t["coeff"], "family.polynomial.entries.coeff");
            for (const auto& p : t["powers"]) m.powers.push_back(scalar<int>(p, "family.polynomial.entries.powers"));
            terms.push_back(std::move(m));
          }
          spec.real_entries.push_back(std::move(terms));
        }
      }
    }
    try {
      return polynomial_family(spec);
    } catch (const std::invalid_argument& e) {
      fail("family.polynomial", e.what(), poly);
    }
  }
  fail("family", "needs 'builtin' or 'polynomial'", n);
}

std::pair<int, int> axes_of(const YAML::Node& n, const std::string& key, int dim) {
  if (!n) return {0, 1};
  const std::vector<double> a = reals(n, key);
  if (a.size() != 2) fail(key, "expected two axis indices", n);
  const int i = static_cast<int>(a[0]), j = static_cast<int>(a[1]);
  if (i < 0 || j < 0 || i >= dim || j >= dim || i == j) fail(key, "axes must be distinct coordinates", n);
  return {i, j};
}

Curve curve_from(const YAML::Node& n, int dim) {
  if (!n || !n.IsMap()) fail("curve", "missing or not a table");
  const std::string kind = scalar<std::string>(n["kind"], "curve.kind");
  auto center = [&] { return n["center"] ? point_value(n["center"], "curve.center", dim) : Point(Point::Zero(dim)); };
  std::optional<Curve> c;
  if (kind == "circle") {
    const auto [i, j] = axes_of(n["axes"], "curve.axes", dim);
    const double r = scalar<double>(n["radius"], "curve.radius");
    if (!(r > 0.0)) fail("curve.radius", "must be positive", n["radius"]);
    c = Curve::circle(center(), r, i, j);
  } else if (kind == "ellipse") {
    const auto [i, j] = axes_of(n["axes"], "curve.axes", dim);
    const std::vector<double> s = reals(n["semi_axes"], "curve.semi_axes");
    if (s.size() != 2 || !(s[0] > 0.0) || !(s[1] > 0.0)) fail("curve.semi_axes", "need two positive values", n);
    const double rot = n["rotation"] ? scalar<double>(n["rotation"], "curve.rotation") : 0.0;
    c = Curve::ellipse(center(), s[0], s[1], rot, i, j);
  } else if (kind == "polyline") {
    std::vector<Point> v;
    for (const auto& p : n["vertices"]) v.push_back(point_value(p, "curve.vertices", dim));
    if (v.size() < 2) fail("curve.vertices", "need at least two vertices", n);
    const bool closed = n["closed"] ? scalar<bool>(n["closed"], "curve.closed") : true;
    c = Curve::polyline(std::move(v), closed);
  } else if (kind == "parametric-polynomial") {
    const YAML::Node coords = n["coefficients"];
    if (!coords || !coords.IsSequence() || static_cast<int>(coords.size()) != dim) {
      fail("curve.coefficients", "need one coefficient list per coordinate", n);
    }
    std::vector<std::vector<double>> cs;
    for (const auto& x : coords) {
      cs.push_back(reals(x, "curve.coefficients"));
      if (cs.back().empty() || static_cast<int>(cs.back().size()) > kMaxDegree + 1) {
        fail("curve.coefficients", "degree must be 0.." + std::to_string(kMaxDegree), x);
      }
    }
    const bool closed = n["closed"] ? scalar<bool>(n["closed"], "curve.closed") : true;
    c = Curve(
        [cs](double t) {
          Point p(static_cast<Eigen::Index>(cs.size()));
          for (std::size_t i = 0; i < cs.size(); ++i) {
            double v = 0.0;
            for (auto it = cs[i].rbegin(); it != cs[i].rend(); ++it) v = v * t + *it;
            p(static_cast<Eigen::Index>(i)) = v;
          }
          return p;
        },
        closed);
  } else {
    fail("curve.kind", "unknown kind '" + kind + "'", n["kind"]);
  }
  if (n["orientation"]) {
    const std::string o = scalar<std::string>(n["orientation"], "curve.orientation");
    if (o == "negative") {
      c = c->reversed();
    } else if (o != "positive") {
      fail("curve.orientation", "expected positive or negative", n["orientation"]);
    }
  }
  if (n["period"]) c = c->with_period(scalar<double>(n["period"], "curve.period"));
  return *c;
}

CurvatureMethod method_from(const std::string& s, const YAML::Node& n) {
  if (s == "sum-over-states") return CurvatureMethod::SumOverStates;
  if (s == "exterior-derivative") return CurvatureMethod::ExteriorDerivative;
  fail("curvature.methods", "unknown method '" + s + "'", n);
}

GridSpec grid_from(const YAML::Node& n, int dim) {
  GridSpec g;
  std::tie(g.axis_u, g.axis_v) = axes_of(n["axes"], "curvature.axes", dim);
  auto range = [&](const char* key, double& lo, double& hi, int& count) {
    if (!n[key]) return;
    const std::vector<double> r = reals(n[key], std::string("curvature.") + key);
    if (r.size() != 3 || !(r[1] > r[0]) || r[2] < 1) fail(std::string("curvature.") + key, "expected [min, max, count]", n);
    lo = r[0];
    hi = r[1];
    count = static_cast<int>(r[2]);
  };
  range("u", g.u_min, g.u_max, g.nu);
  range("v", g.v_min, g.v_max, g.nv);
  g.base = n["base"] ? point_value(n["base"], "curvature.base", dim) : Point(Point::Zero(dim));
  if (n["methods"]) {
    g.methods.clear();
    for (const auto& m : n["methods"]) g.methods.push_back(method_from(scalar<std::string>(m, "curvature.methods"), m));
    if (g.methods.empty()) fail("curvature.methods", "list is empty", n);
  }
  if (n["step"]) g.step = scalar<double>(n["step"], "curvature.step");
  return g;
}

JobConfig from_node(const YAML::Node& root) {
  if (!root || !root.IsMap()) throw ConfigError("config: top level must be a table");
  JobConfig c;
  c.family = family_from(root["family"]);
  if (root["curve"]) c.curve = curve_from(root["curve"], c.family->param_dim());
  if (root["labels"]) {
    const YAML::Node l = root["labels"];
    if (l.IsScalar() && l.as<std::string>() == "all") {
      c.labels.reset();
    } else if (l.IsSequence()) {
      std::vector<int> v;
      for (const auto& x : l) {
        const int k = scalar<int>(x, "labels");
        if (k < 1 || k > c.family->matrix_dim()) fail("labels", "labels run from 1 to " + std::to_string(c.family->matrix_dim()), x);
        v.push_back(k - 1);
      }
      c.labels = v;
    } else {
      fail("labels", "expected 'all' or a list", l);
    }
  }
  if (root["samples"]) c.samples = scalar<int>(root["samples"], "samples");
  if (c.samples < 8) fail("samples", "must be >= 8", root["samples"]);
  if (root["commands"]) {
    for (const auto& x : root["commands"]) {
      const std::string s = scalar<std::string>(x, "commands");
      if (s != "analyze" && s != "phase" && s != "curvature" && s != "sweep") fail("commands", "unknown command '" + s + "'", x);
      c.commands.push_back(s);
    }
  }
  if (const YAML::Node o = root["output"]) {
    if (o["dir"]) c.out_dir = scalar<std::string>(o["dir"], "output.dir");
    if (o["format"]) c.format = scalar<std::string>(o["format"], "output.format");
    if (o["plot"]) c.plot = scalar<bool>(o["plot"], "output.plot");
  }
  if (c.format != "csv" && c.format != "json") fail("output.format", "expected csv or json");
  if (root["curvature"]) c.grid = grid_from(root["curvature"], c.family->param_dim());
  if (const YAML::Node s = root["sweep"]) {
    if (s["T"]) c.sweep_T = reals(s["T"], "sweep.T");
    for (double t : c.sweep_T) {
      if (!(t > 0.0)) fail("sweep.T", "durations must be positive", s["T"]);
    }
    if (s["rel_tol"]) c.rel_tol = scalar<double>(s["rel_tol"], "sweep.rel_tol");
  }
  if (const YAML::Node s = root["self_test"]) {
    if (s["seed"]) c.seed = scalar<unsigned>(s["seed"], "self_test.seed");
    if (s["gauge_trials"]) c.gauge_trials = scalar<int>(s["gauge_trials"], "self_test.gauge_trials");
  }
  return c;
}

}  // namespace

std::vector<int> JobConfig::label_list(int n) const {
  if (labels) return *labels;
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  return all;
}

JobConfig parse_config(const std::string& yaml_text) {
  try {
    return from_node(YAML::Load(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const Error& e) {
    // curve or family construction rejected the values
    throw ConfigError(std::string("config: ") + e.what());
  }
}

JobConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace holonomy::cli
