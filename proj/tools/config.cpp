#include "config.hpp"

#include <fstream>
#include <memory>
#include <sstream>

#include "json.hpp"

namespace specfun::cli {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(where, std::string("missing key '") + key + "'");
  return obj.at(key);
}

double to_real(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

cplx to_complex(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  fail(where, "expected a number or [re, im]");
}

std::vector<double> to_reals(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(to_real(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

Vector to_vector(const json& j, Eigen::Index n, const std::string& where) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n) {
    fail(where, "expected a vector of length " + std::to_string(n));
  }
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = to_complex(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

// Matrix from rows of complex entries, or the strings "identity" / "zero".
Matrix to_matrix(const json& j, Eigen::Index rows, Eigen::Index cols, const std::string& where) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "identity" && rows == cols) return Matrix::Identity(rows, cols);
    if (name == "zero") return Matrix::Zero(rows, cols);
    fail(where, "unknown matrix name '" + name + "'");
  }
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    fail(where, "expected " + std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    m.row(r) = to_vector(j[r], cols, where + "[" + std::to_string(r) + "]").transpose();
  }
  return m;
}

std::vector<Matrix> to_matrices(const json& j, Eigen::Index n, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of matrices");
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(to_matrix(j[i], n, n, where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

CoefficientField to_field(const json& j, Eigen::Index n, const std::string& where) {
  const auto kind = require(j, "kind", where).get<std::string>();
  try {
    if (kind == "constant") return CoefficientField::constant(to_matrix(require(j, "value", where), n, n, where + ".value"));
    if (kind == "polynomial") {
      return CoefficientField::polynomial(to_matrices(require(j, "coefficients", where), n, where + ".coefficients"));
    }
    if (kind == "piecewise_constant") {
      return CoefficientField::piecewise_constant(to_reals(require(j, "breakpoints", where), where + ".breakpoints"),
                                                  to_matrices(require(j, "values", where), n, where + ".values"));
    }
    if (kind == "tabulated") {
      return CoefficientField::tabulated(to_reals(require(j, "nodes", where), where + ".nodes"),
                                         to_matrices(require(j, "values", where), n, where + ".values"));
    }
  } catch (const Error& e) {
    fail(where, e.what());
  }
  fail(where, "unknown coefficient kind '" + kind + "'");
}

FunctionSpec to_function(const json& j, Eigen::Index n, const std::string& where) {
  FunctionSpec spec;
  spec.kind = require(j, "kind", where).get<std::string>();
  if (spec.kind == "constant") {
    spec.vectors.push_back(to_vector(require(j, "value", where), n, where + ".value"));
  } else if (spec.kind == "polynomial" || spec.kind == "tabulated") {
    const json& list = require(j, spec.kind == "polynomial" ? "coefficients" : "values", where);
    if (!list.is_array() || list.empty()) fail(where, "expected a nonempty list of vectors");
    for (std::size_t i = 0; i < list.size(); ++i) {
      spec.vectors.push_back(to_vector(list[i], n, where + "[" + std::to_string(i) + "]"));
    }
    if (spec.kind == "tabulated") {
      spec.nodes = to_reals(require(j, "nodes", where), where + ".nodes");
      if (spec.nodes.size() != spec.vectors.size()) fail(where, "nodes and values differ in length");
      for (std::size_t i = 1; i < spec.nodes.size(); ++i) {
        if (!(spec.nodes[i] > spec.nodes[i - 1])) fail(where, "nodes must increase");
      }
    }
  } else if (spec.kind == "solution") {
    spec.spectral_point = to_real(require(j, "s", where), where + ".s");
    spec.vectors.push_back(to_vector(require(j, "initial", where), n, where + ".initial"));
  } else {
    fail(where, "unknown function kind '" + spec.kind + "'");
  }
  return spec;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");

  try {
    const json& sys = require(root, "system", "config");
    const Dimensions dims{require(sys, "nu", "system").get<int>(), sys.value("nu_hat", 0)};
    if (dims.nu < 1 || dims.nu_hat < 0) fail("system", "need nu >= 1 and nu_hat >= 0");
    const Eigen::Index n = dims.n();
    const auto interval = to_reals(require(sys, "interval", "system"), "system.interval");
    if (interval.size() != 2) fail("system.interval", "expected [a, b]");
    const CoefficientField B = to_field(require(sys, "B", "system"), n, "system.B");
    const CoefficientField Delta = to_field(require(sys, "Delta", "system"), n, "system.Delta");

    RunConfig cfg(SymmetricSystem(dims, interval[0], interval[1], B, Delta));
    const json& tau = require(root, "tau", "config");
    if (!tau.is_array() || tau.empty()) fail("tau", "expected a nonempty list of spanning vectors");
    Matrix span(n, static_cast<Eigen::Index>(tau.size()));
    for (std::size_t i = 0; i < tau.size(); ++i) {
      span.col(static_cast<Eigen::Index>(i)) = to_vector(tau[i], n, "tau[" + std::to_string(i) + "]");
    }
    cfg.tau = Subspace(span);

    if (root.contains("parameter")) {
      const json& p = root.at("parameter");
      if (p.contains("preset")) {
        cfg.parameter_label = p.at("preset").get<std::string>();
        if (cfg.parameter_label != "dirichlet" && cfg.parameter_label != "neumann") {
          fail("parameter.preset", "expected \"dirichlet\" or \"neumann\"");
        }
      } else {
        const json& c0 = require(p, "C0", "parameter");
        const json& c1 = require(p, "C1", "parameter");
        Eigen::Index dd = 0;
        if (c0.is_array()) dd = static_cast<Eigen::Index>(c0.size());
        else if (c1.is_array()) dd = static_cast<Eigen::Index>(c1.size());
        else dd = build_geometry(cfg.system, cfg.tau).dim_dot();
        if (dd == 0) fail("parameter.C0", "expected a square matrix");
        cfg.parameter = BoundaryParameter::constant(to_matrix(c0, dd, dd, "parameter.C0"),
                                                    to_matrix(c1, dd, dd, "parameter.C1"));
        cfg.parameter_label = "custom";
      }
    }

    if (root.contains("lambda")) {
      const json& l = root.at("lambda");
      if (!l.is_array()) fail("lambda", "expected a list of complex numbers");
      for (std::size_t i = 0; i < l.size(); ++i) cfg.lambdas.push_back(to_complex(l[i], "lambda[" + std::to_string(i) + "]"));
    }

    if (root.contains("invert")) {
      const json& inv = root.at("invert");
      const auto window = to_reals(require(inv, "window", "invert"), "invert.window");
      if (window.size() != 2 || !(window[1] > window[0])) fail("invert.window", "expected [lo, hi] with lo < hi");
      cfg.invert.lo = window[0];
      cfg.invert.hi = window[1];
      cfg.invert.step = inv.value("step", cfg.invert.step);
      if (!(cfg.invert.step > 0.0)) fail("invert.step", "must be positive");
      if (inv.contains("epsilons")) cfg.invert.options.epsilons = to_reals(inv.at("epsilons"), "invert.epsilons");
      cfg.invert.options.min_jump = inv.value("min_jump", cfg.invert.options.min_jump);
    }

    if (root.contains("f")) cfg.f = to_function(root.at("f"), n, "f");
    if (root.contains("t_grid")) cfg.t_grid = to_reals(root.at("t_grid"), "t_grid");
    if (root.contains("resolvent_lambda")) cfg.resolvent_lambda = to_complex(root.at("resolvent_lambda"), "resolvent_lambda");
    if (root.contains("admissibility_y")) cfg.admissibility_y = to_reals(root.at("admissibility_y"), "admissibility_y");
    if (root.contains("tolerances")) {
      const json& tol = root.at("tolerances");
      cfg.validation_tol = tol.value("validation", cfg.validation_tol);
      cfg.neutral_tol = tol.value("neutral", cfg.neutral_tol);
      cfg.pair_tol = tol.value("pair", cfg.pair_tol);
    }
    if (root.contains("output")) cfg.output_dir = root.at("output").get<std::string>();
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("schema error: ") + e.what());
  } catch (const Error& e) {
    throw ConfigError(std::string(error_name(e.code())) + ": " + e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

BoundaryParameter resolve_parameter(const RunConfig& cfg, const BoundaryGeometry& geom) {
  const Eigen::Index dd = geom.dim_dot();
  if (cfg.parameter_label == "dirichlet" || cfg.parameter_label.empty()) return BoundaryParameter::identity_zero(dd);
  if (cfg.parameter_label == "neumann") return BoundaryParameter::zero_identity(dd);
  if (cfg.parameter->dim() != dd) {
    throw ConfigError("parameter matrices must be " + std::to_string(dd) + "x" + std::to_string(dd));
  }
  return *cfg.parameter;
}

VectorFunction make_function(const FunctionSpec& spec, const SymmetricSystem& sys) {
  if (spec.kind == "constant") {
    return [v = spec.vectors.front()](double) { return v; };
  }
  if (spec.kind == "polynomial") {
    return [c = spec.vectors](double t) {
      Vector acc = Vector::Zero(c.front().size());
      for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
      return acc;
    };
  }
  if (spec.kind == "tabulated") {
    return [nodes = spec.nodes, values = spec.vectors](double t) -> Vector {
      if (t <= nodes.front()) return values.front();
      if (t >= nodes.back()) return values.back();
      const auto hi = static_cast<std::size_t>(std::upper_bound(nodes.begin(), nodes.end(), t) - nodes.begin());
      const double w = (t - nodes[hi - 1]) / (nodes[hi] - nodes[hi - 1]);
      return (1.0 - w) * values[hi - 1] + w * values[hi];
    };
  }
  auto prop = std::make_shared<const Propagator>(sys, cplx(spec.spectral_point, 0.0));
  const SolutionFrame frame(prop, spec.vectors.front());
  return [frame](double t) { return Vector(frame(t).col(0)); };
}

}  // namespace specfun::cli
