#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace specfun::cli {
namespace {

using nlohmann::ordered_json;

struct Setup {
  BoundaryGeometry geom;
  TripletMaps triplet;
  BoundaryParameter param;
};

Setup prepare(const RunConfig& cfg) {
  GeometryOptions gopts;
  gopts.tol = cfg.neutral_tol;
  BoundaryGeometry geom = build_geometry(cfg.system, cfg.tau, gopts);
  TripletMaps triplet = build_triplet(geom);
  BoundaryParameter param = resolve_parameter(cfg, geom);
  return {std::move(geom), std::move(triplet), std::move(param)};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void write_json(const std::filesystem::path& path, const ordered_json& j) { write_file(path, j.dump(2) + "\n"); }

ordered_json complex_json(cplx z) { return ordered_json::array({z.real(), z.imag()}); }

ordered_json matrix_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

// Header fragment ",re_<p>_r_c,im_<p>_r_c" for a rows x cols matrix.
std::string matrix_header(const std::string& prefix, Eigen::Index rows, Eigen::Index cols) {
  std::string h;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const std::string tag = prefix + "_" + std::to_string(r) + "_" + std::to_string(c);
      h += ",re_" + tag + ",im_" + tag;
    }
  }
  return h;
}

std::string matrix_cells(const Matrix& m) {
  std::string s;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      s += "," + format_real(m(r, c).real()) + "," + format_real(m(r, c).imag());
    }
  }
  return s;
}

ordered_json report_json(const ExistenceReport& r) {
  ordered_json j;
  j["exists"] = r.exists;
  j["n_sigma"] = r.n_sigma;
  j["minimal"] = r.minimal;
  j["spectral_exists"] = r.spectral_exists;
  j["definite"] = r.definite;
  j["null_manifold_dim"] = r.null_manifold_dim;
  j["mul_trivial"] = r.mul_trivial;
  j["companion_neutral"] = r.companion_neutral;
  j["dimension_ok"] = r.dimension_ok;
  j["tau_definite"] = r.tau_definite;
  j["bounds"] = {r.lower_bound, r.upper_bound};
  j["notes"] = r.notes;
  return j;
}

ordered_json decay_json(const DecayFit& fit) {
  ordered_json j;
  j["norms"] = fit.norms;
  j["slope"] = fit.slope;
  j["identically_zero"] = fit.identically_zero;
  j["tends_to_zero"] = fit.tends_to_zero;
  return j;
}

DistributionFunction invert_sigma(const RunConfig& cfg, const Setup& s) {
  const MSampler sampler = [&](cplx lambda) { return m_tau(s.geom, s.triplet, s.param, lambda).value; };
  return stieltjes_invert(sampler, uniform_grid(cfg.invert.lo, cfg.invert.hi, cfg.invert.step),
                          cfg.invert.options);
}

std::vector<double> default_t_grid(const SymmetricSystem& sys) {
  std::vector<double> t;
  for (int i = 0; i <= 10; ++i) t.push_back(sys.a() + (sys.b() - sys.a()) * i / 10.0);
  return t;
}

}  // namespace

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

int cmd_validate(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  ordered_json j;
  bool ok = true;

  const ValidationReport sys_report =
      validate_system(cfg.system, default_sample_grid(cfg.system), cfg.validation_tol);
  ordered_json issues = ordered_json::array();
  for (const auto& issue : sys_report.issues) {
    issues.push_back({{"code", error_name(issue.code)}, {"t", issue.t}, {"magnitude", issue.magnitude}});
    log << "system: " << error_name(issue.code) << " at t = " << format_real(issue.t) << "\n";
  }
  j["system"] = {{"ok", sys_report.ok}, {"issues", issues}};
  ok = ok && sys_report.ok;

  const ExistenceReport er = existence_report(cfg.system, cfg.tau);
  const bool tau_ok = er.companion_neutral && er.dimension_ok && er.tau_definite;
  j["tau"] = {{"ok", tau_ok},
              {"companion_neutral", er.companion_neutral},
              {"dimension_ok", er.dimension_ok},
              {"tau_definite", er.tau_definite},
              {"notes", er.notes}};
  for (const auto& note : er.notes) log << "tau: " << note << "\n";
  ok = ok && tau_ok;

  ordered_json pj = {{"ok", false}};
  if (tau_ok && sys_report.ok) {
    try {
      const Setup s = prepare(cfg);
      const std::vector<cplx> samples = cfg.lambdas.empty() ? std::vector<cplx>{cplx(0.0, 1.0)} : cfg.lambdas;
      const ClassReport cr = validate_pair(s.param, samples, cfg.pair_tol);
      ordered_json violations = ordered_json::array();
      for (const auto& v : cr.violations) {
        const char* kind = v.kind == ClassViolation::Kind::NotNonnegative ? "NotNonnegative" : "NotInvertible";
        violations.push_back({{"lambda", complex_json(v.lambda)}, {"kind", kind}, {"value", v.value}});
        log << "parameter: " << kind << "\n";
      }
      pj = {{"ok", cr.valid}, {"label", cfg.parameter_label.empty() ? "dirichlet" : cfg.parameter_label},
            {"selfadjoint", is_selfadjoint_parameter(s.param, cfg.pair_tol)}, {"violations", violations}};
      ok = ok && cr.valid;
    } catch (const Error& e) {
      pj["error"] = error_name(e.code());
      log << "parameter: " << e.what() << "\n";
      ok = false;
    }
  } else {
    ok = false;
  }
  j["parameter"] = pj;
  j["ok"] = ok;
  write_json(out / "validate.json", j);
  log << (ok ? "validate: ok\n" : "validate: failed\n");
  return ok ? kSuccess : kFailure;
}

int cmd_sample_m(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  const Setup s = prepare(cfg);
  const Eigen::Index d0 = s.geom.dim_h0();
  std::string csv = "re_lambda,im_lambda,status" + matrix_header("m", d0, d0) + "\n";
  int flagged = 0;
  for (cplx lambda : cfg.lambdas) {
    std::string row = format_real(lambda.real()) + "," + format_real(lambda.imag());
    try {
      if (!(lambda.imag() > 0.0)) throw Error(ErrorCode::NearRealAxis, "Im lambda must be positive");
      const MFunctionSample m = m_tau(s.geom, s.triplet, s.param, lambda);
      row += ",ok" + matrix_cells(m.value);
    } catch (const Error& e) {
      row += std::string(",") + error_name(e.code()) + std::string(static_cast<std::size_t>(2 * d0 * d0), ',');
      ++flagged;
    }
    csv += row + "\n";
  }
  write_file(out / "m_samples.csv", csv);
  log << "sample-m: " << cfg.lambdas.size() << " rows, " << flagged << " flagged\n";
  return kSuccess;
}

int cmd_invert(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  const Setup s = prepare(cfg);
  const DistributionFunction sigma = invert_sigma(cfg, s);
  const Eigen::Index d = sigma.dim();
  std::string csv = "s" + matrix_header("sigma", d, d) + "\n";
  for (std::size_t i = 0; i < sigma.grid.size(); ++i) {
    csv += format_real(sigma.grid[i]) + matrix_cells(sigma.values[i]) + "\n";
  }
  write_file(out / "sigma.csv", csv);

  ordered_json j;
  j["window"] = {cfg.invert.lo, cfg.invert.hi};
  j["step"] = cfg.invert.step;
  j["epsilons"] = cfg.invert.options.epsilons;
  j["grid"] = sigma.grid;
  ordered_json jumps = ordered_json::array();
  for (const auto& jump : sigma.jumps) jumps.push_back({{"location", jump.location}, {"size", matrix_json(jump.size)}});
  j["jumps"] = jumps;
  j["diverged_cells"] = sigma.diverged_cells;
  write_json(out / "jumps.json", j);
  log << "invert: " << sigma.jumps.size() << " jumps, " << sigma.diverged_cells.size() << " diverged cells\n";
  return kSuccess;
}

int cmd_fourier(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  if (!cfg.f) throw ConfigError("fourier needs an 'f' block");
  const Setup s = prepare(cfg);
  const VectorFunction f = make_function(*cfg.f, cfg.system);
  const DistributionFunction sigma = invert_sigma(cfg, s);
  const ParsevalReport pr = parseval_defect(s.geom, sigma, f);
  const std::vector<double> t_grid = cfg.t_grid.empty() ? default_t_grid(cfg.system) : cfg.t_grid;
  const InverseResult inv = inverse_transform(s.geom, pr.transform, t_grid, f);

  const FourierResult& tr = pr.transform;
  const Eigen::Index d0 = s.geom.dim_h0();
  std::string csv = "s,kind";
  for (Eigen::Index i = 0; i < d0; ++i) csv += ",re_fhat_" + std::to_string(i) + ",im_fhat_" + std::to_string(i);
  csv += "\n";
  for (std::size_t i = 0; i < tr.s_eval.size(); ++i) {
    csv += format_real(tr.s_eval[i]) + (i < sigma.jumps.size() ? ",jump" : ",cell");
    csv += matrix_cells(tr.f_hat[i].transpose()) + "\n";
  }
  write_file(out / "fhat.csv", csv);

  std::string rec = "t";
  for (Eigen::Index i = 0; i < cfg.system.n(); ++i) rec += ",re_f_" + std::to_string(i) + ",im_f_" + std::to_string(i);
  rec += "\n";
  for (std::size_t i = 0; i < inv.t.size(); ++i) rec += format_real(inv.t[i]) + matrix_cells(inv.values[i].transpose()) + "\n";
  write_file(out / "reconstruction.csv", rec);

  ordered_json j;
  j["window"] = {cfg.invert.lo, cfg.invert.hi};
  j["support_points"] = tr.s_eval.size();
  j["parseval_lhs"] = tr.parseval_lhs;
  j["parseval_rhs"] = tr.parseval_rhs;
  j["parseval_defect"] = pr.defect;
  j["inverse_error"] = inv.error;
  j["diverged_cells"] = sigma.diverged_cells;
  write_json(out / "parseval.json", j);
  log << "fourier: parseval defect " << format_real(pr.defect) << ", inverse error " << format_real(inv.error) << "\n";
  return kSuccess;
}

int cmd_resolvent_check(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  if (!cfg.f) throw ConfigError("resolvent-check needs an 'f' block");
  const Setup s = prepare(cfg);
  const VectorFunction f = make_function(*cfg.f, cfg.system);
  const ResolventReport r = resolvent_crosscheck(s.geom, s.triplet, s.param, cfg.resolvent_lambda, f);
  ordered_json j;
  j["lambda"] = complex_json(cfg.resolvent_lambda);
  j["difference"] = r.difference;
  j["ode_residual"] = r.ode_residual;
  j["boundary_residual"] = r.boundary_residual;
  write_json(out / "resolvent.json", j);
  log << "resolvent-check: difference " << format_real(r.difference) << "\n";
  return kSuccess;
}

int cmd_report(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log) {
  const ExistenceReport er = existence_report(cfg.system, cfg.tau);
  ordered_json j = report_json(er);
  if (er.exists) {
    const Setup s = prepare(cfg);
    const AdmissibilityReport ar = check_admissible(s.geom, s.triplet, s.param, cfg.admissibility_y);
    const UniversalAdmissibilityReport ur = universal_admissibility(s.geom, s.triplet, cfg.admissibility_y);
    j["admissibility"] = {{"y", ar.y},
                          {"admissible", ar.admissible},
                          {"first", decay_json(ar.first)},
                          {"second", decay_json(ar.second)},
                          {"singular_at", ar.singular_at}};
    j["universal_admissibility"] = {{"universal", ur.universal},
                                    {"limit", decay_json(ur.limit)},
                                    {"diverges", ur.diverges},
                                    {"growth_slopes", ur.growth_slopes}};
  }
  write_json(out / "report.json", j);
  log << "report: exists " << er.exists << ", n_sigma " << er.n_sigma << ", minimal " << er.minimal << "\n";
  return kSuccess;
}

int run_command(const std::string& command, const std::filesystem::path& config,
                const std::optional<std::filesystem::path>& out, std::ostream& log) {
  using Handler = int (*)(const RunConfig&, const std::filesystem::path&, std::ostream&);
  static const std::map<std::string, Handler> handlers{
      {"validate", cmd_validate}, {"sample-m", cmd_sample_m},
      {"invert", cmd_invert},     {"fourier", cmd_fourier},
      {"resolvent-check", cmd_resolvent_check}, {"report", cmd_report}};
  const auto it = handlers.find(command);
  if (it == handlers.end()) {
    log << "unknown command '" << command << "'\n";
    return kUsage;
  }
  try {
    const RunConfig cfg = load_config(config);
    return it->second(cfg, out.value_or(cfg.output_dir), log);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    log << error_name(e.code()) << ": " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace specfun::cli
