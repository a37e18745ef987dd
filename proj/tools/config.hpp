#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "specfun/spectral.hpp"

namespace specfun::cli {

// Malformed or inconsistent configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Test function f: [a, b] → C^n described in the config.
struct FunctionSpec {
  std::string kind;  // constant | polynomial | tabulated | solution
  std::vector<Vector> vectors;
  std::vector<double> nodes;
  double spectral_point = 0.0;
};

struct InvertSpec {
  double lo = -20.0;
  double hi = 20.0;
  double step = 0.25;
  StieltjesOptions options;
};

struct RunConfig {
  explicit RunConfig(SymmetricSystem sys) : system(std::move(sys)) {}

  SymmetricSystem system;
  Subspace tau;
  std::optional<BoundaryParameter> parameter;
  std::string parameter_label;
  std::vector<cplx> lambdas;
  InvertSpec invert;
  std::optional<FunctionSpec> f;
  std::vector<double> t_grid;
  cplx resolvent_lambda{0.0, 1.0};
  std::vector<double> admissibility_y = default_y_grid();
  double validation_tol = 1e-12;
  double neutral_tol = 1e-10;
  double pair_tol = 1e-10;
  std::filesystem::path output_dir = ".";
};

// Parses and shape-checks a config file; throws ConfigError.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text);

// Parameter resolved against the geometry (presets need dim ℋ̇).
BoundaryParameter resolve_parameter(const RunConfig& cfg, const BoundaryGeometry& geom);

VectorFunction make_function(const FunctionSpec& spec, const SymmetricSystem& sys);

}  // namespace specfun::cli
