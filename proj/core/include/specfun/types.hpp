#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace specfun {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx I_unit{0.0, 1.0};

enum class ErrorCode {
  InvalidDimensions,
  InvalidInterval,
  BNotHermitian,
  DeltaNotPSD,
  OutOfInterval,
  StepSizeUnderflow,
  QuadratureFailure,
  EtaNotNeutral,
  TauNotAdmissible,
  NotTauDefinite,
  SingularEndpoint,
  SingularBVP,
  SingularTransform,
  ShapeMismatch,
  NearRealAxis,
  ExtrapolationDiverged,
};

const char* error_name(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (notably the CLI) can map it to an exit status or a report entry.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace specfun
