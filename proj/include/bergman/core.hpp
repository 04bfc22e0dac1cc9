#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bergman {

using cplx = std::complex<double>;
using Point = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;

enum class ErrorCode {
  DimensionMismatch,
  OutsideDomain,
  UnsupportedDomain,
  InvalidArgument,
  TruncationNotConverged,
  MapNotInvertibleAtPoint,
  IllConditionedGram,
  KernelZeroAtPair,
  KernelNotPolarizable,
  StencilExitsDomain,
  SingularMetric,
  ZeroDirection,
  QuadraticFormOutOfRange,
  JetFailure,
  ConfigError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::UnsupportedDomain: return "UnsupportedDomain";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TruncationNotConverged: return "TruncationNotConverged";
    case ErrorCode::MapNotInvertibleAtPoint: return "MapNotInvertibleAtPoint";
    case ErrorCode::IllConditionedGram: return "IllConditionedGram";
    case ErrorCode::KernelZeroAtPair: return "KernelZeroAtPair";
    case ErrorCode::KernelNotPolarizable: return "KernelNotPolarizable";
    case ErrorCode::StencilExitsDomain: return "StencilExitsDomain";
    case ErrorCode::SingularMetric: return "SingularMetric";
    case ErrorCode::ZeroDirection: return "ZeroDirection";
    case ErrorCode::QuadraticFormOutOfRange: return "QuadraticFormOutOfRange";
    case ErrorCode::JetFailure: return "JetFailure";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the ErrorCode values so
/// callers (the CLI, the verification suites) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline double norm2(std::span<const cplx> z) {
  double s = 0.0;
  for (const auto& v : z) s += std::norm(v);
  return s;
}

inline Point conj(std::span<const cplx> z) {
  Point out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = std::conj(z[i]);
  return out;
}

inline void require_dim(std::span<const cplx> z, int dim, const char* what) {
  if (static_cast<int>(z.size()) != dim) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": expected dimension " + std::to_string(dim) + ", got " +
                    std::to_string(z.size()));
  }
}

}  // namespace bergman
