#pragma once

#include <Eigen/Core>

#include <complex>
#include <stdexcept>
#include <string>

namespace unimoments {

using cxd = std::complex<double>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using CMatrix = Mat<cxd>;
using RMatrix = Mat<double>;
using CVector = Vec<cxd>;
using RVector = Vec<double>;
using Index = Eigen::Index;

/// Numerical thresholds shared across the library.
///
/// eps_psd and eps_eq are absolute; eps_rank is relative: an eigenvalue
/// counts as nonzero when it exceeds eps_rank * ||H||.
struct Tolerance {
  double eps_psd = 1e-9;
  double eps_rank = 1e-7;
  double eps_eq = 1e-9;

  bool valid() const {
    return eps_psd > 0.0 && eps_rank > 0.0 && eps_eq > 0.0 &&
           eps_rank >= eps_psd;
  }
};

enum class ErrorKind {
  // validation failures (exit code 2)
  NotHermitian,
  NotUnitDiagonal,
  NotPSD,
  // domain precondition failures (exit code 3)
  DimensionMismatch,
  LengthMismatch,
  NotUnimodular,
  NotPermutation,
  WeightsNotNormalized,
  DegenerateDirection,
  NotReal,
  ZeroVector,
  WrongInput,
  SupportTooLarge,
  DimensionTooSmall,
  PreconditionViolated,
  // resource caps (exit code 4)
  DimensionCap,
  SizeOverflow,
  // I/O and parsing (exit code 1)
  IoError,
  ParseError,
  // internal (exit code 5)
  NoConvergence,
  RecursionOverflow,
  Internal,
};

constexpr int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotHermitian:
    case ErrorKind::NotUnitDiagonal:
    case ErrorKind::NotPSD:
      return 2;
    case ErrorKind::DimensionMismatch:
    case ErrorKind::LengthMismatch:
    case ErrorKind::NotUnimodular:
    case ErrorKind::NotPermutation:
    case ErrorKind::WeightsNotNormalized:
    case ErrorKind::DegenerateDirection:
    case ErrorKind::NotReal:
    case ErrorKind::ZeroVector:
    case ErrorKind::WrongInput:
    case ErrorKind::SupportTooLarge:
    case ErrorKind::DimensionTooSmall:
    case ErrorKind::PreconditionViolated:
      return 3;
    case ErrorKind::DimensionCap:
    case ErrorKind::SizeOverflow:
      return 4;
    case ErrorKind::IoError:
    case ErrorKind::ParseError:
      return 1;
    case ErrorKind::NoConvergence:
    case ErrorKind::RecursionOverflow:
    case ErrorKind::Internal:
      return 5;
  }
  return 5;
}

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace unimoments
