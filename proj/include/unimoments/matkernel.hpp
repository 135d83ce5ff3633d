#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "unimoments/types.hpp"

namespace unimoments {

/// (H + H*)/2, the Hermitian part. All spectral routines below symmetrize
/// their input first so callers may pass matrices that are Hermitian only up
/// to roundoff.
template <typename Derived>
Mat<typename Derived::Scalar> symmetrized(const Eigen::MatrixBase<Derived>& h) {
  return 0.5 * (h.derived() + h.derived().adjoint());
}

template <typename Scalar>
struct HermitianEigen {
  RVector values;       // descending
  Mat<Scalar> vectors;  // orthonormal columns, matching order
};

/// Full spectral decomposition of a Hermitian matrix with a deterministic
/// gauge: eigenvalues descending, and the first component of each eigenvector
/// whose modulus exceeds 1e-12 of the largest is made positive real. The
/// gauge keeps frame factorizations reproducible run to run.
template <typename Derived>
HermitianEigen<typename Derived::Scalar> hermitian_eigen(
    const Eigen::MatrixBase<Derived>& h) {
  using Scalar = typename Derived::Scalar;
  Mat<Scalar> hs = symmetrized(h);
  const Index n = hs.rows();
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> solver(hs);
  if (solver.info() != Eigen::Success) {
    fail(ErrorKind::NoConvergence,
         "hermitian eigensolver did not converge on a " + std::to_string(n) +
             "x" + std::to_string(n) + " matrix");
  }
  HermitianEigen<Scalar> out;
  out.values = solver.eigenvalues().reverse();
  out.vectors.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    out.vectors.col(j) = solver.eigenvectors().col(n - 1 - j);
  }
  for (Index j = 0; j < n; ++j) {
    auto col = out.vectors.col(j);
    const double big = col.cwiseAbs().maxCoeff();
    if (big <= 0.0) continue;
    for (Index i = 0; i < n; ++i) {
      const double a = std::abs(col(i));
      if (a > 1e-12 * big) {
        col *= Scalar(Eigen::numext::conj(col(i))) / Scalar(a);
        break;
      }
    }
  }
  return out;
}

/// Smallest eigenvalue of the Hermitian part.
template <typename Derived>
double min_eigenvalue(const Eigen::MatrixBase<Derived>& h) {
  using Scalar = typename Derived::Scalar;
  Mat<Scalar> hs = symmetrized(h);
  if (hs.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> solver(hs, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    fail(ErrorKind::NoConvergence, "hermitian eigensolver did not converge");
  }
  return solver.eigenvalues().minCoeff();
}

/// min eigenvalue >= -tol.eps_psd.
template <typename Derived>
bool is_psd(const Eigen::MatrixBase<Derived>& h, const Tolerance& tol = {}) {
  if (h.rows() == 0) return true;
  return min_eigenvalue(h) >= -tol.eps_psd;
}

template <typename Scalar>
struct RankSupport {
  Index rank = 0;
  Mat<Scalar> projection;  // orthogonal projection onto the range
};

/// Numerical rank of a PSD matrix and the projection onto its support.
/// Eigenvalues below eps_psd in absolute value are treated as zero; a value
/// below -eps_psd is a hard NotPSD error. The rank cut is relative:
/// lambda > eps_rank * lambda_max.
template <typename Derived>
RankSupport<typename Derived::Scalar> rank_and_support(
    const Eigen::MatrixBase<Derived>& h, const Tolerance& tol = {}) {
  using Scalar = typename Derived::Scalar;
  auto eig = hermitian_eigen(h);
  const Index n = eig.values.size();
  RankSupport<Scalar> out;
  if (n == 0) return out;
  if (eig.values(n - 1) < -tol.eps_psd) {
    fail(ErrorKind::NotPSD, "matrix has eigenvalue " +
                                std::to_string(eig.values(n - 1)) +
                                " below -eps_psd");
  }
  const double cut = tol.eps_rank * std::max(eig.values(0), 0.0);
  Index r = 0;
  while (r < n && eig.values(r) > cut) ++r;
  out.rank = r;
  const auto range = eig.vectors.leftCols(r);
  out.projection = range * range.adjoint();
  return out;
}

/// Orthonormal basis of the numerical kernel of a Hermitian matrix, as
/// columns. Uses the same relative cut as rank_and_support, against the
/// largest absolute eigenvalue.
template <typename Derived>
Mat<typename Derived::Scalar> nullspace(const Eigen::MatrixBase<Derived>& h,
                                        const Tolerance& tol = {}) {
  using Scalar = typename Derived::Scalar;
  auto eig = hermitian_eigen(h);
  const Index n = eig.values.size();
  const double scale = n == 0 ? 0.0 : eig.values.cwiseAbs().maxCoeff();
  const double cut = tol.eps_rank * scale;
  std::vector<Index> keep;
  for (Index j = 0; j < n; ++j) {
    if (std::abs(eig.values(j)) <= cut) keep.push_back(j);
  }
  Mat<Scalar> out(n, static_cast<Index>(keep.size()));
  for (Index j = 0; j < out.cols(); ++j) out.col(j) = eig.vectors.col(keep[j]);
  return out;
}

/// Spectral norm of a Hermitian matrix (largest |eigenvalue|).
template <typename Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& h) {
  using Scalar = typename Derived::Scalar;
  Mat<Scalar> hs = symmetrized(h);
  if (hs.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> solver(hs, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    fail(ErrorKind::NoConvergence, "hermitian eigensolver did not converge");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

/// Spectral norm of an arbitrary rectangular matrix.
template <typename Derived>
double spectral_norm(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Mat<Scalar> g = a.derived().adjoint() * a.derived();
  const double top = operator_norm(g);
  return std::sqrt(std::max(top, 0.0));
}

template <typename Scalar>
Mat<Scalar> kron(const Mat<Scalar>& a, const Mat<Scalar>& b) {
  Mat<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Distance between the column spans of a and b, as the spectral norm of the
/// difference of the orthogonal projections. Columns need not be orthonormal.
template <typename Scalar>
double subspace_distance(const Mat<Scalar>& a, const Mat<Scalar>& b) {
  auto project = [](const Mat<Scalar>& m) -> Mat<Scalar> {
    if (m.cols() == 0) {
      return Mat<Scalar>::Zero(m.rows(), m.rows());
    }
    Eigen::HouseholderQR<Mat<Scalar>> qr(m);
    Mat<Scalar> q = qr.householderQ() * Mat<Scalar>::Identity(m.rows(), m.cols());
    return q * q.adjoint();
  };
  if (a.rows() != b.rows()) {
    fail(ErrorKind::DimensionMismatch, "subspace_distance: ambient dimensions differ");
  }
  return operator_norm(project(a) - project(b));
}

}  // namespace unimoments
