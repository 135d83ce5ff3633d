#include "unimoments/correlation.hpp"

#include <cmath>
#include <string>

#include "unimoments/matkernel.hpp"

namespace unimoments {

RMatrix CorrelationMatrix::real_matrix() const {
  if (!is_real_) {
    fail(ErrorKind::NotReal, "matrix has entries with nonzero imaginary part");
  }
  return mat_.real();
}

CorrelationMatrix validate(CMatrix m, const Tolerance& tol) {
  if (!tol.valid()) {
    fail(ErrorKind::PreconditionViolated,
         "tolerances must be positive with eps_rank >= eps_psd");
  }
  if (m.rows() != m.cols() || m.rows() == 0) {
    fail(ErrorKind::DimensionMismatch, "expected a nonempty square matrix, got " +
                                           std::to_string(m.rows()) + "x" +
                                           std::to_string(m.cols()));
  }
  const Index n = m.rows();
  double worst = 0.0;
  Index wi = 0, wj = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      const double dev = std::abs(m(i, j) - std::conj(m(j, i)));
      if (dev > worst) {
        worst = dev;
        wi = i;
        wj = j;
      }
    }
  }
  if (worst > tol.eps_eq) {
    fail(ErrorKind::NotHermitian,
         "entries (" + std::to_string(wi) + "," + std::to_string(wj) +
             ") and their transpose differ by " + std::to_string(worst));
  }
  m = symmetrized(m);
  for (Index i = 0; i < n; ++i) {
    const double dev = std::abs(m(i, i) - cxd(1.0, 0.0));
    if (dev > tol.eps_eq) {
      fail(ErrorKind::NotUnitDiagonal,
           "diagonal entry " + std::to_string(i) + " is off by " +
               std::to_string(dev));
    }
  }
  const double lambda_min = min_eigenvalue(m);
  if (lambda_min < -tol.eps_psd) {
    fail(ErrorKind::NotPSD,
         "minimum eigenvalue " + std::to_string(lambda_min) + " < -eps_psd");
  }
  bool real = true;
  for (Index i = 0; i < n && real; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (std::abs(m(i, j).imag()) > tol.eps_eq) {
        real = false;
        break;
      }
    }
  }
  if (real) m = m.real().cast<cxd>();
  return CorrelationMatrix(std::move(m), real);
}

RMatrix Frame::real_vectors() const {
  if (!real) {
    fail(ErrorKind::NotReal, "frame has complex vectors");
  }
  return vectors.real();
}

namespace {

template <typename Scalar>
Mat<Scalar> frame_from_eigen(const HermitianEigen<Scalar>& eig,
                             const Tolerance& tol) {
  const Index n = eig.values.size();
  if (n > 0 && eig.values(n - 1) < -tol.eps_psd) {
    fail(ErrorKind::NotPSD, "matrix has eigenvalue " +
                                std::to_string(eig.values(n - 1)) +
                                " below -eps_psd");
  }
  const double cut = n == 0 ? 0.0 : tol.eps_rank * std::max(eig.values(0), 0.0);
  Index r = 0;
  while (r < n && eig.values(r) > cut) ++r;
  Mat<Scalar> f(r, n);
  for (Index i = 0; i < r; ++i) {
    f.row(i) = std::sqrt(eig.values(i)) * eig.vectors.col(i).adjoint();
  }
  return f;
}

}  // namespace

Frame frame_factor(const CorrelationMatrix& x, const Tolerance& tol) {
  Frame out;
  if (x.is_real()) {
    RMatrix xr = x.real_matrix();
    out.vectors = frame_from_eigen(hermitian_eigen(xr), tol).cast<cxd>();
    out.real = true;
  } else {
    out.vectors = frame_from_eigen(hermitian_eigen(x.matrix()), tol);
    out.real = false;
  }
  return out;
}

CMatrix gram(const Frame& f) { return f.vectors.adjoint() * f.vectors; }

CorrelationMatrix schur_product(const CorrelationMatrix& a,
                                const CorrelationMatrix& b,
                                const Tolerance& tol) {
  if (a.n() != b.n()) {
    fail(ErrorKind::DimensionMismatch, "schur_product: sizes differ");
  }
  return validate(a.matrix().cwiseProduct(b.matrix()), tol);
}

CorrelationMatrix conjugate_diag(const CorrelationMatrix& x,
                                 const CVector& phases, const Tolerance& tol) {
  if (phases.size() != x.n()) {
    fail(ErrorKind::LengthMismatch, "conjugate_diag: phase vector length " +
                                        std::to_string(phases.size()) +
                                        " does not match n = " +
                                        std::to_string(x.n()));
  }
  for (Index i = 0; i < phases.size(); ++i) {
    if (std::abs(std::abs(phases(i)) - 1.0) > tol.eps_eq) {
      fail(ErrorKind::NotUnimodular,
           "phase " + std::to_string(i) + " has modulus " +
               std::to_string(std::abs(phases(i))));
    }
  }
  CMatrix out = phases.conjugate().asDiagonal() * x.matrix() *
                CMatrix(phases.asDiagonal());
  return validate(std::move(out), tol);
}

CorrelationMatrix conjugate_perm(const CorrelationMatrix& x,
                                 const std::vector<Index>& sigma,
                                 const Tolerance& tol) {
  const Index n = x.n();
  if (static_cast<Index>(sigma.size()) != n) {
    fail(ErrorKind::NotPermutation, "conjugate_perm: sigma has length " +
                                        std::to_string(sigma.size()) +
                                        ", expected " + std::to_string(n));
  }
  std::vector<bool> seen(static_cast<size_t>(n), false);
  for (Index v : sigma) {
    if (v < 0 || v >= n || seen[static_cast<size_t>(v)]) {
      fail(ErrorKind::NotPermutation, "sigma is not a permutation of 0.." +
                                          std::to_string(n - 1));
    }
    seen[static_cast<size_t>(v)] = true;
  }
  CMatrix out(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      out(sigma[static_cast<size_t>(i)], sigma[static_cast<size_t>(j)]) =
          x.matrix()(i, j);
    }
  }
  return validate(std::move(out), tol);
}

CorrelationMatrix convex_combine(
    const std::vector<std::pair<double, CorrelationMatrix>>& terms,
    const Tolerance& tol) {
  if (terms.empty()) {
    fail(ErrorKind::DimensionMismatch, "convex_combine: no terms");
  }
  const Index n = terms.front().second.n();
  double total = 0.0;
  for (const auto& [w, m] : terms) {
    if (m.n() != n) {
      fail(ErrorKind::DimensionMismatch, "convex_combine: sizes differ");
    }
    if (w < 0.0) {
      fail(ErrorKind::WeightsNotNormalized,
           "negative weight " + std::to_string(w));
    }
    total += w;
  }
  if (std::abs(total - 1.0) > tol.eps_eq) {
    fail(ErrorKind::WeightsNotNormalized,
         "weights sum to " + std::to_string(total));
  }
  CMatrix acc = CMatrix::Zero(n, n);
  for (const auto& [w, m] : terms) acc += w * m.matrix();
  return validate(std::move(acc), tol);
}

RealifyResult realify_row(const CorrelationMatrix& x, Index k,
                          const Tolerance& tol) {
  const Index n = x.n();
  if (k < 0 || k >= n) {
    fail(ErrorKind::PreconditionViolated,
         "realify_row: row " + std::to_string(k) + " out of range");
  }
  CVector phases(n);
  for (Index j = 0; j < n; ++j) {
    const cxd v = x.matrix()(k, j);
    const double a = std::abs(v);
    phases(j) = a > tol.eps_eq ? std::conj(v) / a : cxd(1.0, 0.0);
  }
  RealifyResult out{phases, conjugate_diag(x, phases, tol)};
  return out;
}

CMatrix skew_part(const CorrelationMatrix& x) {
  return 0.5 * (x.matrix() - x.matrix().conjugate());
}

CorrelationMatrix real_part(const CorrelationMatrix& x, const Tolerance& tol) {
  CMatrix re = 0.5 * (x.matrix() + x.matrix().conjugate());
  return validate(std::move(re), tol);
}

}  // namespace unimoments
