#include "unimoments/extremality.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <utility>

#include "unimoments/matkernel.hpp"

namespace unimoments {

namespace {

// Hermitian basis of r x r: diagonal units, then symmetric pairs, then (in
// complex mode) antisymmetric imaginary pairs.
std::vector<CMatrix> hermitian_basis(Index r, bool real_mode) {
  std::vector<CMatrix> basis;
  for (Index i = 0; i < r; ++i) {
    CMatrix b = CMatrix::Zero(r, r);
    b(i, i) = 1.0;
    basis.push_back(std::move(b));
  }
  for (Index i = 0; i < r; ++i) {
    for (Index j = i + 1; j < r; ++j) {
      CMatrix b = CMatrix::Zero(r, r);
      b(i, j) = 1.0;
      b(j, i) = 1.0;
      basis.push_back(std::move(b));
    }
  }
  if (!real_mode) {
    for (Index i = 0; i < r; ++i) {
      for (Index j = i + 1; j < r; ++j) {
        CMatrix b = CMatrix::Zero(r, r);
        b(i, j) = cxd(0.0, 1.0);
        b(j, i) = cxd(0.0, -1.0);
        basis.push_back(std::move(b));
      }
    }
  }
  return basis;
}

// Solves <Z f_j, f_j> = 0 over Hermitian Z and maps each solution to the
// direction Y = F* Z F, which is Hermitian, zero on the diagonal and
// supported on the range of X.
PerturbationSpace space_from_frame(const Frame& f, bool real_mode,
                                   const Tolerance& tol) {
  const Index r = f.r();
  const Index n = f.n();
  const auto basis = hermitian_basis(r, real_mode);
  const Index d = static_cast<Index>(basis.size());
  RMatrix a(n, d);
  for (Index j = 0; j < n; ++j) {
    const CVector fj = f.vectors.col(j);
    for (Index k = 0; k < d; ++k) {
      a(j, k) = (fj.adjoint() * basis[static_cast<size_t>(k)] * fj)(0, 0).real();
    }
  }
  Eigen::JacobiSVD<RMatrix> svd(a, Eigen::ComputeFullV);
  const auto& sing = svd.singularValues();
  const double top = sing.size() > 0 ? sing(0) : 0.0;
  const double cut = tol.eps_rank * top;
  Index rank = 0;
  while (rank < sing.size() && sing(rank) > cut) ++rank;

  PerturbationSpace out;
  out.real_mode = real_mode;
  for (Index k = rank; k < d; ++k) {
    const RVector c = svd.matrixV().col(k);
    CMatrix z = CMatrix::Zero(r, r);
    for (Index m = 0; m < d; ++m) z += c(m) * basis[static_cast<size_t>(m)];
    CMatrix y = symmetrized(f.vectors.adjoint() * z * f.vectors);
    if (real_mode) y = y.real().cast<cxd>();
    out.basis.push_back(std::move(y));
  }
  return out;
}

}  // namespace

PerturbationSpace perturbation_space(const CorrelationMatrix& x, bool real_mode,
                                     const Tolerance& tol) {
  if (real_mode && !x.is_real()) {
    fail(ErrorKind::NotReal, "real mode requires a real matrix");
  }
  return space_from_frame(frame_factor(x, tol), real_mode, tol);
}

ExtremalityReport is_extreme(const CorrelationMatrix& x, bool real_mode,
                             const Tolerance& tol) {
  if (real_mode && !x.is_real()) {
    fail(ErrorKind::NotReal, "real mode requires a real matrix");
  }
  const Frame f = frame_factor(x, tol);
  const auto space = space_from_frame(f, real_mode, tol);
  ExtremalityReport rep;
  rep.rank = f.r();
  rep.perturbation_dimension = space.dimension();
  rep.is_extreme = space.dimension() == 0;
  const Index n = x.n();
  rep.rank_bound_satisfied = real_mode ? rep.rank * (rep.rank + 1) / 2 <= n
                                       : rep.rank * rep.rank <= n;
  if (!rep.is_extreme) {
    size_t best = 0;
    double best_norm = -1.0;
    for (size_t k = 0; k < space.basis.size(); ++k) {
      const double nk = space.basis[k].norm();
      if (nk > best_norm) {
        best_norm = nk;
        best = k;
      }
    }
    rep.witness = space.basis[best];
  }
  return rep;
}

StepRange max_step(const CorrelationMatrix& x, const CMatrix& y,
                   const Tolerance& tol) {
  const Index n = x.n();
  if (y.rows() != n || y.cols() != n) {
    fail(ErrorKind::DimensionMismatch, "max_step: direction size mismatch");
  }
  const double ynorm = y.norm();
  if (ynorm <= tol.eps_eq) {
    fail(ErrorKind::DegenerateDirection, "max_step: direction is zero");
  }
  if ((y - CMatrix(y.adjoint())).cwiseAbs().maxCoeff() > tol.eps_eq * std::max(1.0, ynorm)) {
    fail(ErrorKind::PreconditionViolated, "max_step: direction is not Hermitian");
  }
  if (y.diagonal().cwiseAbs().maxCoeff() > tol.eps_eq * std::max(1.0, ynorm)) {
    fail(ErrorKind::PreconditionViolated,
         "max_step: direction has nonzero diagonal");
  }

  const auto eig = hermitian_eigen(x.matrix());
  const double cut = tol.eps_rank * std::max(eig.values(0), 0.0);
  Index r = 0;
  while (r < n && eig.values(r) > cut) ++r;
  const CMatrix g = eig.vectors.leftCols(r);
  const CMatrix p = g * g.adjoint();
  if ((y - CMatrix(p * y * p)).norm() > 1e-7 * ynorm) {
    fail(ErrorKind::PreconditionViolated,
         "max_step: direction is not supported on the range of X");
  }

  // On the support, X + tY >= 0 iff I + t M >= 0 for
  // M = Xr^{-1/2} Yr Xr^{-1/2}; Xr is diagonal in the eigenbasis.
  CMatrix m = g.adjoint() * y * g;
  for (Index i = 0; i < r; ++i) {
    for (Index j = 0; j < r; ++j) {
      m(i, j) /= std::sqrt(eig.values(i) * eig.values(j));
    }
  }
  const auto meig = hermitian_eigen(m);
  const double mu_max = meig.values(0);
  const double mu_min = meig.values(r - 1);
  if (mu_min >= -1e-14 || mu_max <= 1e-14) {
    fail(ErrorKind::DegenerateDirection,
         "max_step: direction does not cut the spectrum on both sides");
  }
  StepRange s;
  s.t_plus = -1.0 / mu_min;
  s.t_minus = -1.0 / mu_max;
  return s;
}

namespace {

void peel(const CorrelationMatrix& x, double weight, int depth, bool real_mode,
          const Tolerance& tol, ExtremeDecomposition& out) {
  if (depth > 64) {
    fail(ErrorKind::RecursionOverflow,
         "decompose_extreme: recursion exceeded depth 64");
  }
  const Frame f = frame_factor(x, tol);
  const auto space = space_from_frame(f, real_mode, tol);
  if (space.dimension() == 0) {
    out.terms.push_back({weight, x});
    return;
  }
  size_t best = 0;
  double best_norm = -1.0;
  for (size_t k = 0; k < space.basis.size(); ++k) {
    const double nk = space.basis[k].norm();
    if (nk > best_norm) {
      best_norm = nk;
      best = k;
    }
  }
  const CMatrix& y = space.basis[best];
  const StepRange s = max_step(x, y, tol);
  const Index r0 = f.r();

  // Both endpoints lose rank; if the default cut misses the drop (clustered
  // spectrum at the boundary), widen the rank tolerance tenfold once.
  auto endpoint = [&](double t) -> std::pair<CorrelationMatrix, Tolerance> {
    CMatrix e = x.matrix() + t * y;
    CorrelationMatrix m = validate(std::move(e), tol);
    if (rank_and_support(m.matrix(), tol).rank < r0) return {std::move(m), tol};
    Tolerance wide = tol;
    wide.eps_rank *= 10.0;
    if (rank_and_support(m.matrix(), wide).rank < r0) {
      return {std::move(m), wide};
    }
    fail(ErrorKind::Internal,
         "decompose_extreme: endpoint rank did not drop at t = " +
             std::to_string(t));
  };

  auto [left, tol_left] = endpoint(s.t_minus);
  auto [right, tol_right] = endpoint(s.t_plus);
  const double span = s.t_plus - s.t_minus;
  peel(left, weight * (s.t_plus / span), depth + 1, real_mode, tol_left, out);
  peel(right, weight * (-s.t_minus / span), depth + 1, real_mode, tol_right,
       out);
}

}  // namespace

ExtremeDecomposition decompose_extreme(const CorrelationMatrix& x,
                                       bool real_mode, const Tolerance& tol) {
  if (real_mode && !x.is_real()) {
    fail(ErrorKind::NotReal, "real mode requires a real matrix");
  }
  ExtremeDecomposition out;
  peel(x, 1.0, 0, real_mode, tol, out);
  return out;
}

CorrelationMatrix rank_one_matrix(const CVector& phases, const Tolerance& tol) {
  const Index n = phases.size();
  if (n == 0) {
    fail(ErrorKind::DimensionMismatch, "rank_one_matrix: empty phase vector");
  }
  for (Index i = 0; i < n; ++i) {
    if (std::abs(std::abs(phases(i)) - 1.0) > tol.eps_eq) {
      fail(ErrorKind::NotUnimodular,
           "entry " + std::to_string(i) + " has modulus " +
               std::to_string(std::abs(phases(i))));
    }
  }
  CMatrix out = phases.conjugate() * phases.transpose();
  return validate(std::move(out), tol);
}

}  // namespace unimoments
