#pragma once

#include <optional>
#include <vector>

#include "unimoments/correlation.hpp"
#include "unimoments/types.hpp"

namespace unimoments {

/// Basis of the space of admissible perturbation directions at X: Hermitian
/// Y with zero diagonal, supported on the range of X, such that X + tY stays
/// in the correlation body for small |t|. X is extreme iff the space is
/// zero. In real mode Y ranges over real symmetric matrices only.
struct PerturbationSpace {
  std::vector<CMatrix> basis;
  bool real_mode = false;

  Index dimension() const { return static_cast<Index>(basis.size()); }
};

PerturbationSpace perturbation_space(const CorrelationMatrix& x,
                                     bool real_mode = false,
                                     const Tolerance& tol = {});

struct ExtremalityReport {
  bool is_extreme = false;
  Index rank = 0;
  /// rank^2 <= n in complex mode, rank(rank+1)/2 <= n in real mode; a
  /// necessary condition for extremality.
  bool rank_bound_satisfied = false;
  Index perturbation_dimension = 0;
  std::optional<CMatrix> witness;  // a nonzero direction when not extreme
};

ExtremalityReport is_extreme(const CorrelationMatrix& x, bool real_mode = false,
                             const Tolerance& tol = {});

struct StepRange {
  double t_minus = 0.0;  // < 0
  double t_plus = 0.0;   // > 0
};

/// Largest interval [t_minus, t_plus] with X + tY still PSD. Y must be a
/// nonzero Hermitian zero-diagonal direction supported on the range of X;
/// at both endpoints the rank of X + tY drops strictly.
StepRange max_step(const CorrelationMatrix& x, const CMatrix& y,
                   const Tolerance& tol = {});

struct ExtremeDecomposition {
  struct Term {
    double weight;
    CorrelationMatrix matrix;
  };
  std::vector<Term> terms;
};

/// Writes X as a convex combination of extreme correlation matrices by
/// recursively stepping to both endpoints of a perturbation direction. Each
/// endpoint has strictly smaller rank, so the recursion terminates with at
/// most 2^rank leaves.
ExtremeDecomposition decompose_extreme(const CorrelationMatrix& x,
                                       bool real_mode = false,
                                       const Tolerance& tol = {});

/// The rank-one correlation matrix with entries conj(z_i) z_j for a
/// unimodular vector z.
CorrelationMatrix rank_one_matrix(const CVector& phases,
                                  const Tolerance& tol = {});

}  // namespace unimoments
