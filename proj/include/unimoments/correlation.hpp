#pragma once

#include <utility>
#include <vector>

#include "unimoments/types.hpp"

namespace unimoments {

/// Hermitian PSD matrix with unit diagonal. Instances exist only via
/// validate(), so holding one certifies the invariants at the stored
/// tolerance.
class CorrelationMatrix {
 public:
  Index n() const { return mat_.rows(); }
  bool is_real() const { return is_real_; }
  const CMatrix& matrix() const { return mat_; }

  /// The entries as a real matrix. Requires is_real().
  RMatrix real_matrix() const;

 private:
  CorrelationMatrix(CMatrix m, bool real)
      : mat_(std::move(m)), is_real_(real) {}

  friend CorrelationMatrix validate(CMatrix m, const Tolerance& tol);

  CMatrix mat_;
  bool is_real_ = false;
};

/// Checks Hermitian (entrywise, within eps_eq), unit diagonal (within
/// eps_eq) and PSD (min eigenvalue >= -eps_psd), then symmetrizes exactly.
/// The matrix is flagged real when every imaginary part is within eps_eq of
/// zero; real flagged matrices have their imaginary parts zeroed.
CorrelationMatrix validate(CMatrix m, const Tolerance& tol = {});

/// Row-vector frame F with X = F*F: column j is the j-th frame vector, a
/// unit vector in C^r (or R^r when real). r = rank of X.
struct Frame {
  CMatrix vectors;  // r x n
  bool real = false;

  Index r() const { return vectors.rows(); }
  Index n() const { return vectors.cols(); }
  RMatrix real_vectors() const;
};

/// Factor X = F*F through the spectral decomposition, keeping only
/// eigenvalues above the relative rank cut. Real X gets a real frame via the
/// real symmetric solver.
Frame frame_factor(const CorrelationMatrix& x, const Tolerance& tol = {});

/// F*F for a frame; the Gram matrix it reconstructs.
CMatrix gram(const Frame& f);

/// Entrywise product. Closed on correlation matrices.
CorrelationMatrix schur_product(const CorrelationMatrix& a,
                                const CorrelationMatrix& b,
                                const Tolerance& tol = {});

/// conj(d_i) x_ij d_j for unimodular d. Preserves the spectrum.
CorrelationMatrix conjugate_diag(const CorrelationMatrix& x,
                                 const CVector& phases,
                                 const Tolerance& tol = {});

/// Simultaneous row/column permutation: entry (sigma(i), sigma(j)) of the
/// output equals entry (i, j) of x.
CorrelationMatrix conjugate_perm(const CorrelationMatrix& x,
                                 const std::vector<Index>& sigma,
                                 const Tolerance& tol = {});

/// Convex combination of same-size correlation matrices. Weights must be
/// nonnegative and sum to 1 within eps_eq.
CorrelationMatrix convex_combine(
    const std::vector<std::pair<double, CorrelationMatrix>>& terms,
    const Tolerance& tol = {});

struct RealifyResult {
  CVector phases;
  CorrelationMatrix conjugated;
};

/// Diagonal conjugation making row k (hence column k) real: phase j is
/// conj(x_kj)/|x_kj| when |x_kj| > eps_eq, and 1 otherwise.
RealifyResult realify_row(const CorrelationMatrix& x, Index k,
                          const Tolerance& tol = {});

/// (X - conj(X))/2, i times the imaginary part. Hermitian with zero
/// diagonal; zero iff X is real.
CMatrix skew_part(const CorrelationMatrix& x);

/// (X + conj(X))/2 as a correlation matrix; the entrywise real part, which
/// is again PSD with unit diagonal.
CorrelationMatrix real_part(const CorrelationMatrix& x,
                            const Tolerance& tol = {});

}  // namespace unimoments
