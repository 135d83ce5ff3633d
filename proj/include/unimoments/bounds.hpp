#pragma once

#include <optional>
#include <string>
#include <vector>

#include "unimoments/correlation.hpp"
#include "unimoments/types.hpp"

namespace unimoments {

/// Average of X over all 3-subsets T: the matrix equal to X on T and to the
/// identity elsewhere, averaged over T. Equals tX + (1-t)I exactly with
/// t = 6/(n^2 - n), and every summand is commuting-realizable, so the
/// average certifies commuting realizability at scale t.
struct SigmaAverage {
  unsigned long long group_size = 0;  // permutations fixing the construction
  double identity_residual = 0.0;     // max |averaged - (tX + (1-t)I)|
  CorrelationMatrix averaged;
};

SigmaAverage sigma_average(const CorrelationMatrix& x,
                           const Tolerance& tol = {});

enum class BoundKind { averaging, eigen_shift, skew_reduction, combined };

const char* bound_kind_name(BoundKind k);

/// One row's attempt at the skew-reduction route: conjugate row k real,
/// split off the skew part S, and when S is supported on at most 3 indices
/// the scale d/(d+1) with d = 1/||S|| is certified.
struct SkewCandidate {
  Index row = 0;
  CVector phases;
  bool zero_skew = false;  // S vanished; the conjugated matrix is real
  double skew_norm = 0.0;  // ||S||, meaningful only when !zero_skew
  double d = 0.0;          // 1/||S||, meaningful only when !zero_skew
  std::vector<Index> support;
  bool usable = false;
  double bound = 0.0;  // d/(d+1), or 1 when zero_skew
};

/// A certified lower bound on the realizability scales of X: sX + (1-s)I is
/// commuting-realizable for s <= bound_c and realizable by unitaries in a
/// finite von Neumann algebra for s <= bound_a. A missing bound_c means the
/// route certifies only the weaker claim.
struct BoundCertificate {
  BoundKind kind = BoundKind::averaging;
  Index n = 0;
  std::optional<double> bound_c;
  std::optional<double> bound_a;

  // averaging evidence
  std::optional<SigmaAverage> average;

  // eigen shift evidence: X = (1 - lambda0) Y + lambda0 I
  std::optional<double> lambda0;
  std::optional<CorrelationMatrix> shifted;

  // skew reduction evidence, one candidate per row
  std::vector<SkewCandidate> candidates;
  std::optional<int> winner;

  // combined evidence
  std::vector<BoundCertificate> parts;
  std::optional<int> winner_c;
  std::optional<int> winner_a;
};

/// bound_c = bound_a = 6/(n^2 - n), from the 3-subset average.
BoundCertificate averaging_bound(const CorrelationMatrix& x,
                                 const Tolerance& tol = {});

/// Shifts the smallest eigenvalue to zero first: with
/// Y = (X - lambda0 I)/(1 - lambda0), certifies
/// min(6/((n^2 - n)(1 - lambda0)), 1) for both scales.
BoundCertificate eigen_shift_bound(const CorrelationMatrix& x,
                                   const Tolerance& tol = {});

/// Tries every row k: conjugate the row real, split the skew part, and pick
/// the best usable candidate (ties to the smallest k). Certifies bound_a
/// always, bound_c only for n <= 5 where real correlation matrices are
/// commuting-realizable. Throws SupportTooLarge when no row gives a skew
/// part supported on at most 3 indices.
BoundCertificate skew_reduction_bound(const CorrelationMatrix& x,
                                      const Tolerance& tol = {});

/// Best of the three routes, with per-scale winners recorded.
BoundCertificate best_lower_bound(const CorrelationMatrix& x,
                                  const Tolerance& tol = {});

struct CertificateCheck {
  bool ok = false;
  double max_error = 0.0;
  std::vector<std::string> notes;
};

/// Independent re-derivation of everything a certificate claims: evidence
/// matrices are recomputed from X, convex identities are checked entrywise,
/// and every commuting-realizability claim is reduced to constructive
/// pieces (3-index blocks decomposed into rank-one matrices, real parts
/// realized by anticommuting symmetries). cap bounds the constructive
/// realization dimension 2^rank.
CertificateCheck verify_certificate(const BoundCertificate& cert,
                                    const CorrelationMatrix& x,
                                    const Tolerance& tol = {}, Index cap = 8);

}  // namespace unimoments
