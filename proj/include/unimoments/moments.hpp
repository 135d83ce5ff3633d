#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "unimoments/correlation.hpp"
#include "unimoments/types.hpp"

namespace unimoments {

/// n unitaries of a common size k. The moment matrix of the tuple is the
/// Gram matrix of the V_i under the normalized trace.
struct UnitaryTuple {
  Index k = 0;
  std::vector<CMatrix> unitaries;

  Index n() const { return static_cast<Index>(unitaries.size()); }
};

/// max_i ||V_i* V_i - I|| in operator norm; zero for exact unitaries.
double tuple_unitarity_error(const UnitaryTuple& t);

enum class Provenance {
  from_tuple,
  haar,
  clifford,
  tensor,
  block_convex,
};

struct MomentMatrix {
  CorrelationMatrix matrix;
  Provenance provenance;
};

/// X_ij = tr_k(V_i* V_j) under the normalized trace. The result passes
/// validate; drift in the inputs surfaces as a validation failure.
MomentMatrix moment_matrix(const UnitaryTuple& t, const Tolerance& tol = {},
                           Provenance provenance = Provenance::from_tuple);

/// Haar-distributed k x k unitary, a pure function of (k, seed).
CMatrix haar_unitary(Index k, std::uint64_t seed);

/// n independent Haar unitaries of size k, derived deterministically from
/// one seed.
UnitaryTuple haar_tuple(Index n, Index k, std::uint64_t seed);

/// Componentwise Kronecker product; realizes the Schur product of the two
/// moment matrices.
UnitaryTuple tensor_realize(const UnitaryTuple& a, const UnitaryTuple& b);

/// Reduced fraction with positive denominator.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d);

  bool operator==(const Rational& o) const {
    return num == o.num && den == o.den;
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Block-diagonal tuple whose moment matrix is the convex combination of the
/// inputs' moment matrices with the given rational weights. Weights must be
/// positive and sum to exactly 1; the block dimension is capped.
UnitaryTuple block_convex_realize(
    const std::vector<std::pair<Rational, UnitaryTuple>>& terms,
    Index size_cap = 4096);

/// ||sum_i c_i V_i|| in operator norm. A vector in the kernel of the moment
/// matrix forces this to vanish.
double kernel_relation_residual(const UnitaryTuple& t, const CVector& c);

struct KernelRelation {
  CVector vector;
  double matrix_residual = 0.0;  // ||X v||
  std::string relation;
};

struct SignCase {
  int s1 = 1;
  int s3 = 1;
  cxd zeta6_over_zeta2;
  double abs_zeta6 = 0.0;
};

/// Case analysis showing the distinguished 6 x 6 matrix admits no commuting
/// unitary realization: its kernel relations force, for scalars, zeta_1 and
/// zeta_3 to be +-i times zeta_2, and then |zeta_6| is bounded away from 1
/// in all four sign cases.
struct RefutationCertificate {
  std::vector<KernelRelation> relations;
  std::array<SignCase, 4> cases;
  double min_deviation = 0.0;  // min over cases of ||zeta_6| - 1|
  bool refuted = false;
};

/// Only accepts the distinguished 6 x 6 matrix (within eps_eq); anything
/// else is WrongInput.
RefutationCertificate refute_commuting_f6(const CorrelationMatrix& x,
                                          const Tolerance& tol = {});

/// Rank/extremality certificate that a matrix lies outside the set of
/// moment matrices of unitaries in finite von Neumann algebras: a rank-2
/// member of that set would be commuting-realizable, hence an average of
/// rank-one correlation matrices, and an extreme point that is such an
/// average must itself be rank one.
struct GnExclusionReport {
  Index rank = 0;
  bool extreme = false;
  bool rank_one = false;
  bool certified_outside = false;
  std::string reason;
};

GnExclusionReport gn_exclusion_rank2(const CorrelationMatrix& x,
                                     const Tolerance& tol = {});

}  // namespace unimoments
