#pragma once

#include <memory>
#include <vector>

#include "unimoments/correlation.hpp"
#include "unimoments/moments.hpp"
#include "unimoments/types.hpp"

namespace unimoments {

/// Anticommuting symmetric sign matrices G_1..G_r of size 2^r:
/// G_i G_j + G_j G_i = 2 delta_ij I. Entries are exactly 0 and +-1.
struct CliffordGenerators {
  Index r = 0;
  Index dim = 0;  // 2^r
  std::vector<RMatrix> generators;
};

/// Builds (and caches) the generators for a given r. The dimension doubles
/// with every generator, so r is capped; the default cap 8 keeps matrices at
/// 256 x 256.
std::shared_ptr<const CliffordGenerators> build_generators(Index r,
                                                           Index cap = 8);

/// The symmetric matrix sum_i x_i G_i; orthogonal whenever ||x|| = 1.
RMatrix lambda_of(const CliffordGenerators& gens, const RVector& x);

/// Realizes a real correlation matrix of rank r as the moment matrix of r
/// anticommuting symmetric orthogonals applied to a real frame, in dimension
/// k = 2^r.
UnitaryTuple realize_real(const CorrelationMatrix& x, const Tolerance& tol = {},
                          Index cap = 8);

}  // namespace unimoments
