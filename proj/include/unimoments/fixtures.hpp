#pragma once

#include <array>
#include <utility>

#include "unimoments/correlation.hpp"
#include "unimoments/types.hpp"

namespace unimoments::fixtures {

/// 4 x 4 complex correlation matrix of rank 2, the Gram matrix of the frame
/// (1,0), (0,1), (1,1)/sqrt(2), (i,1)/sqrt(2). Extreme, and certified
/// outside the trace-realizable set by rank/extremality.
CorrelationMatrix x4(const Tolerance& tol = {});

/// 3 x 3 real correlation matrix with off-diagonal entries 0, 1/sqrt(2),
/// 1/sqrt(2). Extreme among real correlation matrices but not among complex
/// ones.
CorrelationMatrix real3(const Tolerance& tol = {});

/// The unique two-term split of real3 into complex rank-one correlation
/// matrices, a conjugate pair taken with weights 1/2 each.
std::pair<CorrelationMatrix, CorrelationMatrix> real3_split(
    const Tolerance& tol = {});

/// 6 x 6 real correlation matrix of rank 3, the Gram matrix of e1, e2, e3,
/// (e1+e2)/sqrt(2), (e2+e3)/sqrt(2), (e1+e2+e3)/sqrt(3). Realizable by
/// anticommuting symmetries, yet admits no commuting unitary realization.
CorrelationMatrix f6_witness(const Tolerance& tol = {});

/// Orthogonal-relation kernel of the 6 x 6 witness: X v = 0 exactly for all
/// three vectors, and together they span the kernel.
std::array<CVector, 3> f6_kernel();

}  // namespace unimoments::fixtures
