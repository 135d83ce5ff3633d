#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "unimoments/correlation.hpp"
#include "unimoments/matkernel.hpp"
#include "unimoments/types.hpp"

namespace testsupport {

using namespace unimoments;

inline std::string fixture_path(const std::string& name) {
#ifdef UNIMOMENTS_FIXTURE_DIR
  return std::string(UNIMOMENTS_FIXTURE_DIR) + "/" + name;
#else
  return "fixtures/" + name;
#endif
}

inline double urand(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double gauss(std::mt19937_64& rng) {
  const double u1 = 1.0 - urand(rng);
  const double u2 = urand(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(6.283185307179586476925286766559 * u2);
}

inline cxd cgauss(std::mt19937_64& rng) {
  const double re = gauss(rng);
  const double im = gauss(rng);
  return cxd(re, im) / std::sqrt(2.0);
}

inline CMatrix random_complex(Index rows, Index cols, std::mt19937_64& rng) {
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = cgauss(rng);
  }
  return m;
}

inline RMatrix random_real(Index rows, Index cols, std::mt19937_64& rng) {
  RMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = gauss(rng);
  }
  return m;
}

inline CMatrix random_hermitian(Index n, std::mt19937_64& rng) {
  const CMatrix a = random_complex(n, n, rng);
  return 0.5 * (a + a.adjoint());
}

/// Gram matrix of r-dimensional unit vectors: a random correlation matrix
/// of rank min(r, n) almost surely.
inline CorrelationMatrix random_correlation(Index n, Index r, bool real,
                                            std::mt19937_64& rng,
                                            const Tolerance& tol = {}) {
  CMatrix f = real ? CMatrix(random_real(r, n, rng).cast<cxd>())
                   : random_complex(r, n, rng);
  for (Index j = 0; j < n; ++j) f.col(j) /= f.col(j).norm();
  return validate(f.adjoint() * f, tol);
}

/// Like random_correlation, but redrawn until the smallest kept eigenvalue
/// clears the rank cut by a wide margin, so factorizations are exact to
/// float precision rather than truncation-limited.
inline CorrelationMatrix random_correlation_gapped(Index n, Index r, bool real,
                                                   std::mt19937_64& rng,
                                                   double rel_gap = 1e-4) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    auto x = random_correlation(n, r, real, rng);
    const RVector values = hermitian_eigen(x.matrix()).values;
    const Index rank = std::min(r, n);
    if (values(rank - 1) > rel_gap * values(0)) return x;
  }
  fail(ErrorKind::Internal, "random_correlation_gapped: no gapped draw");
}

inline CVector random_phases(Index n, std::mt19937_64& rng) {
  CVector z(n);
  for (Index i = 0; i < n; ++i) {
    const double a = 6.283185307179586476925286766559 * urand(rng);
    z(i) = cxd(std::cos(a), std::sin(a));
  }
  return z;
}

inline std::vector<Index> random_perm(Index n, std::mt19937_64& rng) {
  std::vector<Index> p(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) p[static_cast<size_t>(i)] = i;
  for (Index i = n - 1; i > 0; --i) {
    const Index j = static_cast<Index>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(p[static_cast<size_t>(i)], p[static_cast<size_t>(j)]);
  }
  return p;
}

/// Runs f and reports the ErrorKind it threw, if any.
template <typename F>
inline std::optional<ErrorKind> thrown_kind(F&& f) {
  try {
    std::forward<F>(f)();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  return max_abs(a - b);
}

}  // namespace testsupport
