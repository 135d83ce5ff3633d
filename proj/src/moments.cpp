#include "unimoments/moments.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "unimoments/extremality.hpp"
#include "unimoments/fixtures.hpp"
#include "unimoments/matkernel.hpp"

namespace unimoments {

double tuple_unitarity_error(const UnitaryTuple& t) {
  double worst = 0.0;
  const CMatrix id = CMatrix::Identity(t.k, t.k);
  for (const auto& v : t.unitaries) {
    worst = std::max(worst, operator_norm(CMatrix(v.adjoint() * v) - id));
  }
  return worst;
}

MomentMatrix moment_matrix(const UnitaryTuple& t, const Tolerance& tol,
                           Provenance provenance) {
  const Index n = t.n();
  if (n == 0 || t.k < 1) {
    fail(ErrorKind::DimensionMismatch, "moment_matrix: empty tuple");
  }
  for (const auto& v : t.unitaries) {
    if (v.rows() != t.k || v.cols() != t.k) {
      fail(ErrorKind::DimensionMismatch,
           "moment_matrix: component size does not match k");
    }
  }
  CMatrix m(n, n);
  const double k = static_cast<double>(t.k);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      // tr(V_i* V_j) as an entrywise sum
      const cxd v = t.unitaries[static_cast<size_t>(i)]
                        .conjugate()
                        .cwiseProduct(t.unitaries[static_cast<size_t>(j)])
                        .sum() /
                    k;
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
  }
  return MomentMatrix{validate(std::move(m), tol), provenance};
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// One standard complex Gaussian per call, by Box-Muller on the raw 64-bit
// stream. Avoids std::normal_distribution, whose output is not pinned across
// standard library implementations.
cxd complex_gaussian(std::mt19937_64& rng) {
  const double u1 =
      1.0 - static_cast<double>(rng() >> 11) * 0x1.0p-53;  // (0, 1]
  const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  return cxd(rad * std::cos(ang), rad * std::sin(ang)) / std::sqrt(2.0);
}

}  // namespace

CMatrix haar_unitary(Index k, std::uint64_t seed) {
  if (k < 1) {
    fail(ErrorKind::PreconditionViolated, "haar_unitary: k must be >= 1");
  }
  std::mt19937_64 rng(splitmix64(seed));
  CMatrix a(k, k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) a(i, j) = complex_gaussian(rng);
  }
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ() * CMatrix::Identity(k, k);
  // Fix the gauge so the factorization has positive diagonal in R; this
  // makes Q exactly Haar rather than Haar-up-to-phases.
  const CMatrix r = qr.matrixQR();
  for (Index j = 0; j < k; ++j) {
    const cxd d = r(j, j);
    const double ad = std::abs(d);
    const cxd phase = ad > 0.0 ? d / ad : cxd(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

UnitaryTuple haar_tuple(Index n, Index k, std::uint64_t seed) {
  if (n < 1) {
    fail(ErrorKind::PreconditionViolated, "haar_tuple: n must be >= 1");
  }
  UnitaryTuple t;
  t.k = k;
  t.unitaries.reserve(static_cast<size_t>(n));
  const std::uint64_t base = splitmix64(seed);
  for (Index i = 0; i < n; ++i) {
    t.unitaries.push_back(haar_unitary(k, base + static_cast<std::uint64_t>(i)));
  }
  return t;
}

UnitaryTuple tensor_realize(const UnitaryTuple& a, const UnitaryTuple& b) {
  if (a.n() != b.n()) {
    fail(ErrorKind::DimensionMismatch, "tensor_realize: tuple lengths differ");
  }
  UnitaryTuple t;
  t.k = a.k * b.k;
  t.unitaries.reserve(static_cast<size_t>(a.n()));
  for (Index i = 0; i < a.n(); ++i) {
    t.unitaries.push_back(kron(a.unitaries[static_cast<size_t>(i)],
                               b.unitaries[static_cast<size_t>(i)]));
  }
  return t;
}

Rational::Rational(long long n, long long d) {
  if (d == 0) {
    fail(ErrorKind::PreconditionViolated, "Rational: zero denominator");
  }
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const long long g = std::gcd(n < 0 ? -n : n, d);
  num = g == 0 ? 0 : n / g;
  den = g == 0 ? 1 : d / g;
}

namespace {

long long lcm_capped(long long a, long long b, long long cap,
                     const char* what) {
  const long long g = std::gcd(a, b);
  const __int128 l = static_cast<__int128>(a) / g * b;
  if (l > cap) {
    fail(ErrorKind::SizeOverflow, std::string(what) +
                                      " exceeds the block size cap " +
                                      std::to_string(cap));
  }
  return static_cast<long long>(l);
}

}  // namespace

UnitaryTuple block_convex_realize(
    const std::vector<std::pair<Rational, UnitaryTuple>>& terms,
    Index size_cap) {
  if (terms.empty()) {
    fail(ErrorKind::DimensionMismatch, "block_convex_realize: no terms");
  }
  if (size_cap < 1) {
    fail(ErrorKind::PreconditionViolated,
         "block_convex_realize: size cap must be positive");
  }
  const Index n = terms.front().second.n();
  for (const auto& [w, t] : terms) {
    if (t.n() != n || n == 0) {
      fail(ErrorKind::DimensionMismatch,
           "block_convex_realize: tuple lengths differ");
    }
    if (t.k < 1) {
      fail(ErrorKind::DimensionMismatch, "block_convex_realize: empty tuple");
    }
    if (w.num <= 0) {
      fail(ErrorKind::WeightsNotNormalized,
           "block_convex_realize: weights must be positive");
    }
  }
  // exact sum-to-one check
  auto gcd128 = [](__int128 a, __int128 b) {
    if (a < 0) a = -a;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  };
  __int128 snum = 0, sden = 1;
  for (const auto& [w, t] : terms) {
    snum = snum * w.den + static_cast<__int128>(w.num) * sden;
    sden *= w.den;
    const __int128 g = gcd128(snum, sden);
    if (g > 1) {
      snum /= g;
      sden /= g;
    }
    if (sden > (static_cast<__int128>(1) << 96)) {
      fail(ErrorKind::SizeOverflow,
           "block_convex_realize: weight denominators overflow");
    }
  }
  if (snum != sden) {
    fail(ErrorKind::WeightsNotNormalized,
         "block_convex_realize: weights do not sum to exactly 1");
  }

  const long long cap = static_cast<long long>(size_cap);
  long long l = 1;
  for (const auto& [w, t] : terms) {
    l = lcm_capped(l, w.den, cap, "weight denominator lcm");
  }
  long long k = 1;
  for (const auto& [w, t] : terms) {
    k = lcm_capped(k, static_cast<long long>(t.k), cap, "component size lcm");
  }
  const __int128 total128 = static_cast<__int128>(k) * l;
  if (total128 > cap) {
    fail(ErrorKind::SizeOverflow,
         "block_convex_realize: block dimension " +
             std::to_string(static_cast<long long>(total128)) +
             " exceeds the cap " + std::to_string(cap));
  }
  const Index total = static_cast<Index>(total128);

  UnitaryTuple out;
  out.k = total;
  out.unitaries.assign(static_cast<size_t>(n), CMatrix::Zero(total, total));
  Index offset = 0;
  for (const auto& [w, t] : terms) {
    // copies * k_term / total == w exactly
    const long long copies = w.num * (l / w.den) * (k / t.k);
    for (long long c = 0; c < copies; ++c) {
      for (Index j = 0; j < n; ++j) {
        out.unitaries[static_cast<size_t>(j)].block(offset, offset, t.k, t.k) =
            t.unitaries[static_cast<size_t>(j)];
      }
      offset += t.k;
    }
  }
  if (offset != total) {
    fail(ErrorKind::Internal, "block_convex_realize: blocks do not tile");
  }
  return out;
}

double kernel_relation_residual(const UnitaryTuple& t, const CVector& c) {
  if (c.size() != t.n()) {
    fail(ErrorKind::LengthMismatch,
         "kernel_relation_residual: coefficient length mismatch");
  }
  if (c.norm() == 0.0) {
    fail(ErrorKind::ZeroVector, "kernel_relation_residual: zero coefficients");
  }
  CMatrix z = CMatrix::Zero(t.k, t.k);
  for (Index i = 0; i < t.n(); ++i) {
    z += c(i) * t.unitaries[static_cast<size_t>(i)];
  }
  return spectral_norm(z);
}

RefutationCertificate refute_commuting_f6(const CorrelationMatrix& x,
                                          const Tolerance& tol) {
  const CorrelationMatrix target = fixtures::f6_witness(tol);
  if (x.n() != 6 ||
      (x.matrix() - target.matrix()).cwiseAbs().maxCoeff() > tol.eps_eq) {
    fail(ErrorKind::WrongInput,
         "refute_commuting_f6: input is not the distinguished 6x6 matrix");
  }
  RefutationCertificate cert;
  const auto kernel = fixtures::f6_kernel();
  const char* names[3] = {"U4 = (U1 + U2)/sqrt(2)", "U5 = (U2 + U3)/sqrt(2)",
                          "U6 = (U1 + U2 + U3)/sqrt(3)"};
  for (int i = 0; i < 3; ++i) {
    KernelRelation rel;
    rel.vector = kernel[static_cast<size_t>(i)];
    rel.matrix_residual = (x.matrix() * rel.vector).norm();
    rel.relation = names[i];
    cert.relations.push_back(std::move(rel));
  }
  // Scalar case split. Pointwise, |z1 + z2| = sqrt(2) with |z1| = |z2| = 1
  // forces z1 = s1 i z2, and likewise z3 = s3 i z2. Then
  // z6 = (z1 + z2 + z3)/sqrt(3) has |z6| bounded away from 1 in every case.
  const double t3 = std::sqrt(3.0);
  double min_dev = 2.0;
  int idx = 0;
  for (int s1 : {1, -1}) {
    for (int s3 : {1, -1}) {
      SignCase sc;
      sc.s1 = s1;
      sc.s3 = s3;
      sc.zeta6_over_zeta2 = cxd(1.0, static_cast<double>(s1 + s3)) / t3;
      sc.abs_zeta6 = std::abs(sc.zeta6_over_zeta2);
      min_dev = std::min(min_dev, std::abs(sc.abs_zeta6 - 1.0));
      cert.cases[static_cast<size_t>(idx++)] = sc;
    }
  }
  cert.min_deviation = min_dev;
  cert.refuted = min_dev > 0.1;
  return cert;
}

GnExclusionReport gn_exclusion_rank2(const CorrelationMatrix& x,
                                     const Tolerance& tol) {
  GnExclusionReport rep;
  const auto ext = is_extreme(x, /*real_mode=*/false, tol);
  rep.rank = ext.rank;
  rep.extreme = ext.is_extreme;
  rep.rank_one = ext.rank == 1;
  rep.certified_outside = ext.rank == 2 && ext.is_extreme;
  if (rep.certified_outside) {
    rep.reason =
        "rank-2 extreme: a rank-2 moment matrix of trace unitaries is "
        "commuting-realizable, hence an average of rank-one correlation "
        "matrices, and an extreme point that averages rank-one matrices "
        "must itself be rank one";
  } else if (rep.rank_one) {
    rep.reason = "rank one: realizable by scalars, no exclusion";
  } else {
    rep.reason = "no exclusion: certificate needs rank exactly 2 plus "
                 "extremality";
  }
  return rep;
}

}  // namespace unimoments
