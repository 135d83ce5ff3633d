#include "unimoments/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "unimoments/clifford.hpp"
#include "unimoments/extremality.hpp"
#include "unimoments/matkernel.hpp"
#include "unimoments/moments.hpp"

namespace unimoments {

const char* bound_kind_name(BoundKind k) {
  switch (k) {
    case BoundKind::averaging:
      return "averaging";
    case BoundKind::eigen_shift:
      return "eigen_shift";
    case BoundKind::skew_reduction:
      return "skew_reduction";
    case BoundKind::combined:
      return "combined";
  }
  return "unknown";
}

namespace {

// n!/6: the number of permutations with the first three images in
// increasing order.
unsigned long long ordered_count(Index n) {
  __int128 acc = 1;
  const __int128 limit =
      static_cast<__int128>(std::numeric_limits<unsigned long long>::max());
  for (Index i = 2; i <= n; ++i) {
    acc *= i;
    if (acc / 6 > limit) {
      fail(ErrorKind::SizeOverflow,
           "sigma_average: permutation count overflows for n = " +
               std::to_string(n));
    }
  }
  return static_cast<unsigned long long>(acc / 6);
}

long long triple_count(Index n) { return static_cast<long long>(n) * (n - 1) * (n - 2) / 6; }

}  // namespace

SigmaAverage sigma_average(const CorrelationMatrix& x, const Tolerance& tol) {
  const Index n = x.n();
  if (n < 3) {
    fail(ErrorKind::DimensionTooSmall, "sigma_average: n must be >= 3");
  }
  const unsigned long long group = ordered_count(n);
  const long long triples = triple_count(n);
  const CMatrix& m = x.matrix();
  CMatrix acc = CMatrix::Zero(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      for (Index c = b + 1; c < n; ++c) {
        // the summand equals x on {a,b,c} and the identity elsewhere
        acc(a, b) += m(a, b);
        acc(b, a) += m(b, a);
        acc(a, c) += m(a, c);
        acc(c, a) += m(c, a);
        acc(b, c) += m(b, c);
        acc(c, b) += m(c, b);
        acc.diagonal().array() += 1.0;
      }
    }
  }
  CMatrix avg = acc / static_cast<double>(triples);
  const double t = 6.0 / (static_cast<double>(n) * n - n);
  const CMatrix target =
      t * m + (1.0 - t) * CMatrix::Identity(n, n);
  const double residual = (avg - target).cwiseAbs().maxCoeff();
  if (residual > 1e-10) {
    fail(ErrorKind::Internal,
         "sigma_average: averaged matrix drifted from tX + (1-t)I by " +
             std::to_string(residual));
  }
  return SigmaAverage{group, residual, validate(std::move(avg), tol)};
}

BoundCertificate averaging_bound(const CorrelationMatrix& x,
                                 const Tolerance& tol) {
  BoundCertificate cert;
  cert.kind = BoundKind::averaging;
  cert.n = x.n();
  cert.average = sigma_average(x, tol);
  const double t = 6.0 / (static_cast<double>(cert.n) * cert.n - cert.n);
  cert.bound_c = t;
  cert.bound_a = t;
  return cert;
}

BoundCertificate eigen_shift_bound(const CorrelationMatrix& x,
                                   const Tolerance& tol) {
  const Index n = x.n();
  if (n < 3) {
    fail(ErrorKind::DimensionTooSmall, "eigen_shift_bound: n must be >= 3");
  }
  BoundCertificate cert;
  cert.kind = BoundKind::eigen_shift;
  cert.n = n;
  double lam = min_eigenvalue(x.matrix());
  lam = std::clamp(lam, 0.0, 1.0);
  cert.lambda0 = lam;
  double bound = 1.0;
  if (1.0 - lam <= 1e-12) {
    // lambda_min = 1 forces X = I, which is realizable at full scale
    cert.shifted = x;
  } else {
    CMatrix y = (x.matrix() - lam * CMatrix::Identity(n, n)) / (1.0 - lam);
    cert.shifted = validate(std::move(y), tol);
    const double t = 6.0 / (static_cast<double>(n) * n - n);
    bound = std::min(1.0, t / (1.0 - lam));
  }
  cert.bound_c = bound;
  cert.bound_a = bound;
  return cert;
}

BoundCertificate skew_reduction_bound(const CorrelationMatrix& x,
                                      const Tolerance& tol) {
  const Index n = x.n();
  if (n < 3) {
    fail(ErrorKind::DimensionTooSmall, "skew_reduction_bound: n must be >= 3");
  }
  BoundCertificate cert;
  cert.kind = BoundKind::skew_reduction;
  cert.n = n;
  for (Index k = 0; k < n; ++k) {
    const RealifyResult rr = realify_row(x, k, tol);
    const CMatrix s = skew_part(rr.conjugated);
    SkewCandidate cand;
    cand.row = k;
    cand.phases = rr.phases;
    if (s.cwiseAbs().maxCoeff() <= tol.eps_eq) {
      cand.zero_skew = true;
      cand.usable = true;
      cand.bound = 1.0;
    } else {
      for (Index i = 0; i < n; ++i) {
        if (s.row(i).cwiseAbs().maxCoeff() > tol.eps_eq) {
          cand.support.push_back(i);
        }
      }
      cand.skew_norm = operator_norm(s);
      cand.d = 1.0 / cand.skew_norm;
      cand.usable = cand.support.size() <= 3;
      cand.bound = cand.usable ? cand.d / (cand.d + 1.0) : 0.0;
    }
    cert.candidates.push_back(std::move(cand));
  }
  int best = -1;
  double best_bound = -1.0;
  for (int k = 0; k < static_cast<int>(cert.candidates.size()); ++k) {
    const auto& cand = cert.candidates[static_cast<size_t>(k)];
    if (cand.usable && cand.bound > best_bound + 1e-12) {
      best = k;
      best_bound = cand.bound;
    }
  }
  if (best < 0) {
    fail(ErrorKind::SupportTooLarge,
         "skew_reduction_bound: every row leaves a skew part supported on "
         "more than 3 indices");
  }
  cert.winner = best;
  cert.bound_a = best_bound;
  if (n <= 5) {
    cert.bound_c = best_bound;
  }
  return cert;
}

BoundCertificate best_lower_bound(const CorrelationMatrix& x,
                                  const Tolerance& tol) {
  BoundCertificate cert;
  cert.kind = BoundKind::combined;
  cert.n = x.n();
  cert.parts.push_back(averaging_bound(x, tol));
  cert.parts.push_back(eigen_shift_bound(x, tol));
  try {
    cert.parts.push_back(skew_reduction_bound(x, tol));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SupportTooLarge) throw;
  }
  double best_c = -1.0, best_a = -1.0;
  for (int k = 0; k < static_cast<int>(cert.parts.size()); ++k) {
    const auto& p = cert.parts[static_cast<size_t>(k)];
    if (p.bound_c && *p.bound_c > best_c + 1e-12) {
      best_c = *p.bound_c;
      cert.winner_c = k;
    }
    if (p.bound_a && *p.bound_a > best_a + 1e-12) {
      best_a = *p.bound_a;
      cert.winner_a = k;
    }
  }
  cert.bound_c = best_c;
  cert.bound_a = best_a;
  return cert;
}

namespace {

struct Audit {
  bool ok = true;
  double max_error = 0.0;
  std::vector<std::string> notes;

  void record(double err) { max_error = std::max(max_error, err); }
  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back("failed: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Constructive commuting realizability for a matrix equal to the identity
// outside a principal block of at most 3 indices: the block decomposes into
// rank-one correlation matrices.
void audit_small_block(const CMatrix& b, const Tolerance& tol, Audit& a) {
  const Index n = b.rows();
  std::vector<Index> sup;
  for (Index i = 0; i < n; ++i) {
    double dev = 0.0;
    for (Index j = 0; j < n; ++j) {
      const double ref = i == j ? 1.0 : 0.0;
      dev = std::max(dev, std::abs(b(i, j) - cxd(ref, 0.0)));
    }
    if (dev > 1e-12) sup.push_back(i);
  }
  a.check(sup.size() <= 3, "off-identity support exceeds 3 indices");
  if (!a.ok || sup.empty()) return;
  const Index m = static_cast<Index>(sup.size());
  CMatrix blk(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      blk(i, j) = b(sup[static_cast<size_t>(i)], sup[static_cast<size_t>(j)]);
    }
  }
  const CorrelationMatrix cb = validate(blk, tol);
  const auto dec = decompose_extreme(cb, /*real_mode=*/false, tol);
  CMatrix recon = CMatrix::Zero(m, m);
  double wsum = 0.0;
  for (const auto& term : dec.terms) {
    const Index r = rank_and_support(term.matrix.matrix(), tol).rank;
    a.check(r == 1, "block decomposition leaf has rank " + std::to_string(r));
    recon += term.weight * term.matrix.matrix();
    wsum += term.weight;
  }
  a.record(std::abs(wsum - 1.0));
  a.check(std::abs(wsum - 1.0) <= 1e-10, "block weights do not sum to 1");
  const double err = max_abs(recon - blk);
  a.record(err);
  a.check(err <= 1e-8, "block reconstruction error " + std::to_string(err));
}

// I_n is the average of the n rank-one matrices built from the Fourier
// phase vectors.
void audit_identity_membership(Index n, const Tolerance& tol, Audit& a) {
  CMatrix acc = CMatrix::Zero(n, n);
  for (Index m = 0; m < n; ++m) {
    CVector z(n);
    for (Index j = 0; j < n; ++j) {
      const double ang = 2.0 * std::numbers::pi * static_cast<double>(j) *
                         static_cast<double>(m) / static_cast<double>(n);
      z(j) = cxd(std::cos(ang), std::sin(ang));
    }
    acc += rank_one_matrix(z, tol).matrix();
  }
  const double err = max_abs(acc / static_cast<double>(n) -
                             CMatrix::Identity(n, n));
  a.record(err);
  a.check(err <= 1e-12, "identity rank-one average error " +
                            std::to_string(err));
}

// Membership of a real correlation matrix: constructive for the
// anticommuting route, dimension permitting; the commuting claim holds for
// n <= 5, where real correlation matrices are commuting-realizable.
void audit_real_membership(const CorrelationMatrix& r, const Tolerance& tol,
                           Index cap, bool claim_commuting, Audit& a) {
  a.check(r.is_real(), "expected a real matrix");
  if (!r.is_real()) return;
  const Index rank = rank_and_support(r.matrix(), tol).rank;
  if (rank <= cap) {
    const UnitaryTuple t = realize_real(r, tol, cap);
    const MomentMatrix mm = moment_matrix(t, tol);
    const double err = max_abs(mm.matrix.matrix() - r.matrix());
    a.record(err);
    a.check(err <= 1e-8, "real realization round-trip error " +
                             std::to_string(err));
  } else {
    a.note("real realization not materialized: rank " + std::to_string(rank) +
           " exceeds cap " + std::to_string(cap));
  }
  if (claim_commuting) {
    a.check(r.n() <= 5,
            "commuting claim for a real matrix requires n <= 5");
    a.note("commuting membership of the real part holds for n <= 5");
  }
}

void audit_certificate(const BoundCertificate& cert, const CorrelationMatrix& x,
                       const Tolerance& tol, Index cap, Audit& a);

void audit_averaging(const BoundCertificate& cert, const CorrelationMatrix& x,
                     const Tolerance& tol, Audit& a) {
  const Index n = x.n();
  const double t = 6.0 / (static_cast<double>(n) * n - n);
  a.check(cert.average.has_value(), "missing averaging evidence");
  a.check(cert.bound_c && std::abs(*cert.bound_c - t) <= 1e-12,
          "averaging bound_c is not 6/(n^2 - n)");
  a.check(cert.bound_a && std::abs(*cert.bound_a - t) <= 1e-12,
          "averaging bound_a is not 6/(n^2 - n)");
  if (!cert.average) return;
  const SigmaAverage re = sigma_average(x, tol);
  a.check(re.group_size == cert.average->group_size,
          "averaging group size mismatch");
  double err = max_abs(re.averaged.matrix() - cert.average->averaged.matrix());
  a.record(err);
  a.check(err <= 1e-10, "averaged matrix does not recompute");
  const CMatrix target =
      t * x.matrix() + (1.0 - t) * CMatrix::Identity(n, n);
  err = max_abs(cert.average->averaged.matrix() - target);
  a.record(err);
  a.check(err <= 1e-8, "averaged matrix is not tX + (1-t)I");
  // every summand is identity outside one 3-subset; certify each block
  const CMatrix& m = x.matrix();
  for (Index p = 0; p < n; ++p) {
    for (Index q = p + 1; q < n; ++q) {
      for (Index r = q + 1; r < n; ++r) {
        CMatrix xt = CMatrix::Identity(n, n);
        const Index idx[3] = {p, q, r};
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) {
            xt(idx[i], idx[j]) = m(idx[i], idx[j]);
          }
        }
        audit_small_block(xt, tol, a);
        if (!a.ok) return;
      }
    }
  }
  a.note("certified " + std::to_string(triple_count(n)) +
         " averaging summands by rank-one decomposition");
}

void audit_eigen_shift(const BoundCertificate& cert, const CorrelationMatrix& x,
                       const Tolerance& tol, Audit& a) {
  const Index n = x.n();
  a.check(cert.lambda0.has_value() && cert.shifted.has_value(),
          "missing eigen shift evidence");
  if (!cert.lambda0 || !cert.shifted) return;
  const double lam = *cert.lambda0;
  a.check(lam >= 0.0 && lam <= 1.0, "lambda0 outside [0, 1]");
  const double lam_re = std::clamp(min_eigenvalue(x.matrix()), 0.0, 1.0);
  a.record(std::abs(lam_re - lam));
  a.check(std::abs(lam_re - lam) <= 1e-8, "lambda0 does not recompute");
  const double t = 6.0 / (static_cast<double>(n) * n - n);
  const double expected =
      1.0 - lam <= 1e-12 ? 1.0 : std::min(1.0, t / (1.0 - lam));
  a.check(cert.bound_c && std::abs(*cert.bound_c - expected) <= 1e-12,
          "eigen shift bound_c mismatch");
  a.check(cert.bound_a && std::abs(*cert.bound_a - expected) <= 1e-12,
          "eigen shift bound_a mismatch");
  const CMatrix& y = cert.shifted->matrix();
  double err = max_abs(x.matrix() - ((1.0 - lam) * y +
                                     lam * CMatrix::Identity(n, n)));
  a.record(err);
  a.check(err <= 1e-8, "X is not (1 - lambda0) Y + lambda0 I");
  const double s = expected;
  const double sp = s * (1.0 - lam);
  if (sp > 1e-14) {
    a.check(sp <= t + 1e-12, "shifted scale exceeds the averaging scale");
    const SigmaAverage avg_y = sigma_average(*cert.shifted, tol);
    a.record(avg_y.identity_residual);
    // sX + (1-s)I = (sp/t) avg(Y) + (1 - sp/t) I
    const CMatrix lhs =
        s * x.matrix() + (1.0 - s) * CMatrix::Identity(n, n);
    const CMatrix rhs = (sp / t) * avg_y.averaged.matrix() +
                        (1.0 - sp / t) * CMatrix::Identity(n, n);
    err = max_abs(lhs - rhs);
    a.record(err);
    a.check(err <= 1e-8, "shift and averaging identities do not compose");
    const CMatrix& my = y;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        for (Index r = q + 1; r < n; ++r) {
          CMatrix yt = CMatrix::Identity(n, n);
          const Index idx[3] = {p, q, r};
          for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
              yt(idx[i], idx[j]) = my(idx[i], idx[j]);
            }
          }
          audit_small_block(yt, tol, a);
          if (!a.ok) return;
        }
      }
    }
  }
  audit_identity_membership(n, tol, a);
}

void audit_skew(const BoundCertificate& cert, const CorrelationMatrix& x,
                const Tolerance& tol, Index cap, Audit& a) {
  const Index n = x.n();
  a.check(cert.winner.has_value() &&
              *cert.winner >= 0 &&
              *cert.winner < static_cast<int>(cert.candidates.size()),
          "missing skew winner");
  if (!a.ok) return;
  const SkewCandidate& w =
      cert.candidates[static_cast<size_t>(*cert.winner)];
  a.check(w.usable, "winner candidate is not usable");
  a.check(cert.bound_a && std::abs(*cert.bound_a - w.bound) <= 1e-12,
          "bound_a does not match the winner");
  if (n <= 5) {
    a.check(cert.bound_c && std::abs(*cert.bound_c - w.bound) <= 1e-12,
            "bound_c missing or wrong for n <= 5");
  } else {
    a.check(!cert.bound_c.has_value(),
            "skew reduction cannot certify the commuting scale for n > 5");
  }
  for (Index i = 0; i < w.phases.size(); ++i) {
    a.check(std::abs(std::abs(w.phases(i)) - 1.0) <= 1e-10,
            "winner phases are not unimodular");
  }
  const CorrelationMatrix xp = conjugate_diag(x, w.phases, tol);
  const CMatrix s = skew_part(xp);
  const CorrelationMatrix r = real_part(xp, tol);
  const bool claim_c = cert.bound_c.has_value();
  if (w.zero_skew) {
    const double err = max_abs(s);
    a.record(err);
    a.check(err <= tol.eps_eq, "winner claims zero skew but skew is " +
                                   std::to_string(err));
    a.check(std::abs(w.bound - 1.0) <= 1e-12, "zero skew must give bound 1");
    audit_real_membership(r, tol, cap, claim_c, a);
    return;
  }
  double err = std::abs(operator_norm(s) - w.skew_norm);
  a.record(err);
  a.check(err <= 1e-10, "skew norm does not recompute");
  a.check(std::abs(w.d * w.skew_norm - 1.0) <= 1e-10, "d is not 1/||S||");
  a.check(std::abs(w.bound - w.d / (w.d + 1.0)) <= 1e-12,
          "bound is not d/(d + 1)");
  std::vector<Index> sup;
  for (Index i = 0; i < n; ++i) {
    if (s.row(i).cwiseAbs().maxCoeff() > tol.eps_eq) sup.push_back(i);
  }
  a.check(sup == w.support, "skew support does not recompute");
  a.check(sup.size() <= 3, "skew support exceeds 3 indices");
  // piece 1: B = I + dS is a correlation matrix that is identity outside
  // the support and commuting-realizable through its block
  const CMatrix b = CMatrix::Identity(n, n) + w.d * s;
  (void)validate(b, tol);
  audit_small_block(b, tol, a);
  // piece 2: the real part
  audit_real_membership(r, tol, cap, claim_c, a);
  // convex identity: t X' + (1-t) I = (1/(d+1)) B + (d/(d+1)) R
  const double t = w.bound;
  const CMatrix lhs =
      t * xp.matrix() + (1.0 - t) * CMatrix::Identity(n, n);
  const CMatrix rhs =
      (1.0 / (w.d + 1.0)) * b + (w.d / (w.d + 1.0)) * r.matrix();
  err = max_abs(lhs - rhs);
  a.record(err);
  a.check(err <= 1e-10, "skew convex identity fails");
  // conjugating back recovers t X + (1-t) I
  const CMatrix back = w.phases.asDiagonal() * lhs *
                       CMatrix(w.phases.conjugate().asDiagonal());
  err = max_abs(back - (t * x.matrix() +
                        (1.0 - t) * CMatrix::Identity(n, n)));
  a.record(err);
  a.check(err <= 1e-10, "conjugating the identity back fails");
}

void audit_combined(const BoundCertificate& cert, const CorrelationMatrix& x,
                    const Tolerance& tol, Index cap, Audit& a) {
  a.check(!cert.parts.empty(), "combined certificate has no parts");
  double best_c = -1.0, best_a = -1.0;
  for (size_t k = 0; k < cert.parts.size(); ++k) {
    Audit sub;
    audit_certificate(cert.parts[k], x, tol, cap, sub);
    a.record(sub.max_error);
    for (const auto& note : sub.notes) {
      a.notes.push_back("part " + std::to_string(k) + " (" +
                        bound_kind_name(cert.parts[k].kind) + "): " + note);
    }
    if (!sub.ok) a.ok = false;
    if (cert.parts[k].bound_c) best_c = std::max(best_c, *cert.parts[k].bound_c);
    if (cert.parts[k].bound_a) best_a = std::max(best_a, *cert.parts[k].bound_a);
  }
  a.check(cert.bound_c && std::abs(*cert.bound_c - best_c) <= 1e-12,
          "combined bound_c is not the best part");
  a.check(cert.bound_a && std::abs(*cert.bound_a - best_a) <= 1e-12,
          "combined bound_a is not the best part");
  a.check(cert.winner_c && *cert.winner_c >= 0 &&
              *cert.winner_c < static_cast<int>(cert.parts.size()),
          "combined winner_c missing");
  a.check(cert.winner_a && *cert.winner_a >= 0 &&
              *cert.winner_a < static_cast<int>(cert.parts.size()),
          "combined winner_a missing");
}

void audit_certificate(const BoundCertificate& cert, const CorrelationMatrix& x,
                       const Tolerance& tol, Index cap, Audit& a) {
  a.check(cert.n == x.n(), "certificate dimension mismatch");
  if (!a.ok) return;
  switch (cert.kind) {
    case BoundKind::averaging:
      audit_averaging(cert, x, tol, a);
      break;
    case BoundKind::eigen_shift:
      audit_eigen_shift(cert, x, tol, a);
      break;
    case BoundKind::skew_reduction:
      audit_skew(cert, x, tol, cap, a);
      break;
    case BoundKind::combined:
      audit_combined(cert, x, tol, cap, a);
      break;
  }
}

}  // namespace

CertificateCheck verify_certificate(const BoundCertificate& cert,
                                    const CorrelationMatrix& x,
                                    const Tolerance& tol, Index cap) {
  Audit a;
  audit_certificate(cert, x, tol, cap, a);
  CertificateCheck out;
  out.ok = a.ok;
  out.max_error = a.max_error;
  out.notes = std::move(a.notes);
  return out;
}

}  // namespace unimoments
