#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "unimoments/bounds.hpp"
#include "unimoments/clifford.hpp"
#include "unimoments/correlation.hpp"
#include "unimoments/extremality.hpp"
#include "unimoments/fixtures.hpp"
#include "unimoments/matkernel.hpp"
#include "unimoments/moments.hpp"

namespace testprops {

using namespace unimoments;
using testsupport::cgauss;
using testsupport::gauss;
using testsupport::max_abs;
using testsupport::max_abs_diff;
using testsupport::random_complex;
using testsupport::random_correlation;
using testsupport::random_hermitian;
using testsupport::random_perm;
using testsupport::random_phases;
using testsupport::random_real;
using testsupport::urand;

struct PropertyResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

inline PropertyResult bounded(const std::string& name, double worst,
                              double threshold, const std::string& extra = "") {
  std::ostringstream d;
  d << "worst " << worst << " vs " << threshold;
  if (!extra.empty()) d << "; " << extra;
  return PropertyResult{name, worst <= threshold, d.str()};
}

inline PropertyResult flag(const std::string& name, bool ok,
                           const std::string& detail) {
  return PropertyResult{name, ok, detail};
}

// ---- matkernel ----

inline std::vector<PropertyResult> matkernel_properties(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PropertyResult> out;

  double recon = 0.0, ortho = 0.0, order = 0.0, gauge = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 1 + static_cast<Index>(rng() % 16);
    const CMatrix h = random_hermitian(n, rng);
    const auto eig = hermitian_eigen(h);
    const CMatrix v = eig.vectors;
    const CMatrix lam = eig.values.cast<cxd>().asDiagonal();
    const double scale = std::max(1.0, h.norm());
    recon = std::max(recon, (v * lam * v.adjoint() - h).norm() / scale);
    ortho = std::max(
        ortho, max_abs(v.adjoint() * v - CMatrix::Identity(n, n)));
    for (Index j = 0; j + 1 < n; ++j) {
      order = std::max(order, eig.values(j + 1) - eig.values(j));
    }
    for (Index j = 0; j < n; ++j) {
      const auto col = v.col(j);
      const double big = col.cwiseAbs().maxCoeff();
      for (Index i = 0; i < n; ++i) {
        if (std::abs(col(i)) > 1e-12 * big) {
          gauge = std::max({gauge, std::abs(col(i).imag()), -col(i).real()});
          break;
        }
      }
    }
  }
  out.push_back(bounded("eigen reconstruction", recon, 1e-10));
  out.push_back(bounded("eigenvector orthonormality", ortho, 1e-12));
  out.push_back(bounded("eigenvalue descending order", order, 0.0));
  out.push_back(bounded("eigenvector gauge", gauge, 1e-12));

  bool split_ok = true;
  double proj_err = 0.0, kernel_err = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 7);
    const Index r = 1 + static_cast<Index>(rng() % n);
    const CMatrix f = random_complex(r, n, rng);
    const CMatrix h = f.adjoint() * f;
    const auto rs = rank_and_support(h);
    const CMatrix ker = nullspace(h);
    split_ok = split_ok && (rs.rank == std::min(r, n)) &&
               (rs.rank + ker.cols() == n);
    proj_err = std::max(proj_err,
                        max_abs(rs.projection * rs.projection - rs.projection));
    if (ker.cols() > 0) {
      kernel_err = std::max(kernel_err, max_abs(h * ker) / std::max(1.0, h.norm()));
    }
  }
  out.push_back(flag("rank plus nullity", split_ok, "rank(F*F) = min(r, n)"));
  out.push_back(bounded("support projection idempotent", proj_err, 1e-10));
  out.push_back(bounded("nullspace annihilation", kernel_err, 1e-8));

  bool psd_ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 1 + static_cast<Index>(rng() % 8);
    const Index r = 1 + static_cast<Index>(rng() % 8);
    const CMatrix f = random_complex(r, n, rng);
    psd_ok = psd_ok && is_psd(CMatrix(f.adjoint() * f));
  }
  out.push_back(flag("gram matrices are psd", psd_ok, "50 instances"));

  double dom = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 7);
    const CMatrix h = random_hermitian(n, rng);
    const double nrm = operator_norm(h);
    for (int probe = 0; probe < 50; ++probe) {
      CVector v = random_complex(n, 1, rng);
      v /= v.norm();
      const double q = std::abs((v.adjoint() * h * v)(0, 0));
      dom = std::max(dom, q - nrm);
    }
  }
  out.push_back(bounded("operator norm dominates quadratic form", dom, 1e-10));
  return out;
}

// ---- correlation ----

inline std::vector<PropertyResult> correlation_properties(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PropertyResult> out;

  // Factoring through a relative rank cut may truncate eigenvalue mass up
  // to eps_rank * ||X||, so that cut is the honest reconstruction envelope.
  double recon_excess = 0.0, unit_excess = 0.0, real_leak = 0.0;
  double fixture_recon = 0.0;
  const Tolerance tol;
  std::vector<CorrelationMatrix> pool;
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = 1 + static_cast<Index>(rng() % 8);
    const Index r = 1 + static_cast<Index>(rng() % n);
    pool.push_back(random_correlation(n, r, trial % 2 == 0, rng));
  }
  for (const auto& x : pool) {
    const Frame f = frame_factor(x);
    const double allowed = tol.eps_rank * operator_norm(x.matrix()) + 1e-12;
    recon_excess = std::max(recon_excess,
                            max_abs_diff(gram(f), x.matrix()) - allowed);
    for (Index j = 0; j < f.n(); ++j) {
      unit_excess = std::max(
          unit_excess, std::abs(f.vectors.col(j).norm() - 1.0) - allowed);
    }
    if (x.is_real()) {
      real_leak = std::max(real_leak, max_abs(f.vectors.imag().cast<cxd>()));
      if (!f.real) real_leak = std::max(real_leak, 1.0);
    }
  }
  for (const auto& x :
       {fixtures::x4(), fixtures::real3(), fixtures::f6_witness()}) {
    fixture_recon = std::max(fixture_recon,
                             max_abs_diff(gram(frame_factor(x)), x.matrix()));
  }
  out.push_back(bounded("frame reconstruction within the rank cut",
                        recon_excess, 0.0,
                        std::to_string(pool.size()) + " matrices"));
  out.push_back(bounded("frame vectors unit norm", unit_excess, 0.0));
  out.push_back(bounded("real input gives real frame", real_leak, 0.0));
  out.push_back(bounded("exact-rank frames reconstruct tightly",
                        fixture_recon, 1e-9));

  bool closed = true;
  double spectrum_drift = 0.0;
  std::string closed_detail = "schur, diagonal and permutation conjugation, convex combinations";
  for (int trial = 0; trial < 100 && closed; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 6);
    const auto a = random_correlation(n, 1 + static_cast<Index>(rng() % n),
                                      false, rng);
    const auto b = random_correlation(n, 1 + static_cast<Index>(rng() % n),
                                      false, rng);
    try {
      (void)schur_product(a, b);
      const auto dc = conjugate_diag(a, random_phases(n, rng));
      const auto pc = conjugate_perm(a, random_perm(n, rng));
      const double w = 0.2 + 0.6 * urand(rng);
      (void)convex_combine({{w, a}, {1.0 - w, b}});
      const RVector sa = hermitian_eigen(a.matrix()).values;
      spectrum_drift = std::max(
          spectrum_drift,
          (hermitian_eigen(dc.matrix()).values - sa).cwiseAbs().maxCoeff());
      spectrum_drift = std::max(
          spectrum_drift,
          (hermitian_eigen(pc.matrix()).values - sa).cwiseAbs().maxCoeff());
    } catch (const Error& e) {
      closed = false;
      closed_detail = std::string("instance failed validation: ") + e.what();
    }
  }
  out.push_back(flag("closure operations revalidate", closed, closed_detail));
  out.push_back(bounded("conjugation preserves spectrum", spectrum_drift, 1e-9));

  double row_imag = 0.0, row_mod = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 6);
    const auto x = random_correlation(n, n, false, rng);
    for (Index k = 0; k < n; ++k) {
      const auto rr = realify_row(x, k);
      for (Index j = 0; j < n; ++j) {
        const cxd v = rr.conjugated.matrix()(k, j);
        row_imag = std::max(row_imag, std::abs(v.imag()));
        row_mod = std::max(row_mod,
                           std::abs(v.real() - std::abs(x.matrix()(k, j))));
      }
    }
  }
  out.push_back(bounded("realified row is real", row_imag, 1e-12));
  out.push_back(bounded("realified row keeps moduli", row_mod, 1e-12));

  double split_err = 0.0, skew_diag = 0.0, herm_err = 0.0, equiv = 0.0;
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 6);
    const auto x = random_correlation(n, n, false, rng);
    const CMatrix s = skew_part(x);
    const auto re = real_part(x);
    split_err = std::max(split_err,
                         max_abs(re.matrix() + s - x.matrix()));
    skew_diag = std::max(skew_diag, s.diagonal().cwiseAbs().maxCoeff());
    herm_err = std::max(herm_err, max_abs(s - CMatrix(s.adjoint())));
    const auto p = random_perm(n, rng);
    const CMatrix left = skew_part(conjugate_perm(x, p));
    CMatrix right(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        right(p[static_cast<size_t>(i)], p[static_cast<size_t>(j)]) = s(i, j);
      }
    }
    equiv = std::max(equiv, max_abs(left - right));
  }
  out.push_back(bounded("real plus skew reassembles", split_err, 1e-14));
  out.push_back(bounded("skew part zero diagonal", skew_diag, 1e-14));
  out.push_back(bounded("skew part hermitian", herm_err, 1e-14));
  out.push_back(bounded("skew equivariant under permutation", equiv, 1e-12));
  return out;
}

// ---- extremality ----

inline std::vector<PropertyResult> extremality_properties(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PropertyResult> out;

  bool dims_ok = true;
  std::string dims_detail;
  for (Index n = 2; n <= 6; ++n) {
    const auto eye = validate(CMatrix::Identity(n, n));
    const Index dc = perturbation_space(eye, false).dimension();
    const Index dr = perturbation_space(eye, true).dimension();
    if (dc != n * n - n || dr != n * (n - 1) / 2) {
      dims_ok = false;
      dims_detail = "n = " + std::to_string(n) + " gave " + std::to_string(dc) +
                    " / " + std::to_string(dr);
    }
  }
  out.push_back(flag("identity perturbation dimensions", dims_ok,
                     dims_ok ? "n^2 - n complex, n(n-1)/2 real" : dims_detail));

  double herm = 0.0, diag = 0.0, supp = 0.0;
  bool steps_ok = true;
  double interior = 0.0, beyond = 0.0;
  int witnessed = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = 3 + static_cast<Index>(rng() % 3);
    const bool real = trial % 3 == 0;
    const auto x = random_correlation(n, n, real, rng);
    const auto rep = is_extreme(x, real);
    if (rep.is_extreme || !rep.witness) continue;
    ++witnessed;
    const CMatrix& y = *rep.witness;
    herm = std::max(herm, max_abs(y - CMatrix(y.adjoint())));
    diag = std::max(diag, y.diagonal().cwiseAbs().maxCoeff());
    const auto rs = rank_and_support(x.matrix());
    supp = std::max(supp,
                    (y - rs.projection * y * rs.projection).norm() / y.norm());
    const StepRange s = max_step(x, y);
    if (!(s.t_minus < 0.0 && s.t_plus > 0.0)) steps_ok = false;
    const auto mid = validate(x.matrix() + 0.5 * (s.t_minus + s.t_plus) * y);
    interior = std::max(interior, -min_eigenvalue(mid.matrix()));
    const Index r0 = rs.rank;
    for (double t : {s.t_minus, s.t_plus}) {
      const auto end = validate(x.matrix() + t * y);
      if (rank_and_support(end.matrix()).rank >= r0) steps_ok = false;
      if (is_psd(CMatrix(x.matrix() + 1.5 * t * y))) {
        beyond = std::max(beyond, 1.0);
      }
    }
  }
  out.push_back(bounded("witness hermitian", herm, 1e-10));
  out.push_back(bounded("witness zero diagonal", diag, 1e-10));
  out.push_back(bounded("witness supported on range", supp, 1e-7));
  out.push_back(flag("max step drops rank both ends", steps_ok,
                     std::to_string(witnessed) + " non-extreme instances"));
  out.push_back(bounded("interior of step stays psd", interior, 1e-9));
  out.push_back(bounded("beyond endpoints leaves the body", beyond, 0.0));

  double recon = 0.0, wsum_err = 0.0;
  bool leaves_ok = true, count_ok = true, theta3_rank1 = true;
  int total_terms = 0;
  for (Index n = 3; n <= 5; ++n) {
    for (int trial = 0; trial < 200; ++trial) {
      const bool real_input = trial % 4 == 0;
      const bool real_mode = real_input && trial % 8 == 0;
      const Index r = 1 + static_cast<Index>(rng() % n);
      const auto x = random_correlation(n, r, real_input, rng);
      const auto dec = decompose_extreme(x, real_mode);
      CMatrix acc = CMatrix::Zero(n, n);
      double wsum = 0.0;
      for (const auto& term : dec.terms) {
        acc += term.weight * term.matrix.matrix();
        wsum += term.weight;
        if (!is_extreme(term.matrix, real_mode).is_extreme) leaves_ok = false;
        if (n == 3 && !real_mode &&
            rank_and_support(term.matrix.matrix()).rank != 1) {
          theta3_rank1 = false;
        }
      }
      total_terms += static_cast<int>(dec.terms.size());
      recon = std::max(recon, max_abs(acc - x.matrix()));
      wsum_err = std::max(wsum_err, std::abs(wsum - 1.0));
      const Index rank = rank_and_support(x.matrix()).rank;
      if (static_cast<Index>(dec.terms.size()) > (Index(1) << rank)) {
        count_ok = false;
      }
    }
  }
  out.push_back(bounded("decomposition reconstruction", recon, 1e-8,
                        std::to_string(total_terms) + " leaves across 600 runs"));
  out.push_back(bounded("decomposition weights sum to 1", wsum_err, 1e-10));
  out.push_back(flag("decomposition leaves are extreme", leaves_ok, "re-verified"));
  out.push_back(flag("leaf count within 2^rank", count_ok, "600 runs"));
  out.push_back(flag("3x3 complex leaves are rank one", theta3_rank1,
                     "200 instances at n = 3"));

  bool r1_ok = true;
  for (Index n = 2; n <= 8; ++n) {
    const auto x = rank_one_matrix(random_phases(n, rng));
    const auto rep = is_extreme(x, false);
    r1_ok = r1_ok && rep.is_extreme && rep.rank == 1;
  }
  out.push_back(flag("rank one matrices are extreme", r1_ok, "n = 2..8"));
  return out;
}

// ---- clifford ----

inline std::vector<PropertyResult> clifford_properties(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PropertyResult> out;

  double anti = 0.0, sym = 0.0, orth = 0.0;
  for (Index r = 1; r <= 6; ++r) {
    const auto gens = build_generators(r);
    const RMatrix id = RMatrix::Identity(gens->dim, gens->dim);
    for (Index i = 0; i < r; ++i) {
      const RMatrix& gi = gens->generators[static_cast<size_t>(i)];
      sym = std::max(sym, (gi - RMatrix(gi.transpose())).cwiseAbs().maxCoeff());
      for (Index j = 0; j < r; ++j) {
        const RMatrix& gj = gens->generators[static_cast<size_t>(j)];
        const RMatrix lhs = gi * gj + gj * gi;
        const RMatrix want = i == j ? RMatrix(2.0 * id) : RMatrix::Zero(gens->dim, gens->dim);
        anti = std::max(anti, (lhs - want).cwiseAbs().maxCoeff());
      }
      orth = std::max(orth, (gi * gi - id).cwiseAbs().maxCoeff());
    }
  }
  out.push_back(bounded("generator anticommutation exact", anti, 0.0));
  out.push_back(bounded("generators symmetric exact", sym, 0.0));
  out.push_back(bounded("generators orthogonal exact", orth, 0.0));

  double trace_ip = 0.0;
  for (Index r = 1; r <= 6; ++r) {
    const auto gens = build_generators(r);
    for (int trial = 0; trial < 30; ++trial) {
      const RVector x = random_real(r, 1, rng);
      const RVector y = random_real(r, 1, rng);
      const double tr =
          (lambda_of(*gens, x) * lambda_of(*gens, y)).trace() /
          static_cast<double>(gens->dim);
      trace_ip = std::max(trace_ip, std::abs(tr - x.dot(y)));
    }
  }
  out.push_back(bounded("normalized trace gives inner product", trace_ip, 1e-12));

  double round_trip = 0.0, comp_unit = 0.0, comp_sym = 0.0;
  int realized = 0;
  for (Index r = 1; r <= 6; ++r) {
    for (int trial = 0; trial < 100; ++trial) {
      const Index n = r + static_cast<Index>(rng() % (9 - r));
      const auto x = testsupport::random_correlation_gapped(n, r, true, rng);
      const UnitaryTuple t = realize_real(x);
      const auto mm = moment_matrix(t);
      round_trip = std::max(round_trip,
                            max_abs_diff(mm.matrix.matrix(), x.matrix()));
      comp_unit = std::max(comp_unit, tuple_unitarity_error(t));
      for (const auto& v : t.unitaries) {
        comp_sym = std::max(comp_sym, max_abs(v - CMatrix(v.transpose())));
        comp_sym = std::max(comp_sym, max_abs(v - CMatrix(v.conjugate())));
      }
      ++realized;
    }
  }
  out.push_back(bounded("realization round trip", round_trip, 1e-10,
                        std::to_string(realized) + " realizations, r <= 6"));
  out.push_back(bounded("realization components unitary", comp_unit, 1e-13));
  out.push_back(bounded("realization components real symmetric", comp_sym, 0.0));
  return out;
}

// ---- moments ----

inline std::vector<PropertyResult> moments_properties(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PropertyResult> out;

  double scalar_err = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 6);
    const CVector z = random_phases(n, rng);
    UnitaryTuple t;
    t.k = 1;
    for (Index i = 0; i < n; ++i) {
      CMatrix v(1, 1);
      v(0, 0) = z(i);
      t.unitaries.push_back(v);
    }
    scalar_err = std::max(scalar_err,
                          max_abs_diff(moment_matrix(t).matrix.matrix(),
                                       rank_one_matrix(z).matrix()));
  }
  out.push_back(bounded("scalar tuples give rank one moments", scalar_err, 1e-14));

  const CMatrix u1 = haar_unitary(5, 42);
  const CMatrix u2 = haar_unitary(5, 42);
  const CMatrix u3 = haar_unitary(5, 43);
  double haar_unit = 0.0;
  for (int s = 0; s < 20; ++s) {
    const Index k = 1 + static_cast<Index>(rng() % 8);
    const CMatrix u = haar_unitary(k, rng());
    haar_unit = std::max(haar_unit,
                         max_abs(u.adjoint() * u - CMatrix::Identity(k, k)));
  }
  out.push_back(flag("haar determinism", (u1 - u2).norm() == 0.0 &&
                                             (u1 - u3).norm() > 1e-3,
                     "same seed identical, new seed fresh"));
  out.push_back(bounded("haar unitarity", haar_unit, 1e-13));

  cxd mean = 0.0;
  const Index mk = 4;
  for (int s = 0; s < 2000; ++s) {
    mean += haar_unitary(mk, 1000 + static_cast<std::uint64_t>(s)).trace() /
            static_cast<double>(mk);
  }
  mean /= 2000.0;
  out.push_back(bounded("haar mean trace vanishes", std::abs(mean), 0.03,
                        "2000 samples at k = 4, five sigma"));

  bool haar_rank = true;
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 4);
    const Index k = n + static_cast<Index>(rng() % 3);
    const auto mm = moment_matrix(haar_tuple(n, k, rng()));
    if (rank_and_support(mm.matrix.matrix()).rank != n) haar_rank = false;
  }
  out.push_back(flag("haar moment matrices have full rank", haar_rank,
                     "200 instances, k >= n"));

  double tensor_err = 0.0;
  for (int trial = 0; trial < 150; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 4);
    const Index ka = 1 + static_cast<Index>(rng() % 3);
    const Index kb = 1 + static_cast<Index>(rng() % 3);
    const auto a = haar_tuple(n, ka, rng());
    const auto b = haar_tuple(n, kb, rng());
    const auto lhs = moment_matrix(tensor_realize(a, b)).matrix;
    const auto rhs =
        schur_product(moment_matrix(a).matrix, moment_matrix(b).matrix);
    tensor_err = std::max(tensor_err, max_abs_diff(lhs.matrix(), rhs.matrix()));
  }
  out.push_back(bounded("tensor realizes schur products", tensor_err, 1e-10,
                        "150 instances"));

  double block_err = 0.0;
  const std::vector<std::vector<Rational>> weight_sets = {
      {Rational(1, 2), Rational(1, 2)},
      {Rational(1, 3), Rational(2, 3)},
      {Rational(1, 4), Rational(3, 4)},
      {Rational(1, 2), Rational(1, 3), Rational(1, 6)},
      {Rational(1, 4), Rational(1, 4), Rational(1, 2)}};
  for (int trial = 0; trial < 150; ++trial) {
    const auto& ws = weight_sets[static_cast<size_t>(trial) % weight_sets.size()];
    const Index n = 2 + static_cast<Index>(rng() % 3);
    std::vector<std::pair<Rational, UnitaryTuple>> terms;
    std::vector<std::pair<double, CorrelationMatrix>> convex;
    for (const auto& w : ws) {
      const Index k = 1 + static_cast<Index>(rng() % 3);
      auto t = haar_tuple(n, k, rng());
      convex.push_back({w.value(), moment_matrix(t).matrix});
      terms.push_back({w, std::move(t)});
    }
    const auto lhs = moment_matrix(block_convex_realize(terms)).matrix;
    const auto rhs = convex_combine(convex);
    block_err = std::max(block_err, max_abs_diff(lhs.matrix(), rhs.matrix()));
  }
  out.push_back(bounded("block realizes convex combinations", block_err, 1e-10,
                        "150 instances"));

  double fixture_kernel = 0.0;
  {
    const auto t = realize_real(fixtures::f6_witness());
    for (const auto& v : fixtures::f6_kernel()) {
      fixture_kernel = std::max(fixture_kernel, kernel_relation_residual(t, v));
    }
  }
  out.push_back(bounded("distinguished kernel relations", fixture_kernel, 1e-10));

  // ||sum c_i V_i||_op <= ||.||_F = sqrt(k c* X' c) at the realized moment
  // matrix X', so the residual is enveloped by the quadratic form.
  double numeric_kernel = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 4 + static_cast<Index>(rng() % 3);
    const Index r = 2 + static_cast<Index>(rng() % 2);
    const auto x = random_correlation(n, r, true, rng);
    const auto t = realize_real(x);
    const CMatrix realized = moment_matrix(t).matrix.matrix();
    const CMatrix ker = nullspace(x.matrix());
    for (Index j = 0; j < ker.cols(); ++j) {
      const CVector c = ker.col(j);
      const double form =
          std::abs((c.adjoint() * realized * c)(0, 0).real());
      const double allowed =
          std::sqrt(form * static_cast<double>(t.k)) + 1e-8;
      numeric_kernel = std::max(
          numeric_kernel, kernel_relation_residual(t, c) - allowed);
    }
  }
  out.push_back(bounded("numerical kernel relations", numeric_kernel, 0.0,
                        "residual within the Frobenius envelope"));
  return out;
}

// ---- bounds ----

/// Direct permutation-group oracle: average the matrices keeping the block
/// indexed by the first three images over all permutations whose first three
/// images increase.
inline std::pair<unsigned long long, CMatrix> sigma_average_oracle(
    const CMatrix& x) {
  const Index n = x.rows();
  std::vector<Index> p(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) p[static_cast<size_t>(i)] = i;
  CMatrix acc = CMatrix::Zero(n, n);
  unsigned long long count = 0;
  do {
    if (p[0] < p[1] && p[1] < p[2]) {
      ++count;
      CMatrix term = CMatrix::Identity(n, n);
      const Index t[3] = {p[0], p[1], p[2]};
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) term(t[i], t[j]) = x(t[i], t[j]);
      }
      acc += term;
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return {count, CMatrix(acc / static_cast<double>(count))};
}

inline std::vector<PropertyResult> bounds_properties(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PropertyResult> out;

  double identity_res = 0.0, oracle_err = 0.0;
  bool group_ok = true;
  for (Index n = 3; n <= 7; ++n) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto x = random_correlation(n, 1 + static_cast<Index>(rng() % n),
                                        trial % 2 == 0, rng);
      const auto avg = sigma_average(x);
      identity_res = std::max(identity_res, avg.identity_residual);
      if (trial < 5) {
        const auto [count, oracle] = sigma_average_oracle(x.matrix());
        if (count != avg.group_size) group_ok = false;
        oracle_err = std::max(oracle_err,
                              max_abs_diff(oracle, avg.averaged.matrix()));
      }
    }
  }
  out.push_back(bounded("averaging identity", identity_res, 1e-12,
                        "50 instances per n in 3..7"));
  out.push_back(bounded("averaging matches permutation oracle", oracle_err,
                        1e-12, "full enumeration"));
  out.push_back(flag("averaging group size", group_ok, "n!/6 exactly"));

  {
    bool vals_ok = true;
    std::ostringstream detail;
    const double expected[] = {1.0, 0.5, 0.3, 0.2, 6.0 / 42.0};
    for (Index n = 3; n <= 7; ++n) {
      std::mt19937_64 r2(seed + static_cast<std::uint64_t>(n));
      const auto x = random_correlation(n, n, false, r2);
      const auto cert = averaging_bound(x);
      const double want = expected[n - 3];
      if (!cert.bound_c || *cert.bound_c != want || !cert.bound_a ||
          *cert.bound_a != want) {
        vals_ok = false;
        detail << "n = " << n << " gave "
               << (cert.bound_c ? *cert.bound_c : -1.0) << "; ";
      }
    }
    out.push_back(flag("averaging bound values exact", vals_ok,
                       vals_ok ? "1, 1/2, 3/10, 1/5, 1/7" : detail.str()));
  }

  bool shift_ok = true;
  double shift_recon = 0.0;
  std::string shift_detail = "spiked family oracle and domination";
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 3 + static_cast<Index>(rng() % 4);
    const auto x = random_correlation(n, 1 + static_cast<Index>(rng() % n),
                                      trial % 2 == 0, rng);
    const auto es = eigen_shift_bound(x);
    const auto av = averaging_bound(x);
    if (!es.bound_c || !av.bound_c || *es.bound_c < *av.bound_c - 1e-15 ||
        *es.bound_c > 1.0 + 1e-15) {
      shift_ok = false;
      shift_detail = "domination failed";
    }
    if (es.lambda0 && es.shifted) {
      const CMatrix back = (1.0 - *es.lambda0) * es.shifted->matrix() +
                           *es.lambda0 * CMatrix::Identity(n, n);
      shift_recon = std::max(shift_recon, max_abs(back - x.matrix()));
    }
  }
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 4 + static_cast<Index>(rng() % 3);
    const double s = 0.2 + 0.6 * urand(rng);
    CMatrix m = (1.0 - s) * CMatrix::Identity(n, n) +
                s * CMatrix::Ones(n, n);
    const auto x = validate(std::move(m));
    const auto es = eigen_shift_bound(x);
    const double t = 6.0 / (static_cast<double>(n) * n - n);
    const double want = std::min(1.0, t / s);
    if (!es.lambda0 || std::abs(*es.lambda0 - (1.0 - s)) > 1e-12 ||
        !es.bound_c || std::abs(*es.bound_c - want) > 1e-12) {
      shift_ok = false;
      shift_detail = "spiked oracle failed";
    }
  }
  out.push_back(flag("eigen shift bound", shift_ok, shift_detail));
  out.push_back(bounded("eigen shift reconstruction", shift_recon, 1e-12));

  double invariance = 0.0;
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = 3 + static_cast<Index>(rng() % 3);
    const auto x = random_correlation(n, n, false, rng);
    BoundCertificate direct, conjugated;
    bool both = true;
    try {
      direct = skew_reduction_bound(x);
      conjugated = skew_reduction_bound(conjugate_diag(x, random_phases(n, rng)));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SupportTooLarge) throw;
      both = false;
    }
    if (both && direct.bound_a && conjugated.bound_a) {
      invariance = std::max(invariance,
                            std::abs(*direct.bound_a - *conjugated.bound_a));
    }
  }
  out.push_back(bounded("skew bound invariant under phases", invariance, 1e-12));

  bool real_one = true;
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 3 + static_cast<Index>(rng() % 4);
    const auto x = random_correlation(n, 1 + static_cast<Index>(rng() % n),
                                      true, rng);
    const auto cert = skew_reduction_bound(x);
    if (!cert.bound_a || *cert.bound_a != 1.0) real_one = false;
    if (n <= 5 && (!cert.bound_c || *cert.bound_c != 1.0)) real_one = false;
    if (n > 5 && cert.bound_c.has_value()) real_one = false;
  }
  out.push_back(flag("real matrices certify scale one", real_one,
                     "bound_a = 1 always, bound_c = 1 only for n <= 5"));

  double soundness = 0.0;
  bool sound_ok = true;
  std::string sound_detail;
  std::vector<CorrelationMatrix> pool;
  pool.push_back(fixtures::x4());
  pool.push_back(fixtures::real3());
  pool.push_back(fixtures::f6_witness());
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 3 + static_cast<Index>(rng() % 4);
    pool.push_back(random_correlation(n, 1 + static_cast<Index>(rng() % n),
                                      trial % 2 == 0, rng));
  }
  for (const auto& x : pool) {
    const auto cert = best_lower_bound(x);
    const auto chk = verify_certificate(cert, x);
    soundness = std::max(soundness, chk.max_error);
    if (!chk.ok) {
      sound_ok = false;
      sound_detail = chk.notes.empty() ? "no notes" : chk.notes.front();
    }
    double best_part = 0.0;
    for (const auto& p : cert.parts) {
      if (p.bound_a) best_part = std::max(best_part, *p.bound_a);
    }
    if (!cert.bound_a || std::abs(*cert.bound_a - best_part) > 1e-15) {
      sound_ok = false;
      sound_detail = "combined bound is not the max of its parts";
    }
  }
  out.push_back(flag("certificates re-verify", sound_ok,
                     sound_ok ? std::to_string(pool.size()) + " certificates"
                              : sound_detail));
  out.push_back(bounded("certificate re-verification error", soundness, 1e-8));

  {
    auto cert = best_lower_bound(fixtures::x4());
    cert.bound_a = *cert.bound_a + 0.01;
    const auto chk = verify_certificate(cert, fixtures::x4());
    out.push_back(flag("tampered certificate rejected", !chk.ok,
                       "inflated bound_a must fail"));
  }
  return out;
}

inline std::vector<PropertyResult> all_properties(std::uint64_t seed) {
  std::vector<PropertyResult> out;
  auto take = [&out](const char* module, std::vector<PropertyResult> in) {
    for (auto& r : in) {
      r.name = std::string(module) + ": " + r.name;
      out.push_back(std::move(r));
    }
  };
  take("matkernel", matkernel_properties(seed + 1));
  take("correlation", correlation_properties(seed + 2));
  take("extremality", extremality_properties(seed + 3));
  take("clifford", clifford_properties(seed + 4));
  take("moments", moments_properties(seed + 5));
  take("bounds", bounds_properties(seed + 6));
  return out;
}

}  // namespace testprops
