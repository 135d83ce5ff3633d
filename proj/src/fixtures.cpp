#include "unimoments/fixtures.hpp"

#include <cmath>

#include "unimoments/extremality.hpp"

namespace unimoments::fixtures {

CorrelationMatrix x4(const Tolerance& tol) {
  const double s = 1.0 / std::sqrt(2.0);
  const cxd i(0.0, 1.0);
  CMatrix m(4, 4);
  m << 1.0, 0.0, s, i * s,
       0.0, 1.0, s, s,
       s, s, 1.0, 0.5 + 0.5 * i,
       -i * s, s, 0.5 - 0.5 * i, 1.0;
  return validate(std::move(m), tol);
}

CorrelationMatrix real3(const Tolerance& tol) {
  const double s = 1.0 / std::sqrt(2.0);
  CMatrix m(3, 3);
  m << 1.0, 0.0, s,
       0.0, 1.0, s,
       s, s, 1.0;
  return validate(std::move(m), tol);
}

std::pair<CorrelationMatrix, CorrelationMatrix> real3_split(
    const Tolerance& tol) {
  const double s = 1.0 / std::sqrt(2.0);
  const cxd i(0.0, 1.0);
  CVector z(3);
  z << cxd(1.0, 0.0), i, s * (1.0 + i);
  CorrelationMatrix first = rank_one_matrix(z, tol);
  CorrelationMatrix second = rank_one_matrix(CVector(z.conjugate()), tol);
  return {first, second};
}

CorrelationMatrix f6_witness(const Tolerance& tol) {
  const double h = 1.0 / std::sqrt(2.0);
  const double t = 1.0 / std::sqrt(3.0);
  const double w = 2.0 / std::sqrt(6.0);
  CMatrix m(6, 6);
  m << 1.0, 0.0, 0.0, h, 0.0, t,
       0.0, 1.0, 0.0, h, h, t,
       0.0, 0.0, 1.0, 0.0, h, t,
       h, h, 0.0, 1.0, 0.5, w,
       0.0, h, h, 0.5, 1.0, w,
       t, t, t, w, w, 1.0;
  return validate(std::move(m), tol);
}

std::array<CVector, 3> f6_kernel() {
  const double h = 1.0 / std::sqrt(2.0);
  const double t = 1.0 / std::sqrt(3.0);
  CVector v1(6), v2(6), v3(6);
  v1 << h, h, 0.0, -1.0, 0.0, 0.0;
  v2 << 0.0, h, h, 0.0, -1.0, 0.0;
  v3 << t, t, t, 0.0, 0.0, -1.0;
  return {v1, v2, v3};
}

}  // namespace unimoments::fixtures
