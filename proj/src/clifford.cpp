#include "unimoments/clifford.hpp"

#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "unimoments/matkernel.hpp"

namespace unimoments {

namespace {

std::mutex cache_mutex;
std::map<Index, std::shared_ptr<const CliffordGenerators>>& cache() {
  static std::map<Index, std::shared_ptr<const CliffordGenerators>> c;
  return c;
}

}  // namespace

std::shared_ptr<const CliffordGenerators> build_generators(Index r, Index cap) {
  if (r < 1) {
    fail(ErrorKind::PreconditionViolated, "build_generators: r must be >= 1");
  }
  if (r > cap) {
    fail(ErrorKind::DimensionCap,
         "build_generators: r = " + std::to_string(r) + " exceeds cap " +
             std::to_string(cap) + " (dimension 2^r)");
  }
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache().find(r);
  if (it != cache().end()) return it->second;

  RMatrix u(2, 2), v(2, 2), id2 = RMatrix::Identity(2, 2);
  u << 1, 0, 0, -1;
  v << 0, 1, 1, 0;
  auto gens = std::make_shared<CliffordGenerators>();
  gens->r = r;
  gens->dim = Index(1) << r;
  for (Index i = 1; i <= r; ++i) {
    RMatrix g = RMatrix::Identity(1, 1);
    for (Index p = 0; p < i - 1; ++p) g = kron(g, u);
    g = kron(g, v);
    for (Index p = 0; p < r - i; ++p) g = kron(g, id2);
    gens->generators.push_back(std::move(g));
  }
  cache()[r] = gens;
  return gens;
}

RMatrix lambda_of(const CliffordGenerators& gens, const RVector& x) {
  if (x.size() != gens.r) {
    fail(ErrorKind::LengthMismatch,
         "lambda_of: vector length " + std::to_string(x.size()) +
             " does not match r = " + std::to_string(gens.r));
  }
  RMatrix out = RMatrix::Zero(gens.dim, gens.dim);
  for (Index i = 0; i < gens.r; ++i) out += x(i) * gens.generators[static_cast<size_t>(i)];
  return out;
}

UnitaryTuple realize_real(const CorrelationMatrix& x, const Tolerance& tol,
                          Index cap) {
  if (!x.is_real()) {
    fail(ErrorKind::NotReal, "realize_real: matrix has complex entries");
  }
  const Frame f = frame_factor(x, tol);
  const Index r = f.r();
  if (r > cap) {
    fail(ErrorKind::DimensionCap,
         "realize_real: rank " + std::to_string(r) + " exceeds cap " +
             std::to_string(cap) + " (dimension 2^r)");
  }
  const auto gens = build_generators(r, cap);
  const RMatrix vecs = f.real_vectors();
  UnitaryTuple t;
  t.k = gens->dim;
  t.unitaries.reserve(static_cast<size_t>(x.n()));
  for (Index j = 0; j < x.n(); ++j) {
    t.unitaries.push_back(lambda_of(*gens, vecs.col(j)).cast<cxd>());
  }
  return t;
}

}  // namespace unimoments
