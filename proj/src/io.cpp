#include "unimoments/io.hpp"

#include <fstream>
#include <sstream>
#include <utility>

namespace unimoments {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotHermitian: return "not_hermitian";
    case ErrorKind::NotUnitDiagonal: return "not_unit_diagonal";
    case ErrorKind::NotPSD: return "not_psd";
    case ErrorKind::DimensionMismatch: return "dimension_mismatch";
    case ErrorKind::LengthMismatch: return "length_mismatch";
    case ErrorKind::NotUnimodular: return "not_unimodular";
    case ErrorKind::NotPermutation: return "not_permutation";
    case ErrorKind::WeightsNotNormalized: return "weights_not_normalized";
    case ErrorKind::DegenerateDirection: return "degenerate_direction";
    case ErrorKind::NotReal: return "not_real";
    case ErrorKind::ZeroVector: return "zero_vector";
    case ErrorKind::WrongInput: return "wrong_input";
    case ErrorKind::SupportTooLarge: return "support_too_large";
    case ErrorKind::DimensionTooSmall: return "dimension_too_small";
    case ErrorKind::PreconditionViolated: return "precondition_violated";
    case ErrorKind::DimensionCap: return "dimension_cap";
    case ErrorKind::SizeOverflow: return "size_overflow";
    case ErrorKind::IoError: return "io_error";
    case ErrorKind::ParseError: return "parse_error";
    case ErrorKind::NoConvergence: return "no_convergence";
    case ErrorKind::RecursionOverflow: return "recursion_overflow";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

namespace io {

json complex_to_json(cxd z) { return json::array({z.real(), z.imag()}); }

cxd complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    fail(ErrorKind::ParseError,
         "complex entry must be a two-element number array");
  }
  return cxd(j[0].get<double>(), j[1].get<double>());
}

json matrix_to_json(const CMatrix& m) {
  json entries = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      row.push_back(complex_to_json(m(i, j)));
    }
    entries.push_back(std::move(row));
  }
  json out;
  out["n"] = m.rows();
  out["entries"] = std::move(entries);
  return out;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("entries")) {
    fail(ErrorKind::ParseError,
         "matrix document must be an object with \"n\" and \"entries\"");
  }
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1) {
    fail(ErrorKind::ParseError, "\"n\" must be a positive integer");
  }
  const Index n = j["n"].get<Index>();
  const json& entries = j["entries"];
  if (!entries.is_array() || static_cast<Index>(entries.size()) != n) {
    fail(ErrorKind::ParseError, "\"entries\" must hold exactly n rows");
  }
  CMatrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    const json& row = entries[static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != n) {
      fail(ErrorKind::ParseError,
           "row " + std::to_string(i) + " must hold exactly n entries");
    }
    for (Index k = 0; k < n; ++k) {
      m(i, k) = complex_from_json(row[static_cast<size_t>(k)]);
    }
  }
  return m;
}

json vector_to_json(const CVector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

CVector vector_from_json(const json& j) {
  if (!j.is_array()) {
    fail(ErrorKind::ParseError, "vector must be an array");
  }
  CVector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) {
    v(i) = complex_from_json(j[static_cast<size_t>(i)]);
  }
  return v;
}

json frame_to_json(const Frame& f) {
  json vectors = json::array();
  for (Index j = 0; j < f.n(); ++j) {
    vectors.push_back(vector_to_json(f.vectors.col(j)));
  }
  json out;
  out["r"] = f.r();
  out["n"] = f.n();
  out["real"] = f.real;
  out["vectors"] = std::move(vectors);
  return out;
}

json tuple_to_json(const UnitaryTuple& t) {
  json unitaries = json::array();
  for (const auto& v : t.unitaries) unitaries.push_back(matrix_to_json(v));
  json out;
  out["k"] = t.k;
  out["unitaries"] = std::move(unitaries);
  return out;
}

UnitaryTuple tuple_from_json(const json& j) {
  if (!j.is_object() || !j.contains("k") || !j.contains("unitaries")) {
    fail(ErrorKind::ParseError,
         "tuple document must be an object with \"k\" and \"unitaries\"");
  }
  if (!j["k"].is_number_integer() || j["k"].get<long long>() < 1) {
    fail(ErrorKind::ParseError, "\"k\" must be a positive integer");
  }
  UnitaryTuple t;
  t.k = j["k"].get<Index>();
  const json& us = j["unitaries"];
  if (!us.is_array() || us.empty()) {
    fail(ErrorKind::ParseError, "\"unitaries\" must be a nonempty array");
  }
  for (const auto& u : us) {
    CMatrix m = matrix_from_json(u);
    if (m.rows() != t.k) {
      fail(ErrorKind::ParseError, "tuple component size does not match k");
    }
    t.unitaries.push_back(std::move(m));
  }
  return t;
}

json decomposition_to_json(const ExtremeDecomposition& d) {
  json terms = json::array();
  for (const auto& term : d.terms) {
    json t;
    t["weight"] = term.weight;
    t["matrix"] = matrix_to_json(term.matrix.matrix());
    terms.push_back(std::move(t));
  }
  json out;
  out["terms"] = std::move(terms);
  return out;
}

namespace {

json skew_candidate_to_json(const SkewCandidate& c) {
  json out;
  out["row"] = c.row;
  out["phases"] = vector_to_json(c.phases);
  out["zero_skew"] = c.zero_skew;
  if (c.zero_skew) {
    out["skew_norm"] = 0.0;
    out["d"] = nullptr;  // infinite; never used in arithmetic
  } else {
    out["skew_norm"] = c.skew_norm;
    out["d"] = c.d;
  }
  out["support"] = c.support;
  out["usable"] = c.usable;
  out["bound"] = c.bound;
  return out;
}

}  // namespace

json certificate_to_json(const BoundCertificate& c) {
  json out;
  out["kind"] = bound_kind_name(c.kind);
  out["n"] = c.n;
  out["bound_c"] = c.bound_c ? json(*c.bound_c) : json(nullptr);
  out["bound_a"] = c.bound_a ? json(*c.bound_a) : json(nullptr);
  json evidence;
  switch (c.kind) {
    case BoundKind::averaging: {
      if (c.average) {
        evidence["group_size"] = c.average->group_size;
        evidence["identity_residual"] = c.average->identity_residual;
        evidence["averaged"] = matrix_to_json(c.average->averaged.matrix());
      }
      break;
    }
    case BoundKind::eigen_shift: {
      if (c.lambda0) evidence["lambda0"] = *c.lambda0;
      if (c.shifted) evidence["shifted"] = matrix_to_json(c.shifted->matrix());
      break;
    }
    case BoundKind::skew_reduction: {
      json cands = json::array();
      for (const auto& cand : c.candidates) {
        cands.push_back(skew_candidate_to_json(cand));
      }
      evidence["candidates"] = std::move(cands);
      if (c.winner) evidence["winner"] = *c.winner;
      break;
    }
    case BoundKind::combined: {
      json parts = json::array();
      for (const auto& p : c.parts) parts.push_back(certificate_to_json(p));
      evidence["parts"] = std::move(parts);
      if (c.winner_c) evidence["winner_c"] = *c.winner_c;
      if (c.winner_a) evidence["winner_a"] = *c.winner_a;
      break;
    }
  }
  out["evidence"] = std::move(evidence);
  return out;
}

json refutation_to_json(const RefutationCertificate& c) {
  json relations = json::array();
  for (const auto& rel : c.relations) {
    json r;
    r["relation"] = rel.relation;
    r["vector"] = vector_to_json(rel.vector);
    r["matrix_residual"] = rel.matrix_residual;
    relations.push_back(std::move(r));
  }
  json cases = json::array();
  for (const auto& sc : c.cases) {
    json s;
    s["s1"] = sc.s1;
    s["s3"] = sc.s3;
    s["zeta6_over_zeta2"] = complex_to_json(sc.zeta6_over_zeta2);
    s["abs_zeta6"] = sc.abs_zeta6;
    cases.push_back(std::move(s));
  }
  json out;
  out["relations"] = std::move(relations);
  out["cases"] = std::move(cases);
  out["min_deviation"] = c.min_deviation;
  out["refuted"] = c.refuted;
  return out;
}

json check_to_json(const CertificateCheck& c) {
  json out;
  out["ok"] = c.ok;
  out["max_error"] = c.max_error;
  out["notes"] = c.notes;
  return out;
}

json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorKind::IoError, "cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    fail(ErrorKind::IoError, "cannot read " + path);
  }
  try {
    return json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::ParseError, std::string("invalid JSON in ") + path + ": " +
                                    e.what());
  }
}

CMatrix load_matrix(const std::string& path) {
  return matrix_from_json(load_json(path));
}

}  // namespace io
}  // namespace unimoments
