#pragma once

#include <json.hpp>

#include <string>

#include "unimoments/bounds.hpp"
#include "unimoments/correlation.hpp"
#include "unimoments/extremality.hpp"
#include "unimoments/moments.hpp"
#include "unimoments/types.hpp"

namespace unimoments::io {

// Insertion-ordered so emitted documents are stable byte for byte.
using json = nlohmann::ordered_json;

json complex_to_json(cxd z);
cxd complex_from_json(const json& j);

/// {"n": n, "entries": [[[re, im], ...], ...]} with row-major entries.
json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);

json vector_to_json(const CVector& v);
CVector vector_from_json(const json& j);

json frame_to_json(const Frame& f);

/// {"k": k, "unitaries": [matrix, ...]}.
json tuple_to_json(const UnitaryTuple& t);
UnitaryTuple tuple_from_json(const json& j);

json decomposition_to_json(const ExtremeDecomposition& d);
json certificate_to_json(const BoundCertificate& c);
json refutation_to_json(const RefutationCertificate& c);
json check_to_json(const CertificateCheck& c);

/// Reads and parses a whole JSON file; IoError when unreadable, ParseError
/// when malformed.
json load_json(const std::string& path);
CMatrix load_matrix(const std::string& path);

}  // namespace unimoments::io
