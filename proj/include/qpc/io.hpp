// JSON file format. Scalars are strings "a" or "a/b"; every document carries
// "schema_version" and "kind". Embedded objects (the source of a map, say)
// omit both.
//
//   module            {"rank": r, "torsion": [e, ...], "psi": M}   free part first
//                     {"orders": [e, ...], "psi": M}                 any order, 0 = free
//                     {"line": j}
//   complex           {"levels": {"n": module}, "diffs": {"n": M}}   d_n : X_n -> X_{n-1}
//   periodic_complex  {"period": N, "twist_weight": w, "levels": [N modules],
//                      "diffs": [d_1 .. d_{N-1}], "wrap": M}
//   map               {"source": module, "target": module, "matrix": M}
//   chain_map         {"source": complex, "target": complex, "components": {"n": M}}
//   periodic_map      {"source": .., "target": .., "components": [N matrices]}
//   chain_map_to_periodic  {"source": complex, "target": periodic_complex, "components": {"n": M}}
//   family            {"members": [module, ...], "labels": [string, ...]}
//
// Matrices are arrays of rows, target x source.
#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "qpc/complex.hpp"

namespace qpc::io {

using Json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

/// Malformed input; the message names the file and the position (line and
/// column for syntax errors, a JSON pointer otherwise).
class InputError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

std::string format_scalar(const PLocal& x);
PLocal parse_scalar(const Json& j, Prime p, const std::string& path);

Json to_json(const Matrix& m);
Json to_json(const AdamsModule& m);
Json to_json(const BoundedComplex& x);
Json to_json(const PeriodicComplex& x);
Json to_json(const AdamsMap& f);
Json to_json(const ChainMap& f);
Json to_json(const PeriodicMap& f);
Json to_json(const ChainMapToPeriodic& f);
Json to_json(const DetectionFamily& f);

Matrix matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols, Prime p, const std::string& path);
AdamsModule module_from_json(const Json& j, Prime p, const std::string& path);
BoundedComplex bounded_from_json(const Json& j, Prime p, const std::string& path);
PeriodicComplex periodic_from_json(const Json& j, Prime p, const std::string& path);
AdamsMap map_from_json(const Json& j, Prime p, const std::string& path);
ChainMap chain_map_from_json(const Json& j, Prime p, const std::string& path);
PeriodicMap periodic_map_from_json(const Json& j, Prime p, const std::string& path);
ChainMapToPeriodic chain_map_to_periodic_from_json(const Json& j, Prime p, const std::string& path);
DetectionFamily family_from_json(const Json& j, Prime p, const std::string& path);

/// Wraps a serialized object as a document of the given kind.
Json document(const std::string& kind, Prime p, const Json& body);
template <class T>
Json document(const std::string& kind, Prime p, const T& value) {
    return document(kind, p, to_json(value));
}

struct Document {
    std::string name;  // file name used in diagnostics
    std::string kind;
    std::optional<long> p;
    Json body;  // the object without schema_version, kind and p
};

Document parse_document(const std::string& text, const std::string& name);
Document read_document(const std::string& path);

/// Prime for decoding: the document's own if present, which must agree with
/// the requested one when both are given.
Prime document_prime(const Document& d, std::optional<long> requested);

/// Decodes the body of a document of the expected kind; errors are
/// reported as InputError against the document name.
BoundedComplex as_bounded(const Document& d, Prime p);
PeriodicComplex as_periodic(const Document& d, Prime p);
AdamsModule as_module(const Document& d, Prime p);
ChainMap as_chain_map(const Document& d, Prime p);
PeriodicMap as_periodic_map(const Document& d, Prime p);
ChainMapToPeriodic as_chain_map_to_periodic(const Document& d, Prime p);
DetectionFamily as_family(const Document& d, Prime p);

/// Two-space indented JSON with a trailing newline.
std::string dump(const Json& j);

}  // namespace qpc::io
