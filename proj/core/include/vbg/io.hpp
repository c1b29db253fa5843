#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vbg/vbgroupoid.hpp"

namespace vbg::io {

using json = nlohmann::json;

// Every reader throws Error("MalformedInput", ...) on schema problems;
// mathematical validity is left to the validators.

json to_json(const FiniteGroupoid& G);
FiniteGroupoid groupoid_from_json(const json& j);

// Scalars travel as exact strings ("-3/4", residues as "2"); bare JSON
// integers are accepted on input.
json to_json(const Scalar& s);
Scalar scalar_from_json(const json& j, Field f);

// List of rows. Shapes are checked against the expected dimensions.
json to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols, Field f);

json to_json(const FiniteGroupoid& G, const VectorBundle& E);
// A missing "field" falls back to the given default.
VectorBundle bundle_from_json(const json& j, const FiniteGroupoid& G, Field fallback = {});

json to_json(const FiniteGroupoid& G, const VectorCochain& x);
VectorCochain vector_cochain_from_json(const json& j, const FiniteGroupoid& G, const VectorBundle& E);
json to_json(const FiniteGroupoid& G, const TransformationCochain& w);
TransformationCochain transformation_from_json(const json& j, const FiniteGroupoid& G, const VectorBundle& E,
                                               const VectorBundle& C);

json to_json(const QuasiAction& d);
QuasiAction quasiaction_from_json(const json& j, const FiniteGroupoid& G, Field fallback = {});

json to_json(const Ruth2& r);
Ruth2 ruth2_from_json(const json& j, Field fallback = {});

json to_json(const VBGroupoid& v);
VBGroupoid vbg_from_json(const json& j, Field fallback = {});

json to_json(const FiniteGroupoid& G, const HorizontalLift& h);
HorizontalLift lift_from_json(const json& j, const VBGroupoid& v);

json to_json(const std::vector<Violation>& vs);

enum class Kind { groupoid, quasiaction, ruth2, vbgroupoid, unknown };
// Recognized by the keys present: "stilde", "partial", "maps", "objects".
Kind detect_kind(const json& j);
std::string kind_name(Kind k);

json read_file(const std::string& path);
void write_file(const std::string& path, const json& j);

}  // namespace vbg::io
