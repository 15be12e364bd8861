#pragma once

#include <string>

#include <json.hpp>

#include "hypermat/hypermatrix.hpp"

namespace hypermat {

using json = nlohmann::json;

// Canonical interchange format:
//   {"shape":[n1,...,nm],"re":[...],"im":[...]}
// with row-major entries. "im" is omitted on output when every imaginary
// part is zero and optional on input.

json to_json(const Hypermatrix& a);
Hypermatrix hypermatrix_from_json(const json& j);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Dump with every floating value in round-trip form.
std::string dump_json(const json& j, int indent = -1);

json complex_to_json(cplx z);
cplx complex_from_json(const json& j);

Hypermatrix read_hypermatrix_file(const std::string& path);
json read_json_file(const std::string& path);

}  // namespace hypermat
