#pragma once

#include <string>

#include <json.hpp>

#include "kirchhoff/linalg.hpp"

namespace kirchhoff::cli {

using Json = nlohmann::ordered_json;

/// Pretty JSON with every float written as %.17g, so identical reports are
/// byte-identical. Non-finite floats become null.
std::string dump_json(const Json& value);

/// Top-level scalars as aligned key/value lines, arrays of objects as tables.
std::string dump_table(const Json& value);

Json complex_json(Complex z);
Json matrix_json(const Matrix& m);

}  // namespace kirchhoff::cli
