#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "csl/complex_matrix.hpp"
#include "csl/scalar_poly.hpp"

namespace csl {

using Json = nlohmann::json;

/// {"n": n, "re": [[..]], "im": [[..]]}, arrays row-major.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

/// Root lists as arrays of [re, im] pairs.
Json roots_to_json(const RootList& roots);
RootList roots_from_json(const Json& j);

/// Canonical serialization: UTF-8, object keys sorted, floats rendered with
/// 17 significant digits (std::to_chars, locale-free). Log checksums are
/// computed over this form, so it must never change shape.
std::string canonical_dump(const Json& j);

/// CRC32C (Castagnoli), as used to seal every log line.
std::uint32_t crc32c(const std::string& bytes);
std::string crc32c_hex(const std::string& bytes);

/// Canonical line with a trailing "crc32c" field appended after all other
/// keys. parse_checked_line verifies and strips the checksum field.
std::string checked_line(const Json& j);
Json parse_checked_line(const std::string& line, std::size_t record_index);

}  // namespace csl
