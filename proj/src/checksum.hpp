#pragma once

#include <json.hpp>

#include <string>

namespace discalign::detail {

// SHA-256 (hex) of the compact, key-sorted serialization of `doc` without its
// "checksum" member. Matches tools/stamp_checksum.py.
std::string data_checksum(const nlohmann::json& doc);

// Throws SemanticError when the stored checksum is missing or stale.
void verify_checksum(const nlohmann::json& doc, const std::string& what);

// Embedded copies of data/*.json, generated at configure time.
extern const char* const kBuiltinTaxonomyJson;
extern const char* const kBuiltinGridJson;

}  // namespace discalign::detail
