#pragma once

// Tuple bank files: versioned JSON carrying the generation parameters, the
// seed fingerprint, decimal scalars and 17-significant-digit points.

#include <filesystem>
#include <string>
#include <string_view>

#include "ecm/tuplegen.hpp"

namespace ecm {

/// Deterministic rendering; identical banks serialize to identical bytes.
std::string serialize_bank(const TupleBank& bank);

/// Throws ParseError on malformed or unsupported documents. Scalars are
/// range-checked against the curve order only when `group_order` is nonzero.
TupleBank parse_bank(std::string_view json, const BigInt& group_order = BigInt(0));

void save_bank(const std::filesystem::path& path, const TupleBank& bank);
TupleBank load_bank(const std::filesystem::path& path, const BigInt& group_order = BigInt(0));

/// Writes via a temporary sibling and rename. Throws IoFailure.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace ecm
