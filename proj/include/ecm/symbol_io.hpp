#pragma once

// Symbol stream files. Both encodings start with the same ASCII header:
//
//   ecm-symbols 1
//   encoding text|binary
//   scheme <qam|qam-dr|ecm|ecm-dr>
//   M <order>
//   d_min <17 significant digits>
//   n_tuples <N'>
//   count <symbols>
//   bit_length <original payload bits>
//   seed_fingerprint <hex sha-256 of the seed>
//   rotation_block <symbols per rotation angle>
//   selection <uniform|round-robin>
//   end
//
// Text records follow as "t I Q" lines (17 significant digits). Binary
// records are 24 bytes each, little-endian: u64 index, f64 I, f64 Q.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ecm/modem.hpp"

namespace ecm {

enum class SymbolEncoding { Text, Binary };

struct SymbolFileHeader {
  std::string scheme;
  int order = 0;
  double d_min = 0.0;
  std::size_t n_tuples = 1;
  std::uint64_t count = 0;
  std::uint64_t bit_length = 0;
  std::string seed_fingerprint;
  std::size_t rotation_block = 1;
  TupleSelection selection = TupleSelection::Uniform;

  bool dynamic_rotation() const { return scheme == "qam-dr" || scheme == "ecm-dr"; }
  bool is_ecm() const { return scheme == "ecm" || scheme == "ecm-dr"; }
};

struct SymbolFile {
  SymbolFileHeader header;
  SymbolStream symbols;
};

std::string encode_symbol_file(const SymbolFile& file, SymbolEncoding encoding);
SymbolFile decode_symbol_file(const std::string& bytes);

void write_symbol_file(const std::filesystem::path& path, const SymbolFile& file,
                       SymbolEncoding encoding);
SymbolFile read_symbol_file(const std::filesystem::path& path);

/// Two-column "I Q" text, one sample per line, 17 significant digits.
std::string format_scatter(std::span<const PlanePoint> samples);
/// Accepts two-column text (blank lines and '#' comments skipped).
SymbolStream parse_scatter(const std::string& text);

}  // namespace ecm
