#include "ecm/symbol_io.hpp"

#include <bit>
#include <cstring>
#include <sstream>

#include "ecm/bank_io.hpp"

namespace ecm {

namespace {

constexpr std::string_view kMagic = "ecm-symbols 1";

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_u64(const char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(p[i]);
  return v;
}

std::string selection_name(TupleSelection s) {
  return s == TupleSelection::RoundRobin ? "round-robin" : "uniform";
}

}  // namespace

std::string encode_symbol_file(const SymbolFile& file, SymbolEncoding encoding) {
  const SymbolFileHeader& h = file.header;
  std::string out;
  out += kMagic;
  out += '\n';
  out += std::string("encoding ") + (encoding == SymbolEncoding::Binary ? "binary" : "text") + '\n';
  out += "scheme " + h.scheme + '\n';
  out += "M " + std::to_string(h.order) + '\n';
  out += "d_min " + format_real(h.d_min) + '\n';
  out += "n_tuples " + std::to_string(h.n_tuples) + '\n';
  out += "count " + std::to_string(file.symbols.size()) + '\n';
  out += "bit_length " + std::to_string(h.bit_length) + '\n';
  out += "seed_fingerprint " + h.seed_fingerprint + '\n';
  out += "rotation_block " + std::to_string(h.rotation_block) + '\n';
  out += "selection " + selection_name(h.selection) + '\n';
  out += "end\n";
  for (std::size_t t = 0; t < file.symbols.size(); ++t) {
    const PlanePoint& s = file.symbols[t];
    if (encoding == SymbolEncoding::Binary) {
      put_u64(out, t);
      put_u64(out, std::bit_cast<std::uint64_t>(s.x));
      put_u64(out, std::bit_cast<std::uint64_t>(s.y));
    } else {
      out += std::to_string(t) + ' ' + format_real(s.x) + ' ' + format_real(s.y) + '\n';
    }
  }
  return out;
}

SymbolFile decode_symbol_file(const std::string& bytes) {
  SymbolFile file;
  SymbolFileHeader& h = file.header;
  std::size_t pos = 0;
  auto next_line = [&]() -> std::string {
    const auto nl = bytes.find('\n', pos);
    if (nl == std::string::npos) throw Error(ErrorKind::ParseError, "truncated symbol header");
    std::string line = bytes.substr(pos, nl - pos);
    pos = nl + 1;
    return line;
  };
  if (next_line() != kMagic) throw Error(ErrorKind::ParseError, "not a symbol stream file");
  bool binary = false;
  bool have_count = false;
  for (;;) {
    const std::string line = next_line();
    if (line == "end") break;
    const auto sp = line.find(' ');
    if (sp == std::string::npos) throw Error(ErrorKind::ParseError, "bad header line: " + line);
    const std::string key = line.substr(0, sp);
    const std::string value = line.substr(sp + 1);
    try {
      if (key == "encoding") {
        binary = value == "binary";
      } else if (key == "scheme") {
        h.scheme = value;
      } else if (key == "M") {
        h.order = std::stoi(value);
      } else if (key == "d_min") {
        h.d_min = std::stod(value);
      } else if (key == "n_tuples") {
        h.n_tuples = std::stoull(value);
      } else if (key == "count") {
        h.count = std::stoull(value);
        have_count = true;
      } else if (key == "bit_length") {
        h.bit_length = std::stoull(value);
      } else if (key == "seed_fingerprint") {
        h.seed_fingerprint = value;
      } else if (key == "rotation_block") {
        h.rotation_block = std::stoull(value);
      } else if (key == "selection") {
        h.selection = value == "round-robin" ? TupleSelection::RoundRobin : TupleSelection::Uniform;
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::ParseError, "bad value for header key " + key);
    }
  }
  if (!have_count) throw Error(ErrorKind::ParseError, "symbol header lacks a count");
  file.symbols.reserve(h.count);
  if (binary) {
    if (bytes.size() - pos != h.count * 24) {
      throw Error(ErrorKind::ParseError, "binary record section has the wrong length");
    }
    for (std::uint64_t t = 0; t < h.count; ++t) {
      const char* rec = bytes.data() + pos + t * 24;
      if (get_u64(rec) != t) throw Error(ErrorKind::ParseError, "binary records out of order");
      file.symbols.push_back({std::bit_cast<double>(get_u64(rec + 8)),
                              std::bit_cast<double>(get_u64(rec + 16))});
    }
  } else {
    std::istringstream in(bytes.substr(pos));
    std::uint64_t t = 0;
    PlanePoint p;
    for (std::uint64_t expect = 0; expect < h.count; ++expect) {
      if (!(in >> t >> p.x >> p.y) || t != expect) {
        throw Error(ErrorKind::ParseError, "malformed text record " + std::to_string(expect));
      }
      file.symbols.push_back(p);
    }
  }
  return file;
}

void write_symbol_file(const std::filesystem::path& path, const SymbolFile& file,
                       SymbolEncoding encoding) {
  write_file_atomic(path, encode_symbol_file(file, encoding));
}

SymbolFile read_symbol_file(const std::filesystem::path& path) {
  return decode_symbol_file(read_file(path));
}

std::string format_scatter(std::span<const PlanePoint> samples) {
  std::string out;
  out.reserve(samples.size() * 48);
  for (const auto& s : samples) {
    out += format_real(s.x);
    out += ' ';
    out += format_real(s.y);
    out += '\n';
  }
  return out;
}

SymbolStream parse_scatter(const std::string& text) {
  SymbolStream out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    PlanePoint p;
    if (!(ls >> p.x >> p.y)) throw Error(ErrorKind::ParseError, "bad scatter line: " + line);
    out.push_back(p);
  }
  return out;
}

}  // namespace ecm
