#include "ecm/curves.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace ecm {

namespace {

BigInt hex(std::string_view digits) {
  std::string s(digits);
  if (s.size() > 1 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) s = s.substr(2);
  BigInt v;
  if (s.empty() || v.set_str(s, 16) != 0) {
    throw Error(ErrorKind::ParseError, "invalid hexadecimal integer '" + std::string(digits) + "'");
  }
  return v;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string to_hex(const BigInt& v) {
  std::string s = v.get_str(16);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

}  // namespace

CurveParams secp256k1() {
  return CurveParams::make(
      "secp256k1", hex("FFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFC2F"), BigInt(0),
      BigInt(7), hex("79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798"),
      hex("483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8"),
      hex("FFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141"));
}

CurveParams toy_curve_17() {
  return CurveParams::make("toy17", BigInt(17), BigInt(2), BigInt(2), BigInt(5), BigInt(1),
                           BigInt(19));
}

CurveParams toy_curve_10007() {
  return CurveParams::make("toy10007", BigInt(10007), BigInt(1), BigInt(28), BigInt(2),
                           BigInt(4582), BigInt(9851));
}

std::vector<std::string> named_curve_ids() { return {"secp256k1", "toy17", "toy10007"}; }

CurveParams named_curve(std::string_view id) {
  const std::string key = lower(std::string(id));
  if (key == "secp256k1") return secp256k1();
  if (key == "toy17") return toy_curve_17();
  if (key == "toy10007") return toy_curve_10007();
  throw Error(ErrorKind::CurveInvalid, "unknown curve '" + std::string(id) + "'");
}

CurveParams parse_curve_text(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected key = value");
    }
    kv[lower(trim(t.substr(0, eq)))] = trim(t.substr(eq + 1));
  }
  auto field = [&](const char* key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw Error(ErrorKind::ParseError, std::string("missing key '") + key + "'");
    return it->second;
  };
  const std::string name = kv.count("name") ? kv["name"] : std::string("custom");
  return CurveParams::make(name, hex(field("p")), hex(field("a")), hex(field("b")),
                           hex(field("gx")), hex(field("gy")), hex(field("n")));
}

std::string format_curve_text(const CurveParams& params) {
  std::ostringstream out;
  out << "name = " << params.name << '\n'
      << "p = " << to_hex(params.p()) << '\n'
      << "a = " << to_hex(params.a.value()) << '\n'
      << "b = " << to_hex(params.b.value()) << '\n'
      << "Gx = " << to_hex(params.g.x().value()) << '\n'
      << "Gy = " << to_hex(params.g.y().value()) << '\n'
      << "n = " << to_hex(params.n) << '\n';
  return out.str();
}

CurveParams load_curve_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open curve file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_curve_text(buf.str());
}

CurveParams resolve_curve(std::string_view id) {
  const std::string key = lower(std::string(id));
  for (const auto& named : named_curve_ids()) {
    if (key == named) return named_curve(key);
  }
  const std::filesystem::path direct{std::string(id)};
  std::error_code ec;
  if (std::filesystem::is_regular_file(direct, ec)) return load_curve_file(direct);
  if (const char* env = std::getenv("ECM_CURVE_PATH")) {
    std::istringstream dirs{std::string(env)};
    std::string dir;
    while (std::getline(dirs, dir, ':')) {
      if (dir.empty()) continue;
      const auto candidate = std::filesystem::path(dir) / (std::string(id) + ".curve");
      if (std::filesystem::is_regular_file(candidate, ec)) return load_curve_file(candidate);
    }
  }
  throw Error(ErrorKind::CurveInvalid, "cannot resolve curve '" + std::string(id) + "'");
}

}  // namespace ecm
