#include "ecm/bank_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ecm {

namespace {

constexpr std::string_view kFormatName = "ecm-tuple-bank";

void append_string(std::string& out, std::string_view s) {
  out += '"';
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
}

}  // namespace

std::string serialize_bank(const TupleBank& bank) {
  std::string out;
  out += "{\n";
  out += "  \"format\": \"";
  out += kFormatName;
  out += "\",\n";
  out += "  \"version\": " + std::to_string(TupleBank::kFormatVersion) + ",\n";
  out += "  \"curve\": ";
  append_string(out, bank.curve_id);
  out += ",\n";
  out += "  \"M\": " + std::to_string(bank.order) + ",\n";
  out += "  \"d_min\": " + format_real(bank.d_min) + ",\n";
  out += "  \"requested\": " + std::to_string(bank.requested) + ",\n";
  out += "  \"n_tuples\": " + std::to_string(bank.tuples.size()) + ",\n";
  out += "  \"L\": " + std::to_string(bank.pool_size) + ",\n";
  out += "  \"max_attempts\": " + std::to_string(bank.max_attempts) + ",\n";
  out += "  \"prefilter_slack\": " + format_real(bank.prefilter_slack) + ",\n";
  out += "  \"growth\": \"" + std::string(growth_name(bank.growth)) + "\",\n";
  out += "  \"compact_tolerance\": " + format_real(bank.compact_tolerance) + ",\n";
  out += "  \"attempts_used\": " + std::to_string(bank.attempts_used) + ",\n";
  out += std::string("  \"partial\": ") + (bank.partial ? "true" : "false") + ",\n";
  out += "  \"seed_fingerprint\": ";
  append_string(out, bank.seed_fingerprint);
  out += ",\n";
  out += "  \"tuples\": [";
  for (std::size_t t = 0; t < bank.tuples.size(); ++t) {
    const EcmTuple& tuple = bank.tuples[t];
    out += t == 0 ? "\n" : ",\n";
    out += "    {\"scalars\": [";
    for (std::size_t i = 0; i < tuple.scalars.size(); ++i) {
      if (i) out += ", ";
      out += '"' + tuple.scalars[i].value().get_str(10) + '"';
    }
    out += "],\n     \"points\": [";
    for (std::size_t i = 0; i < tuple.points.size(); ++i) {
      if (i) out += ", ";
      out += '[' + format_real(tuple.points[i].x) + ", " + format_real(tuple.points[i].y) + ']';
    }
    out += "]}";
  }
  out += bank.tuples.empty() ? "]\n" : "\n  ]\n";
  out += "}\n";
  return out;
}

TupleBank parse_bank(std::string_view text, const BigInt& group_order) {
  using nlohmann::json;
  try {
    const json doc = json::parse(text.begin(), text.end());
    if (doc.at("format").get<std::string>() != kFormatName) {
      throw Error(ErrorKind::ParseError, "not a tuple bank document");
    }
    if (doc.at("version").get<int>() != TupleBank::kFormatVersion) {
      throw Error(ErrorKind::ParseError, "unsupported bank version");
    }
    TupleBank bank;
    bank.curve_id = doc.at("curve").get<std::string>();
    bank.order = doc.at("M").get<int>();
    bank.d_min = doc.at("d_min").get<double>();
    bank.requested = doc.at("requested").get<std::size_t>();
    bank.pool_size = doc.at("L").get<std::size_t>();
    bank.max_attempts = doc.at("max_attempts").get<std::size_t>();
    bank.prefilter_slack = doc.at("prefilter_slack").get<double>();
    bank.growth = parse_growth(doc.at("growth").get<std::string>());
    bank.compact_tolerance = doc.at("compact_tolerance").get<double>();
    bank.attempts_used = doc.at("attempts_used").get<std::size_t>();
    bank.partial = doc.at("partial").get<bool>();
    bank.seed_fingerprint = doc.at("seed_fingerprint").get<std::string>();
    for (const auto& jt : doc.at("tuples")) {
      EcmTuple tuple;
      for (const auto& js : jt.at("scalars")) {
        BigInt k;
        if (k.set_str(js.get<std::string>(), 10) != 0) {
          throw Error(ErrorKind::ParseError, "invalid scalar");
        }
        const BigInt bound = group_order != 0 ? group_order : BigInt(k + 1);
        tuple.scalars.emplace_back(std::move(k), bound);
      }
      for (const auto& jp : jt.at("points")) {
        tuple.points.push_back({jp.at(0).get<double>(), jp.at(1).get<double>()});
      }
      if (tuple.points.size() != static_cast<std::size_t>(bank.order) ||
          tuple.scalars.size() != tuple.points.size()) {
        throw Error(ErrorKind::ParseError, "tuple size does not match M");
      }
      bank.tuples.push_back(std::move(tuple));
    }
    if (doc.at("n_tuples").get<std::size_t>() != bank.tuples.size()) {
      throw Error(ErrorKind::ParseError, "n_tuples does not match the tuple list");
    }
    return bank;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidScalar || e.kind() == ErrorKind::InvalidArgument) throw Error(ErrorKind::ParseError, e.what());
    throw;
  }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoFailure, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::IoFailure, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::IoFailure, "cannot rename onto " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void save_bank(const std::filesystem::path& path, const TupleBank& bank) {
  write_file_atomic(path, serialize_bank(bank));
}

TupleBank load_bank(const std::filesystem::path& path, const BigInt& group_order) {
  return parse_bank(read_file(path), group_order);
}

}  // namespace ecm
