// ecm: command-line front end for tuple generation, modulation, channel
// simulation and the entropy / scatter / estimate reports.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ecm/bank_io.hpp"
#include "ecm/curves.hpp"
#include "ecm/simlab.hpp"
#include "ecm/symbol_io.hpp"
#include "ecm/tuplegen.hpp"

namespace {

using namespace ecm;

enum ExitCode : int { kOk = 0, kConfigError = 2, kInfeasible = 3, kIoError = 4 };

struct Globals {
  std::string curve = "secp256k1";
  std::string seed;
  std::string noise_seed;
  std::string out;
};

Seed require_seed(const std::string& hex, const char* flag) {
  if (hex.empty()) throw Error(ErrorKind::InvalidArgument, std::string(flag) + " is required");
  return Seed::from_hex(hex);
}

void emit(const Globals& g, const std::string& content) {
  if (g.out.empty() || g.out == "-") {
    std::cout << content;
  } else {
    write_file_atomic(g.out, content);
  }
}

// "a:b:step" expands to an inclusive range; anything else is a comma list.
std::vector<double> parse_snr_list(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double lo = 0, hi = 0, step = 1;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    in >> lo >> c1 >> hi;
    if (in >> c2) in >> step;
    if (!in && !in.eof()) throw Error(ErrorKind::InvalidArgument, "bad SNR range: " + text);
    if (!(step > 0.0) || hi < lo) throw Error(ErrorKind::InvalidArgument, "bad SNR range: " + text);
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(item == "inf" ? kNoiselessDb : std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "bad SNR value: " + item);
    }
  }
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, "empty SNR list");
  return out;
}

struct SchemeArgs {
  std::string scheme = "qam";
  int order = 0;
  std::string bank;
  bool dr = false;
  std::string selection = "uniform";
  std::size_t rotation_block = 1;
};

void add_scheme_options(CLI::App* cmd, SchemeArgs& s) {
  cmd->add_option("--scheme", s.scheme, "qam, qam-dr, ecm, ecm-dr, qpsk, 16qam, 64qam[-dr]");
  cmd->add_option("--m", s.order, "Constellation order (implied by bank or QAM alias)");
  cmd->add_option("--bank", s.bank, "Tuple bank file for the ECM schemes");
  cmd->add_flag("--dr", s.dr, "Enable dynamic rotation");
  cmd->add_option("--selection", s.selection, "Tuple selection: uniform or round-robin")
      ->check(CLI::IsMember({"uniform", "round-robin"}));
  cmd->add_option("--rotation-block", s.rotation_block, "Symbols per rotation angle")
      ->check(CLI::PositiveNumber);
}

struct ResolvedScheme {
  SchemeSpec spec;
  std::optional<TupleBank> bank;
};

void resolve_scheme(const SchemeArgs& args, const Globals& g, const Seed& key,
                    ResolvedScheme& out) {
  int implied = 0;
  Scheme scheme = parse_scheme(args.scheme, &implied);
  if (args.dr) {
    if (scheme == Scheme::Qam) scheme = Scheme::QamDr;
    if (scheme == Scheme::Ecm) scheme = Scheme::EcmDr;
  }
  SchemeSpec& spec = out.spec;
  spec.scheme = scheme;
  spec.key = key;
  spec.selection = args.selection == "round-robin" ? TupleSelection::RoundRobin
                                                   : TupleSelection::Uniform;
  spec.rotation_block = args.rotation_block;
  if (spec.is_ecm()) {
    if (args.bank.empty()) throw Error(ErrorKind::InvalidArgument, "--bank is required for ECM");
    const CurveParams curve = resolve_curve(g.curve);
    out.bank = load_bank(args.bank, curve.n);
    if (out.bank->seed_fingerprint != key.fingerprint()) {
      std::cerr << "warning: bank was generated from a different seed\n";
    }
    if (out.bank->size() == 0) throw Error(ErrorKind::BankMismatch, "bank holds no tuples");
    spec.order = out.bank->order;
    spec.bank = &*out.bank;
    if (args.order != 0 && args.order != spec.order) {
      throw Error(ErrorKind::BankMismatch, "--m disagrees with the bank order");
    }
  } else {
    spec.order = args.order != 0 ? args.order : (implied != 0 ? implied : 4);
    if (implied != 0 && args.order != 0 && implied != args.order) {
      throw Error(ErrorKind::InvalidArgument, "--m disagrees with the scheme alias");
    }
  }
}

// ---------------------------------------------------------------------------

struct GenArgs {
  int order = 16;
  double d_min = 0.63;
  std::size_t n_tuples = 300;
  std::size_t pool_size = 100'000;
  std::size_t max_attempts = 0;
  double slack = 1.0;
  std::string growth = "compact";
  double tolerance = 0.02;
};

int cmd_gen_tuples(const Globals& g, const GenArgs& a) {
  if (g.out.empty()) throw Error(ErrorKind::InvalidArgument, "--out is required");
  const Seed seed = require_seed(g.seed, "--seed");
  const CurveParams curve = resolve_curve(g.curve);
  TupleGenConfig config;
  config.order = a.order;
  config.d_min = a.d_min;
  config.n_tuples = a.n_tuples;
  config.pool_size = a.pool_size;
  config.max_attempts = a.max_attempts;
  config.prefilter_slack = a.slack;
  config.growth = parse_growth(a.growth);
  config.compact_tolerance = a.tolerance;

  const auto t0 = std::chrono::steady_clock::now();
  const GenerationResult result = generate_tuples(seed, curve, config);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  save_bank(g.out, result.bank);
  std::printf("tuples %zu/%zu attempts %zu wall %.2fs\n", result.bank.size(), a.n_tuples,
              result.bank.attempts_used, wall);
  if (result.exhausted) {
    std::cerr << result.diagnostic << " (partial bank written)\n";
    return kInfeasible;
  }
  return kOk;
}

struct ModArgs {
  SchemeArgs scheme;
  std::string in;
  bool binary = false;
  std::string snr;
};

int cmd_modulate(const Globals& g, const ModArgs& a) {
  if (g.out.empty()) throw Error(ErrorKind::InvalidArgument, "--out is required");
  const Seed key = require_seed(g.seed, "--seed");
  ResolvedScheme rs;
  resolve_scheme(a.scheme, g, key, rs);
  const SchemeSpec& spec = rs.spec;

  const std::string raw = read_file(a.in);
  const BitStream bits =
      unpack_bytes({reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()});
  const std::vector<std::uint32_t> indices = bits_to_indices(bits, spec.order, true);
  ScheduleGenerator schedule(key, spec.schedule_config());
  const TransmissionSchedule records = schedule.range(0, indices.size());
  SymbolFile file;
  file.symbols = spec.is_ecm() ? ecm_modulate_indices(indices, *spec.bank, records)
                               : qam_modulate_indices(indices, spec.order, records);
  if (!a.snr.empty()) {
    ChannelConfig channel;
    channel.es_n0_db = parse_snr_list(a.snr).front();
    channel.noise_seed = require_seed(g.noise_seed, "--noise-seed");
    file.symbols = awgn(file.symbols, channel);
  }
  SymbolFileHeader& h = file.header;
  h.scheme = scheme_name(spec.scheme);
  h.order = spec.order;
  h.d_min = spec.is_ecm() ? spec.bank->d_min : qam_min_distance(spec.order);
  h.n_tuples = spec.n_tuples();
  h.count = file.symbols.size();
  h.bit_length = bits.size();
  h.seed_fingerprint = key.fingerprint();
  h.rotation_block = spec.rotation_block;
  h.selection = spec.selection;
  write_symbol_file(g.out, file, a.binary ? SymbolEncoding::Binary : SymbolEncoding::Text);
  std::printf("symbols %zu bits %zu scheme %s\n", file.symbols.size(), bits.size(),
              h.scheme.c_str());
  return kOk;
}

struct DemodArgs {
  std::string in;
  std::string bank;
  std::string reference;
};

int cmd_demodulate(const Globals& g, const DemodArgs& a) {
  if (g.out.empty()) throw Error(ErrorKind::InvalidArgument, "--out is required");
  const Seed key = require_seed(g.seed, "--seed");
  const SymbolFile file = read_symbol_file(a.in);
  const SymbolFileHeader& h = file.header;
  if (h.seed_fingerprint != key.fingerprint()) {
    std::cerr << "warning: seed does not match the transmitter's fingerprint\n";
  }
  SchemeArgs sa;
  sa.scheme = h.scheme;
  sa.order = h.order;
  sa.bank = a.bank;
  sa.selection = h.selection == TupleSelection::RoundRobin ? "round-robin" : "uniform";
  sa.rotation_block = h.rotation_block;
  ResolvedScheme rs;
  resolve_scheme(sa, g, key, rs);
  const SchemeSpec& spec = rs.spec;
  if (spec.is_ecm() && (spec.bank->size() != h.n_tuples || spec.bank->d_min != h.d_min)) {
    throw Error(ErrorKind::BankMismatch, "bank does not match the symbol file header");
  }

  ScheduleGenerator schedule(key, spec.schedule_config());
  const TransmissionSchedule records = schedule.range(0, file.symbols.size());
  const std::vector<std::uint32_t> indices =
      spec.is_ecm() ? ecm_detect_indices(file.symbols, *spec.bank, records)
                    : qam_detect_indices(file.symbols, spec.order, records);
  BitStream bits = indices_to_bits(indices, spec.order);
  if (h.bit_length > bits.size()) {
    throw Error(ErrorKind::ParseError, "symbol file shorter than its bit length");
  }
  bits.resize(h.bit_length);
  const std::vector<std::uint8_t> bytes = pack_bits(bits);
  write_file_atomic(g.out, {reinterpret_cast<const char*>(bytes.data()), bytes.size()});

  std::printf("symbols %zu bits %zu", file.symbols.size(), bits.size());
  if (!a.reference.empty()) {
    const std::string ref = read_file(a.reference);
    const BitStream ref_bits =
        unpack_bytes({reinterpret_cast<const std::uint8_t*>(ref.data()), ref.size()});
    const std::size_t n = std::min(ref_bits.size(), bits.size());
    std::size_t agree = 0;
    for (std::size_t i = 0; i < n; ++i) agree += ref_bits[i] == bits[i] ? 1 : 0;
    std::printf(" bit agreement %.4f", n == 0 ? 0.0 : static_cast<double>(agree) / n);
  }
  std::printf("\n");
  return kOk;
}

struct SimArgs {
  SchemeArgs scheme;
  std::string snr = "0:25:1";
  std::uint64_t trials = 100'000;
  unsigned threads = 0;
};

int cmd_simulate(const Globals& g, const SimArgs& a) {
  const Seed key = require_seed(g.seed, "--seed");
  ResolvedScheme rs;
  resolve_scheme(a.scheme, g, key, rs);
  SweepOptions options;
  options.trials = a.trials;
  options.threads = a.threads;
  options.noise_seed = require_seed(g.noise_seed, "--noise-seed");
  const SepReport report = sep_sweep(rs.spec, parse_snr_list(a.snr), options);
  emit(g, report.to_csv());
  return kOk;
}

struct EntropyArgs {
  std::string in;
  std::vector<int> q{6, 7, 8, 9};
  double region = 2.0;
};

int cmd_entropy(const Globals& g, const EntropyArgs& a) {
  const std::string text = read_file(a.in);
  const SymbolStream samples = text.rfind("ecm-symbols", 0) == 0 ? decode_symbol_file(text).symbols
                                                                 : parse_scatter(text);
  std::vector<EntropyReport> rows;
  for (int q : a.q) rows.push_back(quantized_entropy(samples, q, a.region));
  emit(g, entropy_csv(rows));
  return kOk;
}

struct ScatterArgs {
  SchemeArgs scheme;
  std::uint64_t count = 10'000;
  std::string snr;
};

int cmd_scatter(const Globals& g, const ScatterArgs& a) {
  const Seed key = require_seed(g.seed, "--seed");
  ResolvedScheme rs;
  resolve_scheme(a.scheme, g, key, rs);
  const Seed noise_seed = require_seed(g.noise_seed, "--noise-seed");
  const double snr = a.snr.empty() ? kNoiselessDb : parse_snr_list(a.snr).front();
  emit(g, format_scatter(scatter_samples(rs.spec, a.count, noise_seed, snr)));
  return kOk;
}

struct EstimateArgs {
  double pool_size = 100'000;
  int order = 16;
  double d_min = 0.63;
  double area = 0.0;
};

int cmd_estimate(const Globals& g, const EstimateArgs& a) {
  double area = a.area;
  if (area <= 0.0) {
    const Seed seed = require_seed(g.seed, "--seed (or --a)");
    area = gen_candidate_pool(seed, static_cast<std::size_t>(a.pool_size), resolve_curve(g.curve))
               .bounding_area;
  }
  const LogCount approx = expected_tuples_approx(a.pool_size, a.order, a.d_min, area);
  const LogCount exact = expected_tuples_exact(a.pool_size, a.order, a.d_min, area);
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof(buf), "L %.17g M %d d_min %.17g A %.17g\n", a.pool_size, a.order,
                a.d_min, area);
  out += buf;
  std::snprintf(buf, sizeof(buf), "approx log10 %.4f value %s\n", approx.log10(),
                approx.scientific().c_str());
  out += buf;
  std::snprintf(buf, sizeof(buf), "exact log10 %.4f value %s\n", exact.log10(),
                exact.scientific().c_str());
  out += buf;
  emit(g, out);
  return kOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::IoFailure: return kIoError;
    case ErrorKind::ConstraintInfeasible: return kInfeasible;
    default: return kConfigError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elliptic-curve modulation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI file with option defaults");
  Globals g;
  app.add_option("--curve", g.curve, "Named curve, curve file, or id under $ECM_CURVE_PATH");
  app.add_option("--seed", g.seed, "Shared key, 64 hex characters");
  app.add_option("--noise-seed", g.noise_seed, "Channel/payload seed, 64 hex characters");
  app.add_option("--out", g.out, "Output path");

  GenArgs gen;
  auto* c_gen = app.add_subcommand("gen-tuples", "Generate a tuple bank");
  c_gen->add_option("--m", gen.order, "Tuple size M");
  c_gen->add_option("--dmin", gen.d_min, "Minimum pairwise distance");
  c_gen->add_option("--n", gen.n_tuples, "Number of tuples N'");
  c_gen->add_option("--l", gen.pool_size, "Candidate pool size L");
  c_gen->add_option("--max-attempts", gen.max_attempts, "Attempt budget (0: 100 N')");
  c_gen->add_option("--slack", gen.slack, "Per-step filter radius multiplier");
  c_gen->add_option("--growth", gen.growth, "compact or uniform")
      ->check(CLI::IsMember({"compact", "uniform"}));
  c_gen->add_option("--tolerance", gen.tolerance, "Compact band width");

  ModArgs mod;
  auto* c_mod = app.add_subcommand("modulate", "Map a byte file to symbols");
  add_scheme_options(c_mod, mod.scheme);
  c_mod->add_option("--in", mod.in, "Payload file")->required();
  c_mod->add_flag("--binary", mod.binary, "Binary symbol records");
  c_mod->add_option("--snr", mod.snr, "Optional Es/N0 in dB for an AWGN channel");

  DemodArgs demod;
  auto* c_demod = app.add_subcommand("demodulate", "Detect symbols back to bytes");
  c_demod->add_option("--in", demod.in, "Symbol file")->required();
  c_demod->add_option("--bank", demod.bank, "Tuple bank file for the ECM schemes");
  c_demod->add_option("--reference", demod.reference, "Original payload for bit agreement");

  SimArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Monte-Carlo SEP sweep");
  add_scheme_options(c_sim, sim.scheme);
  c_sim->add_option("--snr", sim.snr, "Es/N0 list 'a,b,c' or range 'lo:hi:step'");
  c_sim->add_option("--trials", sim.trials, "Symbols per SNR point");
  c_sim->add_option("--threads", sim.threads, "Worker threads (0: all cores)");

  EntropyArgs ent;
  auto* c_ent = app.add_subcommand("entropy", "Quantized IQ entropy of a scatter file");
  c_ent->add_option("--in", ent.in, "Scatter or symbol file")->required();
  c_ent->add_option("--q", ent.q, "Quantization bits per axis")->delimiter(',');
  c_ent->add_option("--r", ent.region, "Histogram half-width");

  ScatterArgs sc;
  auto* c_sc = app.add_subcommand("scatter", "Export transmitted or received samples");
  add_scheme_options(c_sc, sc.scheme);
  c_sc->add_option("--count", sc.count, "Number of samples");
  c_sc->add_option("--snr", sc.snr, "Es/N0 in dB (default noiseless)");

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "Expected number of valid tuples");
  c_est->add_option("--l", est.pool_size, "Pool size L");
  c_est->add_option("--m", est.order, "Tuple size M");
  c_est->add_option("--dmin", est.d_min, "Minimum distance");
  c_est->add_option("--a", est.area, "Area A (default: pool bounding box)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*c_gen) return cmd_gen_tuples(g, gen);
    if (*c_mod) return cmd_modulate(g, mod);
    if (*c_demod) return cmd_demodulate(g, demod);
    if (*c_sim) return cmd_simulate(g, sim);
    if (*c_ent) return cmd_entropy(g, ent);
    if (*c_sc) return cmd_scatter(g, sc);
    if (*c_est) return cmd_estimate(g, est);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}
