#include "ecm/simlab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <thread>

namespace ecm {

double noise_variance(double es_n0_db) {
  if (std::isinf(es_n0_db) && es_n0_db > 0) return 0.0;
  return std::pow(10.0, -es_n0_db / 10.0) / 2.0;
}

void add_awgn(std::span<PlanePoint> symbols, double es_n0_db, RandomStream& noise) {
  const double sigma = std::sqrt(noise_variance(es_n0_db));
  if (sigma == 0.0) return;
  for (auto& s : symbols) {
    const double u1 = noise.uniform_real();
    const double u2 = noise.uniform_real();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    s.x += sigma * r * std::cos(theta);
    s.y += sigma * r * std::sin(theta);
  }
}

SymbolStream awgn(std::span<const PlanePoint> symbols, const ChannelConfig& config) {
  SymbolStream out(symbols.begin(), symbols.end());
  if (noise_variance(config.es_n0_db) == 0.0) return out;
  if (!out.empty()) {
    const double energy = average_energy(out);
    if (std::fabs(energy - 1.0) > 0.1) {
      std::cerr << "warning: awgn input average energy " << energy
                << " differs from the unit-energy assumption\n";
    }
  }
  RandomStream noise = derive_stream(config.noise_seed, "noise");
  add_awgn(out, config.es_n0_db, noise);
  return out;
}

std::string scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::Qam: return "qam";
    case Scheme::QamDr: return "qam-dr";
    case Scheme::Ecm: return "ecm";
    case Scheme::EcmDr: return "ecm-dr";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name, int* order) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  bool dr = false;
  if (s.size() > 3 && s.substr(s.size() - 3) == "-dr") {
    dr = true;
    s.resize(s.size() - 3);
  }
  auto set_order = [&](int m) {
    if (order) *order = m;
  };
  if (s == "ecm") return dr ? Scheme::EcmDr : Scheme::Ecm;
  if (s == "qam") return dr ? Scheme::QamDr : Scheme::Qam;
  if (s == "qpsk" || s == "4qam") {
    set_order(4);
    return dr ? Scheme::QamDr : Scheme::Qam;
  }
  if (s == "16qam") {
    set_order(16);
    return dr ? Scheme::QamDr : Scheme::Qam;
  }
  if (s == "64qam") {
    set_order(64);
    return dr ? Scheme::QamDr : Scheme::Qam;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown scheme '" + std::string(name) + "'");
}

ScheduleConfig SchemeSpec::schedule_config() const {
  return {n_tuples(), dynamic_rotation(), selection, rotation_block};
}

namespace {

void check_spec(const SchemeSpec& spec) {
  if (spec.is_ecm()) {
    if (spec.bank == nullptr || spec.bank->tuples.empty()) {
      throw Error(ErrorKind::BankMismatch, "ECM schemes need a nonempty tuple bank");
    }
    if (spec.bank->order != spec.order) {
      throw Error(ErrorKind::BankMismatch, "bank M differs from the scheme order");
    }
  } else {
    qam_reference(spec.order);
  }
}

std::span<const PlanePoint> codebook(const SchemeSpec& spec, const Constellation& qam,
                                     const ScheduleRecord& rec) {
  if (spec.is_ecm()) return spec.bank->tuples[rec.tuple_index].points;
  return qam.points;
}

std::uint64_t run_chunk(const SchemeSpec& spec, const Constellation& qam, double es_n0_db,
                        std::size_t snr_index, std::uint64_t chunk_index, std::uint64_t first,
                        std::uint64_t count, const Seed& noise_seed) {
  RandomStream data = derive_stream(noise_seed, "data/" + std::to_string(chunk_index));
  RandomStream noise = derive_stream(
      noise_seed, "noise/" + std::to_string(snr_index) + "/" + std::to_string(chunk_index));
  ScheduleGenerator schedule(spec.key, spec.schedule_config());
  const double sigma = std::sqrt(noise_variance(es_n0_db));
  const auto order = static_cast<std::uint64_t>(spec.order);
  std::uint64_t errors = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto sent = static_cast<std::uint32_t>(data.uniform_int(order));
    const ScheduleRecord rec = schedule.at(first + i);
    const auto points = codebook(spec, qam, rec);
    PlanePoint rx = rotate(points[sent], rec.rotation);
    if (sigma > 0.0) {
      const double u1 = noise.uniform_real();
      const double u2 = noise.uniform_real();
      const double r = std::sqrt(-2.0 * std::log1p(-u1));
      const double theta = 2.0 * std::numbers::pi * u2;
      rx.x += sigma * r * std::cos(theta);
      rx.y += sigma * r * std::sin(theta);
    }
    if (nearest_point(rotate(rx, -rec.rotation), points) != sent) ++errors;
  }
  return errors;
}

}  // namespace

SepReport sep_sweep(const SchemeSpec& spec, std::span<const double> es_n0_db,
                    const SweepOptions& options) {
  check_spec(spec);
  if (options.trials < 1000) throw Error(ErrorKind::InvalidArgument, "need at least 1000 trials");
  if (options.chunk == 0) throw Error(ErrorKind::InvalidArgument, "chunk must be positive");
  const Constellation qam = spec.is_ecm() ? Constellation{} : qam_reference(spec.order);
  const std::uint64_t chunks = (options.trials + options.chunk - 1) / options.chunk;
  unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));

  SepReport report;
  report.scheme = scheme_name(spec.scheme);
  report.order = spec.order;
  for (std::size_t s = 0; s < es_n0_db.size(); ++s) {
    std::vector<std::uint64_t> per_chunk(chunks, 0);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&]() {
      for (std::uint64_t c = next++; c < chunks; c = next++) {
        const std::uint64_t first = c * options.chunk;
        const std::uint64_t n = std::min(options.chunk, options.trials - first);
        per_chunk[c] = run_chunk(spec, qam, es_n0_db[s], s, c, first, n, options.noise_seed);
      }
    };
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    SepRow row;
    row.es_n0_db = es_n0_db[s];
    row.trials = options.trials;
    for (auto e : per_chunk) row.errors += e;
    row.sep = static_cast<double>(row.errors) / static_cast<double>(row.trials);
    row.half_width = 1.96 * std::sqrt(row.sep * (1.0 - row.sep) / static_cast<double>(row.trials));
    report.rows.push_back(row);
  }
  return report;
}

std::string SepReport::to_csv() const {
  std::string out = "scheme,M,es_n0_db,trials,errors,sep,ci95_half_width\n";
  for (const auto& r : rows) {
    out += scheme + ',' + std::to_string(order) + ',' + format_real(r.es_n0_db) + ',' +
           std::to_string(r.trials) + ',' + std::to_string(r.errors) + ',' + format_real(r.sep) +
           ',' + format_real(r.half_width) + '\n';
  }
  return out;
}

double qam_sep_theory(int order, double es_n0_db) {
  qam_reference(order);
  const double es_n0 = std::pow(10.0, es_n0_db / 10.0);
  const double side = std::sqrt(static_cast<double>(order));
  const double q = 0.5 * std::erfc(std::sqrt(3.0 * es_n0 / (order - 1.0)) / std::numbers::sqrt2);
  const double axis = 2.0 * (1.0 - 1.0 / side) * q;
  return 1.0 - (1.0 - axis) * (1.0 - axis);
}

std::optional<double> snr_at_sep(const SepReport& report, double target) {
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const SepRow& a = report.rows[i - 1];
    const SepRow& b = report.rows[i];
    if (a.sep >= target && b.sep <= target && a.sep > 0.0 && b.sep > 0.0) {
      const double la = std::log10(a.sep), lb = std::log10(b.sep), lt = std::log10(target);
      if (la == lb) return a.es_n0_db;
      return a.es_n0_db + (la - lt) / (la - lb) * (b.es_n0_db - a.es_n0_db);
    }
  }
  return std::nullopt;
}

EntropyReport quantized_entropy(std::span<const PlanePoint> samples, int q, double region) {
  if (samples.empty()) throw Error(ErrorKind::NoSamples, "entropy of an empty sample set");
  if (q < 1 || q > 16) throw Error(ErrorKind::InvalidArgument, "q must lie in [1, 16]");
  if (!(region > 0.0)) throw Error(ErrorKind::InvalidArgument, "region half-width must be > 0");
  const std::int64_t cells = std::int64_t{1} << q;
  const double delta = 2.0 * region / static_cast<double>(cells);
  EntropyReport report;
  report.q = q;
  report.region = region;
  report.samples = samples.size();
  std::vector<std::uint64_t> keys;
  keys.reserve(samples.size());
  auto cell = [&](double v, bool& clamped) -> std::int64_t {
    const double f = std::floor((v + region) / delta);
    if (!(f >= 0.0)) {
      clamped = true;
      return 0;
    }
    if (f >= static_cast<double>(cells)) {
      clamped = true;
      return cells - 1;
    }
    return static_cast<std::int64_t>(f);
  };
  for (const auto& s : samples) {
    bool clamped = false;
    const std::int64_t i = cell(s.x, clamped);
    const std::int64_t j = cell(s.y, clamped);
    if (clamped) ++report.clamped;
    keys.push_back(static_cast<std::uint64_t>(i * cells + j));
  }
  std::sort(keys.begin(), keys.end());
  const double n = static_cast<double>(samples.size());
  double h = 0.0;
  for (std::size_t a = 0; a < keys.size();) {
    std::size_t b = a;
    while (b < keys.size() && keys[b] == keys[a]) ++b;
    const double p = static_cast<double>(b - a) / n;
    h -= p * std::log2(p);
    a = b;
  }
  report.entropy_bits = std::max(0.0, h);
  return report;
}

std::string entropy_csv(std::span<const EntropyReport> rows) {
  std::string out = "q,R,N,clamp_fraction,H_bits\n";
  for (const auto& r : rows) {
    out += std::to_string(r.q) + ',' + format_real(r.region) + ',' + std::to_string(r.samples) +
           ',' + format_real(r.clamp_fraction()) + ',' + format_real(r.entropy_bits) + '\n';
  }
  return out;
}

SymbolStream scatter_samples(const SchemeSpec& spec, std::uint64_t count, const Seed& noise_seed,
                             double es_n0_db) {
  check_spec(spec);
  if (count == 0) throw Error(ErrorKind::InvalidArgument, "scatter count must be >= 1");
  RandomStream payload = derive_stream(noise_seed, "payload");
  std::vector<std::uint32_t> indices(count);
  for (auto& v : indices) v = static_cast<std::uint32_t>(payload.uniform_int(spec.order));
  ScheduleGenerator schedule(spec.key, spec.schedule_config());
  const TransmissionSchedule records = schedule.range(0, count);
  SymbolStream out = spec.is_ecm() ? ecm_modulate_indices(indices, *spec.bank, records)
                                   : qam_modulate_indices(indices, spec.order, records);
  if (noise_variance(es_n0_db) > 0.0) {
    RandomStream noise = derive_stream(noise_seed, "noise");
    add_awgn(out, es_n0_db, noise);
  }
  return out;
}

std::size_t distinct_points(std::span<const PlanePoint> samples) {
  std::vector<std::pair<double, double>> v;
  v.reserve(samples.size());
  for (const auto& s : samples) v.emplace_back(s.x, s.y);
  std::sort(v.begin(), v.end());
  return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

}  // namespace ecm
