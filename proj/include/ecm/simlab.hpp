#pragma once

// AWGN channel, Monte-Carlo symbol-error sweeps, quantized IQ entropy and
// scatter sample generation.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ecm/modem.hpp"
#include "ecm/random_stream.hpp"
#include "ecm/tuplegen.hpp"

namespace ecm {

/// Es/N0 value meaning "no noise".
inline constexpr double kNoiselessDb = std::numeric_limits<double>::infinity();

/// Per-real-dimension noise variance 10^(-EsN0/10) / 2 for unit symbol energy.
double noise_variance(double es_n0_db);

/// Adds N(0, sigma^2) to each coordinate. Gaussians come from Box-Muller on
/// pairs of 53-bit uniforms u1, u2: r = sqrt(-2 ln(1 - u1)), theta = 2 pi u2,
/// (r cos theta, r sin theta) for (I, Q).
void add_awgn(std::span<PlanePoint> symbols, double es_n0_db, RandomStream& noise);

struct ChannelConfig {
  double es_n0_db = kNoiselessDb;
  Seed noise_seed;
};

/// Stream "noise" keyed by the noise seed. Warns on stderr when the input's
/// average energy is far from 1.
SymbolStream awgn(std::span<const PlanePoint> symbols, const ChannelConfig& config);

enum class Scheme { Qam, QamDr, Ecm, EcmDr };

std::string scheme_name(Scheme scheme);
/// Accepts qam, qam-dr, ecm, ecm-dr and QAM aliases such as qpsk, 16qam-dr.
/// For aliases the implied order is written to *order when non-null.
Scheme parse_scheme(std::string_view name, int* order = nullptr);

struct SchemeSpec {
  Scheme scheme = Scheme::Qam;
  int order = 4;
  /// Required for the ECM schemes; must outlive the call.
  const TupleBank* bank = nullptr;
  /// Shared secret that drives tuple selection and rotations.
  Seed key;
  TupleSelection selection = TupleSelection::Uniform;
  std::size_t rotation_block = 1;

  bool dynamic_rotation() const { return scheme == Scheme::QamDr || scheme == Scheme::EcmDr; }
  bool is_ecm() const { return scheme == Scheme::Ecm || scheme == Scheme::EcmDr; }
  std::size_t n_tuples() const { return is_ecm() ? bank->size() : 1; }
  ScheduleConfig schedule_config() const;
};

struct SepRow {
  double es_n0_db = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t errors = 0;
  double sep = 0.0;
  double half_width = 0.0;  // 1.96 sqrt(sep (1 - sep) / trials)
};

struct SepReport {
  std::string scheme;
  int order = 0;
  std::vector<SepRow> rows;

  std::string to_csv() const;
};

struct SweepOptions {
  std::uint64_t trials = 100'000;
  Seed noise_seed;
  /// 0 uses the hardware concurrency.
  unsigned threads = 0;
  /// Trials per independent substream; results do not depend on `threads`.
  std::uint64_t chunk = 1 << 16;
};

/// For each Es/N0: random symbols (stream "data/<c>"), modulation, AWGN
/// (stream "noise/<snr>/<c>"), detection, symbol-index error count. Chunks
/// are merged by summation. Throws InvalidArgument when trials < 1000.
SepReport sep_sweep(const SchemeSpec& spec, std::span<const double> es_n0_db,
                    const SweepOptions& options);

/// Closed-form Gray-free square QAM symbol error probability in AWGN.
double qam_sep_theory(int order, double es_n0_db);

/// Es/N0 where a monotone SEP curve crosses `target`, interpolating linearly
/// in log10(SEP); nullopt when the sweep never brackets it.
std::optional<double> snr_at_sep(const SepReport& report, double target);

struct EntropyReport {
  int q = 0;
  double region = 0.0;  // half-width R
  std::uint64_t samples = 0;
  std::uint64_t clamped = 0;
  double entropy_bits = 0.0;

  double clamp_fraction() const {
    return samples == 0 ? 0.0 : static_cast<double>(clamped) / static_cast<double>(samples);
  }
};

/// Histogram entropy over 2^q x 2^q cells tiling [-R, R)^2; samples outside
/// the region are clamped into the nearest edge cell and counted.
/// Throws NoSamples, InvalidArgument (q outside [1, 16], R <= 0).
EntropyReport quantized_entropy(std::span<const PlanePoint> samples, int q, double region);

std::string entropy_csv(std::span<const EntropyReport> rows);

/// `count` transmitted symbols for random payloads (stream "payload" keyed by
/// the noise seed), optionally passed through AWGN.
SymbolStream scatter_samples(const SchemeSpec& spec, std::uint64_t count, const Seed& noise_seed,
                             double es_n0_db = kNoiselessDb);

/// Number of distinct (I, Q) pairs, bitwise.
std::size_t distinct_points(std::span<const PlanePoint> samples);

}  // namespace ecm
