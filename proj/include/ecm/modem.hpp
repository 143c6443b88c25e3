#pragma once

// Bit grouping, seed-synchronised per-symbol schedules and the ECM / QAM
// modulators with their minimum-distance detectors.

#include <cstdint>
#include <span>
#include <vector>

#include "ecm/constellation.hpp"
#include "ecm/random_stream.hpp"
#include "ecm/tuplegen.hpp"

namespace ecm {

using BitStream = std::vector<std::uint8_t>;  // one bit (0 or 1) per element
using SymbolStream = std::vector<PlanePoint>;

/// log2(M); throws UnsupportedOrder unless M is a power of two >= 2.
int bits_per_symbol(int order);

/// Unpacks bytes most-significant bit first.
BitStream unpack_bytes(std::span<const std::uint8_t> bytes);
/// Packs bits MSB first; a trailing partial byte is zero-filled.
std::vector<std::uint8_t> pack_bits(std::span<const std::uint8_t> bits);

/// Big-endian natural binary per group of log2(M) bits. With `pad` the
/// stream is zero-extended to a group boundary, otherwise a ragged length
/// throws LengthNotDivisible.
std::vector<std::uint32_t> bits_to_indices(std::span<const std::uint8_t> bits, int order,
                                           bool pad = false);
BitStream indices_to_bits(std::span<const std::uint32_t> indices, int order);

enum class TupleSelection { Uniform, RoundRobin };

struct ScheduleRecord {
  std::uint32_t tuple_index = 0;
  double rotation = 0.0;  // radians in [0, 2*pi)

  friend bool operator==(const ScheduleRecord&, const ScheduleRecord&) = default;
};

using TransmissionSchedule = std::vector<ScheduleRecord>;

struct ScheduleConfig {
  std::size_t n_tuples = 1;
  bool dynamic_rotation = false;
  TupleSelection selection = TupleSelection::Uniform;
  /// Symbols sharing one rotation angle.
  std::size_t rotation_block = 1;
};

/// Random-access schedule: record t is computed from keystream block t of the
/// "schedule" stream and block t / rotation_block of the "rotation" stream,
/// so any symbol range can be produced independently.
class ScheduleGenerator {
 public:
  ScheduleGenerator(const Seed& seed, const ScheduleConfig& config);

  ScheduleRecord at(std::uint64_t position);
  TransmissionSchedule range(std::uint64_t first, std::size_t count);

  const ScheduleConfig& config() const noexcept { return config_; }

 private:
  ScheduleConfig config_;
  RandomStream index_stream_;
  RandomStream rotation_stream_;
};

TransmissionSchedule make_schedule(const Seed& seed, std::size_t n_tuples, std::size_t count,
                                   bool dynamic_rotation,
                                   TupleSelection selection = TupleSelection::Uniform);

/// Symbol t = rotate(bank[schedule[t].tuple_index].points[index_t], angle_t).
/// Throws ScheduleTooShort or BankMismatch.
SymbolStream ecm_modulate_indices(std::span<const std::uint32_t> indices, const TupleBank& bank,
                                  std::span<const ScheduleRecord> schedule);
/// De-rotate, then nearest tuple point (lowest index on ties).
std::vector<std::uint32_t> ecm_detect_indices(std::span<const PlanePoint> received,
                                              const TupleBank& bank,
                                              std::span<const ScheduleRecord> schedule);

SymbolStream ecm_modulate(std::span<const std::uint8_t> bits, const TupleBank& bank,
                          std::span<const ScheduleRecord> schedule);
BitStream ecm_demodulate(std::span<const PlanePoint> received, const TupleBank& bank,
                         std::span<const ScheduleRecord> schedule);

/// The QAM pair treats qam_reference(M) as the only tuple; the schedule only
/// contributes rotations. Throws UnsupportedOrder or ScheduleTooShort.
SymbolStream qam_modulate_indices(std::span<const std::uint32_t> indices, int order,
                                  std::span<const ScheduleRecord> schedule);
std::vector<std::uint32_t> qam_detect_indices(std::span<const PlanePoint> received, int order,
                                              std::span<const ScheduleRecord> schedule);
SymbolStream qam_modulate(std::span<const std::uint8_t> bits, int order,
                          std::span<const ScheduleRecord> schedule);
BitStream qam_demodulate(std::span<const PlanePoint> received, int order,
                         std::span<const ScheduleRecord> schedule);

/// Index of the nearest point; ties go to the lowest index.
std::uint32_t nearest_point(PlanePoint p, std::span<const PlanePoint> points);

}  // namespace ecm
