#include "ecm/modem.hpp"

#include <numbers>

namespace ecm {

int bits_per_symbol(int order) {
  if (order < 2 || (order & (order - 1)) != 0) {
    throw Error(ErrorKind::UnsupportedOrder, "M must be a power of two >= 2");
  }
  int k = 0;
  while ((1 << k) < order) ++k;
  return k;
}

BitStream unpack_bytes(std::span<const std::uint8_t> bytes) {
  BitStream bits;
  bits.reserve(bytes.size() * 8);
  for (auto byte : bytes) {
    for (int i = 7; i >= 0; --i) bits.push_back(static_cast<std::uint8_t>((byte >> i) & 1));
  }
  return bits;
}

std::vector<std::uint8_t> pack_bits(std::span<const std::uint8_t> bits) {
  std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) bytes[i / 8] |= static_cast<std::uint8_t>(0x80 >> (i % 8));
  }
  return bytes;
}

std::vector<std::uint32_t> bits_to_indices(std::span<const std::uint8_t> bits, int order,
                                           bool pad) {
  const auto k = static_cast<std::size_t>(bits_per_symbol(order));
  if (bits.size() % k != 0 && !pad) {
    throw Error(ErrorKind::LengthNotDivisible, "bit count is not a multiple of log2(M)");
  }
  std::vector<std::uint32_t> indices((bits.size() + k - 1) / k, 0);
  for (std::size_t s = 0; s < indices.size(); ++s) {
    std::uint32_t v = 0;
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t i = s * k + j;
      v = (v << 1) | (i < bits.size() ? (bits[i] & 1u) : 0u);
    }
    indices[s] = v;
  }
  return indices;
}

BitStream indices_to_bits(std::span<const std::uint32_t> indices, int order) {
  const int k = bits_per_symbol(order);
  BitStream bits;
  bits.reserve(indices.size() * static_cast<std::size_t>(k));
  for (auto v : indices) {
    if (v >= static_cast<std::uint32_t>(order)) {
      throw Error(ErrorKind::InvalidArgument, "symbol index out of range");
    }
    for (int j = k - 1; j >= 0; --j) bits.push_back(static_cast<std::uint8_t>((v >> j) & 1));
  }
  return bits;
}

// ---------------------------------------------------------------------------
// Schedules

ScheduleGenerator::ScheduleGenerator(const Seed& seed, const ScheduleConfig& config)
    : config_(config),
      index_stream_(derive_stream(seed, "schedule")),
      rotation_stream_(derive_stream(seed, "rotation")) {
  if (config_.n_tuples == 0) throw Error(ErrorKind::InvalidArgument, "N' must be >= 1");
  if (config_.rotation_block == 0) {
    throw Error(ErrorKind::InvalidArgument, "rotation block length must be >= 1");
  }
}

ScheduleRecord ScheduleGenerator::at(std::uint64_t position) {
  ScheduleRecord rec;
  if (config_.n_tuples > 1) {
    if (config_.selection == TupleSelection::RoundRobin) {
      rec.tuple_index = static_cast<std::uint32_t>(position % config_.n_tuples);
    } else {
      index_stream_.seek_block(position);
      rec.tuple_index = static_cast<std::uint32_t>(index_stream_.uniform_int(config_.n_tuples));
    }
  }
  if (config_.dynamic_rotation) {
    rotation_stream_.seek_block(position / config_.rotation_block);
    rec.rotation = 2.0 * std::numbers::pi * rotation_stream_.uniform_real();
  }
  return rec;
}

TransmissionSchedule ScheduleGenerator::range(std::uint64_t first, std::size_t count) {
  TransmissionSchedule out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(at(first + i));
  return out;
}

TransmissionSchedule make_schedule(const Seed& seed, std::size_t n_tuples, std::size_t count,
                                   bool dynamic_rotation, TupleSelection selection) {
  ScheduleGenerator gen(seed, {n_tuples, dynamic_rotation, selection, 1});
  return gen.range(0, count);
}

// ---------------------------------------------------------------------------
// Modulation

std::uint32_t nearest_point(PlanePoint p, std::span<const PlanePoint> points) {
  std::uint32_t best = 0;
  double best_d = distance_sq(p, points[0]);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double d = distance_sq(p, points[i]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<std::uint32_t>(i);
    }
  }
  return best;
}

namespace {

void check_schedule(std::size_t symbols, std::span<const ScheduleRecord> schedule) {
  if (schedule.size() < symbols) {
    throw Error(ErrorKind::ScheduleTooShort, "schedule has fewer records than symbols");
  }
}

const EcmTuple& scheduled_tuple(const TupleBank& bank, const ScheduleRecord& rec) {
  if (rec.tuple_index >= bank.tuples.size()) {
    throw Error(ErrorKind::BankMismatch, "schedule references a tuple outside the bank");
  }
  return bank.tuples[rec.tuple_index];
}

void check_bank(const TupleBank& bank) {
  if (bank.tuples.empty()) throw Error(ErrorKind::BankMismatch, "bank holds no tuples");
  for (const auto& t : bank.tuples) {
    if (t.points.size() != static_cast<std::size_t>(bank.order)) {
      throw Error(ErrorKind::BankMismatch, "tuple size differs from bank M");
    }
  }
}

}  // namespace

SymbolStream ecm_modulate_indices(std::span<const std::uint32_t> indices, const TupleBank& bank,
                                  std::span<const ScheduleRecord> schedule) {
  check_bank(bank);
  check_schedule(indices.size(), schedule);
  SymbolStream out;
  out.reserve(indices.size());
  for (std::size_t t = 0; t < indices.size(); ++t) {
    const EcmTuple& tuple = scheduled_tuple(bank, schedule[t]);
    if (indices[t] >= tuple.points.size()) {
      throw Error(ErrorKind::BankMismatch, "symbol index exceeds bank M");
    }
    out.push_back(rotate(tuple.points[indices[t]], schedule[t].rotation));
  }
  return out;
}

std::vector<std::uint32_t> ecm_detect_indices(std::span<const PlanePoint> received,
                                              const TupleBank& bank,
                                              std::span<const ScheduleRecord> schedule) {
  check_bank(bank);
  check_schedule(received.size(), schedule);
  std::vector<std::uint32_t> out;
  out.reserve(received.size());
  for (std::size_t t = 0; t < received.size(); ++t) {
    const EcmTuple& tuple = scheduled_tuple(bank, schedule[t]);
    const PlanePoint derotated = rotate(received[t], -schedule[t].rotation);
    out.push_back(nearest_point(derotated, tuple.points));
  }
  return out;
}

SymbolStream ecm_modulate(std::span<const std::uint8_t> bits, const TupleBank& bank,
                          std::span<const ScheduleRecord> schedule) {
  return ecm_modulate_indices(bits_to_indices(bits, bank.order), bank, schedule);
}

BitStream ecm_demodulate(std::span<const PlanePoint> received, const TupleBank& bank,
                         std::span<const ScheduleRecord> schedule) {
  return indices_to_bits(ecm_detect_indices(received, bank, schedule), bank.order);
}

SymbolStream qam_modulate_indices(std::span<const std::uint32_t> indices, int order,
                                  std::span<const ScheduleRecord> schedule) {
  const Constellation qam = qam_reference(order);
  check_schedule(indices.size(), schedule);
  SymbolStream out;
  out.reserve(indices.size());
  for (std::size_t t = 0; t < indices.size(); ++t) {
    if (indices[t] >= qam.points.size()) {
      throw Error(ErrorKind::InvalidArgument, "symbol index exceeds M");
    }
    out.push_back(rotate(qam.points[indices[t]], schedule[t].rotation));
  }
  return out;
}

std::vector<std::uint32_t> qam_detect_indices(std::span<const PlanePoint> received, int order,
                                              std::span<const ScheduleRecord> schedule) {
  const Constellation qam = qam_reference(order);
  check_schedule(received.size(), schedule);
  std::vector<std::uint32_t> out;
  out.reserve(received.size());
  for (std::size_t t = 0; t < received.size(); ++t) {
    out.push_back(nearest_point(rotate(received[t], -schedule[t].rotation), qam.points));
  }
  return out;
}

SymbolStream qam_modulate(std::span<const std::uint8_t> bits, int order,
                          std::span<const ScheduleRecord> schedule) {
  return qam_modulate_indices(bits_to_indices(bits, order), order, schedule);
}

BitStream qam_demodulate(std::span<const PlanePoint> received, int order,
                         std::span<const ScheduleRecord> schedule) {
  return indices_to_bits(qam_detect_indices(received, order, schedule), order);
}

}  // namespace ecm
