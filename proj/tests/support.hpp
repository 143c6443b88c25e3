#pragma once

#include <cstdint>
#include <string>

#include "ecm/random_stream.hpp"

namespace ecm::test {

inline Seed seed_a() {
  return Seed::from_hex("000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f");
}

inline Seed seed_b() {
  return Seed::from_hex("1f1e1d1c1b1a191817161514131211100f0e0d0c0b0a09080706050403020100");
}

/// Seed whose bytes are all `fill`, followed by the little-endian `n`.
inline Seed numbered_seed(std::uint64_t n, std::uint8_t fill = 0x5a) {
  Seed s;
  s.bytes.fill(fill);
  for (int i = 0; i < 8; ++i) s.bytes[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(n >> (8 * i));
  return s;
}

}  // namespace ecm::test
