#pragma once

// Seed-keyed ChaCha20 keystreams with domain separation. Two parties holding
// the same 32-byte seed derive identical streams for the same tag.

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "ecm/ec_core.hpp"

namespace ecm {

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(std::span<const std::uint8_t> data);
Digest sha256(std::string_view data);
std::string to_hex(std::span<const std::uint8_t> bytes);

/// Shared 256-bit secret.
struct Seed {
  std::array<std::uint8_t, 32> bytes{};

  /// Exactly 64 hex characters. Throws ParseError.
  static Seed from_hex(std::string_view hex);
  std::string to_hex() const;
  /// Hex SHA-256 of the seed bytes; safe to publish.
  std::string fingerprint() const;

  friend bool operator==(const Seed&, const Seed&) = default;
};

/// Raw RFC 8439 keystream starting at `counter`, written into `out`.
void chacha20_keystream(std::span<const std::uint8_t, 32> key,
                        std::span<const std::uint8_t, 12> nonce, std::uint32_t counter,
                        std::span<std::uint8_t> out);

class RandomStream {
 public:
  static constexpr std::size_t kBlockBytes = 64;

  RandomStream(const Seed& seed, std::string_view domain_tag);
  RandomStream(RandomStream&&) noexcept;
  RandomStream& operator=(RandomStream&&) noexcept;
  ~RandomStream();

  /// Repositions the stream at the start of 64-byte keystream block `block`.
  void seek_block(std::uint64_t block);

  void fill(std::span<std::uint8_t> out);
  std::uint64_t next_u64();
  /// Unbiased draw from [0, bound) by rejection on 64-bit words.
  std::uint64_t uniform_int(std::uint64_t bound);
  /// 53 uniform bits scaled into [0, 1).
  double uniform_real();
  /// Unbiased draw from [0, bound) for arbitrary-precision bounds.
  BigInt uniform_big(const BigInt& bound);

 private:
  void refill();

  struct Cipher;
  std::unique_ptr<Cipher> cipher_;
  std::array<std::uint8_t, 16 * kBlockBytes> buffer_{};
  std::size_t pos_ = 0;
  std::size_t size_ = 0;
  std::size_t refill_bytes_ = kBlockBytes;
};

/// Stream for `domain_tag` (must be nonempty) keyed by `seed`.
RandomStream derive_stream(const Seed& seed, std::string_view domain_tag);

}  // namespace ecm
