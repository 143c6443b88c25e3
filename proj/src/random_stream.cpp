#include "ecm/random_stream.hpp"

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <algorithm>
#include <cstring>
#include <limits>
#include <vector>

namespace ecm {

Digest sha256(std::span<const std::uint8_t> data) {
  Digest out{};
  SHA256(data.data(), data.size(), out.data());
  return out;
}

Digest sha256(std::string_view data) {
  return sha256(std::span(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 0xF]);
  }
  return s;
}

Seed Seed::from_hex(std::string_view hex) {
  if (hex.size() != 64) throw Error(ErrorKind::ParseError, "seed must be 64 hex characters");
  auto nibble = [&](char c) -> std::uint8_t {
    if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
    throw Error(ErrorKind::ParseError, "seed contains a non-hex character");
  };
  Seed seed;
  for (std::size_t i = 0; i < 32; ++i) {
    seed.bytes[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
  }
  return seed;
}

std::string Seed::to_hex() const { return ecm::to_hex(bytes); }

std::string Seed::fingerprint() const { return ecm::to_hex(sha256(bytes)); }

namespace {

struct CtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using CtxPtr = std::unique_ptr<EVP_CIPHER_CTX, CtxDeleter>;

void init_chacha(EVP_CIPHER_CTX* ctx, const std::uint8_t* key, const std::uint8_t* nonce,
                 std::uint32_t counter) {
  std::array<std::uint8_t, 16> iv{};
  for (int i = 0; i < 4; ++i) iv[i] = static_cast<std::uint8_t>(counter >> (8 * i));
  std::memcpy(iv.data() + 4, nonce, 12);
  if (EVP_EncryptInit_ex(ctx, EVP_chacha20(), nullptr, key, iv.data()) != 1) {
    throw Error(ErrorKind::InvalidArgument, "ChaCha20 initialisation failed");
  }
}

void keystream(EVP_CIPHER_CTX* ctx, std::span<std::uint8_t> out) {
  static const std::vector<std::uint8_t> zeros(4096, 0);
  std::size_t done = 0;
  while (done < out.size()) {
    const auto chunk = static_cast<int>(std::min<std::size_t>(zeros.size(), out.size() - done));
    int written = 0;
    if (EVP_EncryptUpdate(ctx, out.data() + done, &written, zeros.data(), chunk) != 1) {
      throw Error(ErrorKind::InvalidArgument, "ChaCha20 keystream generation failed");
    }
    done += static_cast<std::size_t>(written);
  }
}

}  // namespace

void chacha20_keystream(std::span<const std::uint8_t, 32> key,
                        std::span<const std::uint8_t, 12> nonce, std::uint32_t counter,
                        std::span<std::uint8_t> out) {
  CtxPtr ctx(EVP_CIPHER_CTX_new());
  init_chacha(ctx.get(), key.data(), nonce.data(), counter);
  keystream(ctx.get(), out);
}

struct RandomStream::Cipher {
  CtxPtr ctx;
  std::array<std::uint8_t, 32> key{};
  std::array<std::uint8_t, 12> nonce{};
};

RandomStream::RandomStream(const Seed& seed, std::string_view domain_tag)
    : cipher_(std::make_unique<Cipher>()) {
  if (domain_tag.empty()) throw Error(ErrorKind::InvalidArgument, "domain tag must be nonempty");
  cipher_->ctx.reset(EVP_CIPHER_CTX_new());
  cipher_->key = seed.bytes;
  const Digest tag_hash = sha256(domain_tag);
  std::copy_n(tag_hash.begin(), 12, cipher_->nonce.begin());
  seek_block(0);
}

RandomStream::RandomStream(RandomStream&&) noexcept = default;
RandomStream& RandomStream::operator=(RandomStream&&) noexcept = default;
RandomStream::~RandomStream() = default;

void RandomStream::seek_block(std::uint64_t block) {
  if (block > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorKind::InvalidArgument, "stream position beyond 2^32 blocks");
  }
  init_chacha(cipher_->ctx.get(), cipher_->key.data(), cipher_->nonce.data(),
              static_cast<std::uint32_t>(block));
  pos_ = 0;
  size_ = 0;
  // Random-access callers usually need one block; sequential reads widen again.
  refill_bytes_ = kBlockBytes;
}

void RandomStream::refill() {
  keystream(cipher_->ctx.get(), std::span(buffer_.data(), refill_bytes_));
  pos_ = 0;
  size_ = refill_bytes_;
  refill_bytes_ = buffer_.size();
}

void RandomStream::fill(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    if (pos_ == size_) refill();
    const std::size_t n = std::min(size_ - pos_, out.size() - done);
    std::memcpy(out.data() + done, buffer_.data() + pos_, n);
    pos_ += n;
    done += n;
  }
}

std::uint64_t RandomStream::next_u64() {
  if (size_ - pos_ < 8) {
    std::array<std::uint8_t, 8> b{};
    fill(b);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
    return v;
  }
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | buffer_[pos_ + static_cast<std::size_t>(i)];
  pos_ += 8;
  return v;
}

std::uint64_t RandomStream::uniform_int(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorKind::InvalidArgument, "uniform_int bound must be positive");
  if (bound == 1) {
    next_u64();
    return 0;
  }
  // Accept words below the largest multiple of bound representable in 64 bits.
  const std::uint64_t reject_from = std::numeric_limits<std::uint64_t>::max() -
                                    (std::numeric_limits<std::uint64_t>::max() % bound + 1) % bound;
  for (;;) {
    const std::uint64_t w = next_u64();
    if (w <= reject_from) return w % bound;
  }
}

double RandomStream::uniform_real() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

BigInt RandomStream::uniform_big(const BigInt& bound) {
  if (bound <= 0) throw Error(ErrorKind::InvalidArgument, "uniform_big bound must be positive");
  const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  const std::size_t words = (bits + 63) / 64;
  std::vector<std::uint64_t> limbs(words);
  for (;;) {
    for (auto& w : limbs) w = next_u64();
    if (bits % 64 != 0) limbs.back() &= (std::uint64_t{1} << (bits % 64)) - 1;
    BigInt v;
    mpz_import(v.get_mpz_t(), words, -1, sizeof(std::uint64_t), 0, 0, limbs.data());
    if (v < bound) return v;
  }
}

RandomStream derive_stream(const Seed& seed, std::string_view domain_tag) {
  return RandomStream(seed, domain_tag);
}

}  // namespace ecm
