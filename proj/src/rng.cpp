#include "honeyseq/rng.hpp"

namespace honeyseq {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: bound must be > 0");
  // Largest multiple of bound that fits in 64 bits.
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    std::uint64_t x = next_u64();
    if (x < limit) return x % bound;
  }
}

BigInt Rng::big_below(const BigInt& bound) {
  if (bound <= 0) throw std::invalid_argument("Rng::big_below: bound must be > 0");
  std::size_t bits = msb(bound) + 1;
  std::size_t words = (bits + 63) / 64;
  for (;;) {
    BigInt x = 0;
    for (std::size_t w = 0; w < words; ++w) {
      x <<= 64;
      x += next_u64();
    }
    x >>= (words * 64 - bits);
    if (x < bound) return x;
  }
}

std::vector<std::uint8_t> Rng::bytes(std::size_t count) {
  std::vector<std::uint8_t> out(count);
  std::size_t i = 0;
  while (i < count) {
    std::uint64_t x = next_u64();
    for (int b = 0; b < 8 && i < count; ++b, ++i) {
      out[i] = static_cast<std::uint8_t>(x >> (8 * b));
    }
  }
  return out;
}

Rng Rng::substream(std::uint64_t seed, std::uint64_t stream_id) {
  return Rng(mix64(seed ^ mix64(stream_id)));
}

}  // namespace honeyseq
