#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "honeyseq/common.hpp"

namespace honeyseq {

// Deterministic random source. All sampling helpers are implemented here
// instead of <random> distributions, whose output is implementation-defined;
// this keeps experiment CSVs byte-identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, bound), bound > 0. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound);

  // Uniform BigInt in [0, bound), bound > 0.
  BigInt big_below(const BigInt& bound);

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Bernoulli(p).
  bool flip(double p) { return uniform() < p; }

  std::vector<std::uint8_t> bytes(std::size_t count);

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Independent child stream; distinct (seed, stream id) pairs give
  // uncorrelated streams. Used to make parallel trials reproducible.
  static Rng substream(std::uint64_t seed, std::uint64_t stream_id);

 private:
  std::mt19937_64 engine_;
};

// splitmix64 finalizer, used for stream-id mixing.
std::uint64_t mix64(std::uint64_t x);

}  // namespace honeyseq
