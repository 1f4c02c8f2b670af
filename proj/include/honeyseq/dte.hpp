#pragma once

#include <array>

#include "honeyseq/common.hpp"
#include "honeyseq/genome_model.hpp"
#include "honeyseq/rng.hpp"

namespace honeyseq::dte {

// Sequence length and per-SNV storage overhead. The seed space is the
// half-open integer range [0, 2^{h*n}).
struct DteParams {
  std::size_t n = 0;
  unsigned h = 4;

  void validate() const {
    if (n == 0) throw std::invalid_argument("sequence length must be >= 1");
    if (h < 2) throw std::invalid_argument("storage overhead h must be >= 2 (> log2 3)");
  }
  std::size_t seed_bits() const { return n * h; }
  BigInt seed_space() const { return pow2(seed_bits()); }
};

// Half-open integer interval [lo, hi).
struct SeedInterval {
  BigInt lo;
  BigInt hi;

  BigInt width() const { return hi - lo; }
  bool contains(const BigInt& s) const { return s >= lo && s < hi; }
  bool operator==(const SeedInterval& o) const { return lo == o.lo && hi == o.hi; }
};

// Splits [lo, hi) into the three child intervals at tree depth `depth`
// (0-based; children live at depth+1). Child sizes are multiples of the
// unit u = 3^{n-depth-1} nearest to their probability share, allocated
// left to right with the rightmost child absorbing the remainder; every
// child is kept >= u by stealing units from the largest sibling, so each
// descendant leaf holds at least one integer. Shares are taken from the
// probabilities rounded to 12 decimal digits, which keeps the partition
// reproducible across platforms.
std::array<SeedInterval, 3> split_interval(const SeedInterval& parent,
                                           const Dist3& d,
                                           std::size_t depth, std::size_t n);

// Walks the ternary prefix tree root to leaf along `seq` and returns a
// uniform random integer from the leaf interval.
BigInt encode(const CondModel& cond, const GenotypeSequence& seq,
              const DteParams& params, Rng& rng);

// Returns the unique sequence whose leaf interval contains `seed`.
// Total: every seed in [0, 2^{h*n}) decodes.
GenotypeSequence decode(const CondModel& cond, const BigInt& seed,
                        const DteParams& params);

struct DecodeResult {
  GenotypeSequence sequence;
  SeedInterval leaf;
};

// decode plus the containing leaf interval from the same walk.
DecodeResult decode_with_interval(const CondModel& cond, const BigInt& seed,
                                  const DteParams& params);

// The exact integer interval of the leaf for `seq`; its width is the
// sequence weight used by attack G2.
SeedInterval leaf_interval(const CondModel& cond, const GenotypeSequence& seq,
                           const DteParams& params);

struct ProbCdf {
  double probability;
  double cdf;
};

// Infinite-precision reference: probability is the product of conditionals
// along seq; the CDF accumulates left-sibling subtree masses down the path
// (never a 3^n enumeration). CDF includes seq itself.
ProbCdf sequence_probability_and_cdf(const CondModel& cond, const GenotypeSequence& seq);

// Convenience overloads over a PopulationModel + selector.
BigInt encode(const PopulationModel& model, const GenotypeSequence& seq,
              const DteParams& params, Selector sel, Rng& rng);
GenotypeSequence decode(const PopulationModel& model, const BigInt& seed,
                        const DteParams& params, Selector sel);
SeedInterval leaf_interval(const PopulationModel& model, const GenotypeSequence& seq,
                           const DteParams& params, Selector sel);
ProbCdf sequence_probability_and_cdf(const PopulationModel& model,
                                     const GenotypeSequence& seq, Selector sel);

}  // namespace honeyseq::dte
