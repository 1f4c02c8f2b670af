#include "honeyseq/dte.hpp"

#include <cmath>

namespace honeyseq::dte {

namespace {

constexpr std::int64_t kShareScale = 1'000'000'000'000LL;  // 12 decimal digits

// round-half-up of num/den for non-negative num, positive den.
BigInt div_round_half_up(const BigInt& num, const BigInt& den) {
  return (2 * num + den) / (2 * den);
}

void check_inputs(const CondModel& cond, const GenotypeSequence& seq,
                  const DteParams& params) {
  params.validate();
  seq.validate();
  if (seq.size() != params.n)
    throw std::invalid_argument("sequence length != DTE length parameter");
  if (cond.site_count() != params.n)
    throw std::invalid_argument("conditional model site count != DTE length parameter");
}

}  // namespace

std::array<SeedInterval, 3> split_interval(const SeedInterval& parent,
                                           const Dist3& d,
                                           std::size_t depth, std::size_t n) {
  if (depth >= n) throw std::out_of_range("split depth past leaf level");
  const BigInt unit = pow3(n - depth - 1);
  const BigInt w = parent.width();
  if (w < 3 * unit)
    throw std::invalid_argument("interval too small to allocate three children");

  // Integer unit counts for the left and middle child, nearest to their
  // probability share but at least one unit each.
  const BigInt den = unit * kShareScale;
  BigInt sizes[3];
  for (int v = 0; v < 2; ++v) {
    double p = d[v];
    if (!(p >= 0.0)) p = 0.0;
    if (p > 1.0) p = 1.0;
    auto share = static_cast<std::int64_t>(std::llround(p * double(kShareScale)));
    BigInt k = div_round_half_up(BigInt(share) * w, den);
    if (k < 1) k = 1;
    sizes[v] = k * unit;
  }
  sizes[2] = w - sizes[0] - sizes[1];

  // Force the remainder child up to >= unit by stealing whole units from
  // the larger of its siblings (whose size is then still >= unit).
  while (sizes[2] < unit) {
    if (sizes[0] >= sizes[1]) sizes[0] -= unit;
    else sizes[1] -= unit;
    sizes[2] += unit;
  }

  std::array<SeedInterval, 3> out;
  BigInt lo = parent.lo;
  for (int v = 0; v < 3; ++v) {
    out[v].lo = lo;
    lo += sizes[v];
    out[v].hi = lo;
  }
  return out;
}

BigInt encode(const CondModel& cond, const GenotypeSequence& seq,
              const DteParams& params, Rng& rng) {
  SeedInterval leaf = leaf_interval(cond, seq, params);
  return leaf.lo + rng.big_below(leaf.width());
}

SeedInterval leaf_interval(const CondModel& cond, const GenotypeSequence& seq,
                           const DteParams& params) {
  check_inputs(cond, seq, params);
  SeedInterval cur{0, params.seed_space()};
  auto cursor = cond.cursor();
  for (std::size_t depth = 0; depth < params.n; ++depth) {
    auto children = split_interval(cur, cursor->dist(), depth, params.n);
    cur = children[seq[depth]];
    cursor->push(seq[depth]);
  }
  return cur;
}

DecodeResult decode_with_interval(const CondModel& cond, const BigInt& seed,
                                  const DteParams& params) {
  params.validate();
  if (cond.site_count() != params.n)
    throw std::invalid_argument("conditional model site count != DTE length parameter");
  if (seed < 0 || seed >= params.seed_space())
    throw std::out_of_range("seed outside [0, 2^{h*n})");

  DecodeResult out;
  out.sequence.values.reserve(params.n);
  SeedInterval cur{0, params.seed_space()};
  auto cursor = cond.cursor();
  for (std::size_t depth = 0; depth < params.n; ++depth) {
    auto children = split_interval(cur, cursor->dist(), depth, params.n);
    Snv v = children[1].lo > seed ? 0 : (children[2].lo > seed ? 1 : 2);
    out.sequence.values.push_back(v);
    cur = children[v];
    cursor->push(v);
  }
  out.leaf = cur;
  return out;
}

GenotypeSequence decode(const CondModel& cond, const BigInt& seed,
                        const DteParams& params) {
  return decode_with_interval(cond, seed, params).sequence;
}

ProbCdf sequence_probability_and_cdf(const CondModel& cond, const GenotypeSequence& seq) {
  seq.validate();
  if (cond.site_count() != seq.size())
    throw std::invalid_argument("sequence length != model site count");
  auto cursor = cond.cursor();
  double prefix_prob = 1.0;
  double left_mass = 0.0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    Dist3 d = cursor->dist();
    for (Snv v = 0; v < seq[i]; ++v) left_mass += prefix_prob * d[v];
    prefix_prob *= d[seq[i]];
    cursor->push(seq[i]);
  }
  return {prefix_prob, left_mass + prefix_prob};
}

BigInt encode(const PopulationModel& model, const GenotypeSequence& seq,
              const DteParams& params, Selector sel, Rng& rng) {
  return encode(*make_cond_model(model, sel), seq, params, rng);
}

GenotypeSequence decode(const PopulationModel& model, const BigInt& seed,
                        const DteParams& params, Selector sel) {
  return decode(*make_cond_model(model, sel), seed, params);
}

SeedInterval leaf_interval(const PopulationModel& model, const GenotypeSequence& seq,
                           const DteParams& params, Selector sel) {
  return leaf_interval(*make_cond_model(model, sel), seq, params);
}

ProbCdf sequence_probability_and_cdf(const PopulationModel& model,
                                     const GenotypeSequence& seq, Selector sel) {
  return sequence_probability_and_cdf(*make_cond_model(model, sel), seq);
}

}  // namespace honeyseq::dte
