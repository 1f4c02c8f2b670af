#include "honeyseq/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <unordered_set>

namespace honeyseq::attacks {

namespace {

std::size_t thread_budget(std::size_t work_items) {
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HONEYSEQ_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) hw = std::size_t(v);
  }
  return std::max<std::size_t>(1, std::min(hw, work_items));
}

}  // namespace

PasswordCorpus PasswordCorpus::from_lines(const std::vector<std::string>& lines) {
  PasswordCorpus corpus;
  std::unordered_set<std::string> seen;
  for (const auto& line : lines) {
    if (line.empty()) continue;
    if (seen.insert(line).second) corpus.passwords.push_back(line);
  }
  if (corpus.passwords.empty()) throw std::invalid_argument("password corpus is empty");
  return corpus;
}

bool PasswordCorpus::contains(const std::string& p) const {
  return std::find(passwords.begin(), passwords.end(), p) != passwords.end();
}

HoneyPool build_honey_pool(const crypto::Ciphertext& ct, const PasswordCorpus& corpus,
                           const PopulationModel& model, const SideInformation& side_info) {
  if (model.site_count != ct.n)
    throw std::invalid_argument("ciphertext length != model site count");
  for (const auto& [pos, val] : side_info.pairs())
    if (pos >= ct.n) throw std::invalid_argument("side info position out of range");

  HoneyPool pool;
  pool.entries.resize(corpus.size());
  const dte::DteParams params = ct.params();

  auto work = [&](std::size_t begin, std::size_t end) {
    auto cond = make_cond_model(model, ct.selector);
    for (std::size_t i = begin; i < end; ++i) {
      BigInt seed = crypto::hdec_seed(crypto::Password{corpus.passwords[i]}, ct);
      auto decoded = dte::decode_with_interval(*cond, seed, params);
      std::size_t weight = side_info.match_count(decoded.sequence);
      pool.entries[i] = PoolEntry{std::move(decoded.sequence),
                                  decoded.leaf.width(), weight};
    }
  };

  std::size_t nthreads = thread_budget(corpus.size());
  if (nthreads <= 1) {
    work(0, corpus.size());
  } else {
    std::vector<std::thread> threads;
    std::size_t chunk = (corpus.size() + nthreads - 1) / nthreads;
    for (std::size_t t = 0; t < nthreads; ++t) {
      std::size_t begin = t * chunk;
      std::size_t end = std::min(corpus.size(), begin + chunk);
      if (begin >= end) break;
      threads.emplace_back(work, begin, end);
    }
    for (auto& th : threads) th.join();
  }
  return pool;
}

CandidateSet mr_si_filter(const HoneyPool& pool, const SideInformation& side_info) {
  CandidateSet out;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < pool.entries.size(); ++i) {
    const auto& e = pool.entries[i];
    if (!side_info.consistent(e.sequence)) continue;
    out.entry_indices.push_back(i);
    std::string key(e.sequence.values.begin(), e.sequence.values.end());
    if (seen.insert(std::move(key)).second)
      out.distinct_sequences.push_back(e.sequence);
  }
  return out;
}

double advantage(const CandidateSet& candidates, const GenotypeSequence& target) {
  if (candidates.distinct_sequences.empty()) return 0.0;
  for (const auto& seq : candidates.distinct_sequences)
    if (seq == target) return 1.0 / double(candidates.distinct_sequences.size());
  return 0.0;
}

unsigned key_space_bits(std::uint64_t key_space_size) {
  if (key_space_size < 2) return 1;
  unsigned bits = 0;
  std::uint64_t v = key_space_size - 1;
  while (v > 0) {
    ++bits;
    v >>= 1;
  }
  return bits;
}

double advantage_lower_bound(unsigned n_bits) {
  if (n_bits < 1) throw std::invalid_argument("key space bits must be >= 1");
  return 1.0 / (2.0 * double(n_bits) * double(n_bits));
}

void SecurityBoundInputs::validate() const {
  if (!(w > 0.0 && w <= 1.0)) throw std::invalid_argument("w must be in (0, 1]");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must be in (0, 1]");
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  if (!(h > std::log2(3.0))) throw std::invalid_argument("h must exceed log2 3");
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be >= 0");
}

RecoveryBound recovery_upper_bound(const SecurityBoundInputs& inp) {
  inp.validate();
  const double log2_3 = std::log2(3.0);
  // log2(3^n + 1/w) via log-sum-exp.
  double a = double(inp.n) * log2_3;
  double b = -std::log2(inp.w);
  double hi = std::max(a, b), lo = std::min(a, b);
  double log2_num = hi + std::log2(1.0 + std::exp2(lo - hi));
  double delta_log2 = log2_num - (inp.h - log2_3) * double(inp.n);
  double bound = inp.w * (1.0 + inp.delta) + std::exp2(delta_log2);
  return {bound, delta_log2};
}

namespace {

// Mode over sequences[pos] for the supplied entries, each entry weighted;
// ties go to the smallest value.
template <typename Weight>
GenotypeSequence weighted_mode(const std::vector<const PoolEntry*>& entries,
                               const SideInformation& side_info, std::size_t n,
                               const std::vector<Weight>& weights) {
  GenotypeSequence out;
  out.values.assign(n, 0);
  for (std::size_t pos = 0; pos < n; ++pos) {
    if (auto revealed = side_info.at(pos)) {
      out[pos] = *revealed;
      continue;
    }
    Weight votes[3] = {Weight(0), Weight(0), Weight(0)};
    for (std::size_t i = 0; i < entries.size(); ++i)
      votes[entries[i]->sequence[pos]] += weights[i];
    Snv best = 0;
    for (Snv v = 1; v < kSnvAlphabet; ++v)
      if (votes[v] > votes[best]) best = v;
    out[pos] = best;
  }
  return out;
}

std::vector<const PoolEntry*> max_weight_entries(const HoneyPool& pool,
                                                 const SideInformation& side_info) {
  if (pool.entries.empty()) throw std::invalid_argument("honey pool is empty");
  std::size_t best = 0;
  std::vector<std::size_t> matches(pool.entries.size());
  for (std::size_t i = 0; i < pool.entries.size(); ++i) {
    matches[i] = side_info.match_count(pool.entries[i].sequence);
    best = std::max(best, matches[i]);
  }
  std::vector<const PoolEntry*> out;
  for (std::size_t i = 0; i < pool.entries.size(); ++i)
    if (matches[i] == best) out.push_back(&pool.entries[i]);
  return out;
}

}  // namespace

GenotypeSequence g1_infer(const HoneyPool& pool, const SideInformation& side_info,
                          std::size_t n) {
  auto entries = max_weight_entries(pool, side_info);
  std::vector<std::size_t> ones(entries.size(), 1);
  return weighted_mode(entries, side_info, n, ones);
}

GenotypeSequence g2_infer(const HoneyPool& pool, const SideInformation& side_info,
                          std::size_t n) {
  auto entries = max_weight_entries(pool, side_info);
  std::vector<BigInt> weights;
  weights.reserve(entries.size());
  for (const auto* e : entries) weights.push_back(e->interval_size);
  return weighted_mode(entries, side_info, n, weights);
}

AccuracyMode accuracy_mode_from_name(const std::string& name) {
  if (name == "all") return AccuracyMode::all;
  if (name == "hidden_only") return AccuracyMode::hidden_only;
  throw ConfigError("unknown accuracy mode: " + name);
}

double accuracy(const GenotypeSequence& predicted, const GenotypeSequence& target,
                const SideInformation& side_info, AccuracyMode mode) {
  if (predicted.size() != target.size())
    throw std::invalid_argument("predicted/target length mismatch");
  std::size_t counted = 0, correct = 0;
  for (std::size_t pos = 0; pos < target.size(); ++pos) {
    if (mode == AccuracyMode::hidden_only && side_info.at(pos)) continue;
    ++counted;
    if (predicted[pos] == target[pos]) ++correct;
  }
  if (counted == 0) return 1.0;  // nothing guessed
  return double(correct) / double(counted);
}

GameResult simulate_mr_si_game(const PopulationModel& model, const dte::DteParams& params,
                               Selector sel, const PasswordCorpus& corpus,
                               std::uint32_t kdf_cost, std::size_t trials, Rng& rng) {
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  const unsigned n_bits = key_space_bits(corpus.size());
  auto cond = make_cond_model(model, sel);
  std::size_t wins = 0;

  for (std::size_t t = 0; t < trials; ++t) {
    const std::string& true_pw = corpus.passwords[rng.below(corpus.size())];
    GenotypeSequence target = sample_sequence(*cond, rng);
    crypto::Ciphertext ct = crypto::henc(crypto::Password{true_pw}, target, model,
                                         params, sel, kdf_cost, rng);

    // q uniform over 0..n_bits-1, positions uniform without replacement.
    std::size_t q = rng.below(n_bits);
    q = std::min(q, params.n);
    std::vector<std::size_t> positions(params.n);
    for (std::size_t i = 0; i < params.n; ++i) positions[i] = i;
    rng.shuffle(positions);
    std::vector<std::pair<std::size_t, Snv>> pairs;
    for (std::size_t i = 0; i < q; ++i)
      pairs.emplace_back(positions[i], target[positions[i]]);
    SideInformation si(std::move(pairs), params.n);

    HoneyPool pool = build_honey_pool(ct, corpus, model, si);
    CandidateSet kq = mr_si_filter(pool, si);
    // K_q always contains the true key.
    const auto& pick = kq.entry_indices[rng.below(kq.entry_indices.size())];
    if (pool.entries[pick].sequence == target) ++wins;
  }

  double p = double(wins) / double(trials);
  double se = std::sqrt(std::max(p * (1.0 - p), 1e-12) / double(trials));
  return {p, se, trials, n_bits};
}

}  // namespace honeyseq::attacks
