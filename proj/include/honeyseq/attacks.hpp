#pragma once

#include <string>
#include <vector>

#include "honeyseq/honey_crypto.hpp"

namespace honeyseq::attacks {

// Ordered list of distinct candidate passwords, e.g. a leaked top-N list.
struct PasswordCorpus {
  std::vector<std::string> passwords;
  bool contains_true_password = false;

  std::size_t size() const { return passwords.size(); }

  // Deduplicates preserving first occurrence; rejects an empty result.
  static PasswordCorpus from_lines(const std::vector<std::string>& lines);

  bool contains(const std::string& p) const;
};

// One decryption attempt per corpus password.
struct PoolEntry {
  GenotypeSequence sequence;
  BigInt interval_size;     // width of the decoded sequence's leaf interval
  std::size_t si_weight;    // matched side-info pairs
};

struct HoneyPool {
  std::vector<PoolEntry> entries;  // corpus order

  std::size_t size() const { return entries.size(); }
};

// Decrypts the ciphertext under every corpus password and records the decoy
// sequence, its leaf-interval size, and how many side-info pairs it matches.
// Parallelized over passwords (capped by HONEYSEQ_THREADS); output order is
// corpus order regardless of thread count.
HoneyPool build_honey_pool(const crypto::Ciphertext& ct, const PasswordCorpus& corpus,
                           const PopulationModel& model, const SideInformation& side_info);

// The filtered key set K_q plus the deduplicated sequences used for
// advantage accounting. Weights are recomputed from the pool sequences, so
// one pool serves any number of side-info sets.
struct CandidateSet {
  std::vector<std::size_t> entry_indices;            // into pool, corpus order
  std::vector<GenotypeSequence> distinct_sequences;  // first-seen order
};

CandidateSet mr_si_filter(const HoneyPool& pool, const SideInformation& side_info);

// 1/|distinct candidate sequences| if the target is among them, else 0.
// An empty candidate set scores 0.
double advantage(const CandidateSet& candidates, const GenotypeSequence& target);

// Analytic floor 1/(2 n^2) on the side-informed adversary's advantage,
// n = ceil(log2 |key space|) bits.
double advantage_lower_bound(unsigned key_space_bits);
unsigned key_space_bits(std::uint64_t key_space_size);

struct SecurityBoundInputs {
  double w = 0.01;      // max password probability, (0, 1]
  double gamma = 1.0;   // max sequence probability, (0, 1]
  std::size_t n = 0;    // sequence length
  double h = 4.0;       // storage overhead, > log2 3
  double delta = 0.0;   // the w/gamma-dependent slack; an input, not derived

  void validate() const;
};

struct RecoveryBound {
  double bound;           // w(1+delta) + Delta (Delta may underflow to 0)
  double delta_term_log2; // log2 of the finite-precision loss term
};

// Upper bound on message recovery probability, evaluated in log space so
// sequence lengths up to 1e5 do not overflow:
//   log2 Delta = log2(3^n + 1/w) - (h - log2 3) n.
RecoveryBound recovery_upper_bound(const SecurityBoundInputs& inp);

// Inference from honey sequences: restrict to the entries with maximal
// side-info weight, output revealed values at revealed positions and the
// per-position mode elsewhere (ties toward the smaller value).
GenotypeSequence g1_infer(const HoneyPool& pool, const SideInformation& side_info,
                          std::size_t n);

// As g1_infer, but each entry's vote is weighted by its leaf-interval size.
GenotypeSequence g2_infer(const HoneyPool& pool, const SideInformation& side_info,
                          std::size_t n);

enum class AccuracyMode { all, hidden_only };

AccuracyMode accuracy_mode_from_name(const std::string& name);

// Fraction of agreeing positions; hidden_only excludes revealed positions
// (vacuously 1 when nothing is hidden).
double accuracy(const GenotypeSequence& predicted, const GenotypeSequence& target,
                const SideInformation& side_info, AccuracyMode mode);

// Monte-Carlo run of the MR-SI game: sample key and message, encrypt,
// reveal q positions (q uniform over 0..n_bits-1), filter the key space,
// guess a uniform surviving key, and score a win when its decryption equals
// the target. Validates the 1/(2 n_bits^2) floor by simulation.
struct GameResult {
  double empirical_advantage;
  double std_error;
  std::size_t trials;
  unsigned n_bits;
};

GameResult simulate_mr_si_game(const PopulationModel& model, const dte::DteParams& params,
                               Selector sel, const PasswordCorpus& corpus,
                               std::uint32_t kdf_cost, std::size_t trials, Rng& rng);

}  // namespace honeyseq::attacks
