#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "honeyseq/common.hpp"
#include "honeyseq/rng.hpp"

namespace honeyseq {

// Reference panel of binary haplotypes, K rows x n columns.
struct HaplotypePanel {
  std::vector<std::vector<std::uint8_t>> rows;

  std::size_t size() const { return rows.size(); }
  std::size_t site_count() const { return rows.empty() ? 0 : rows[0].size(); }

  // Rectangular, entries in {0,1}, K >= 2.
  void validate() const;
};

// Truthful (position, value) pairs revealed from a target sequence.
// Positions are kept sorted and unique.
class SideInformation {
 public:
  SideInformation() = default;
  SideInformation(std::vector<std::pair<std::size_t, Snv>> pairs, std::size_t n);

  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  const std::vector<std::pair<std::size_t, Snv>>& pairs() const { return pairs_; }

  // Value at position, if revealed.
  std::optional<Snv> at(std::size_t pos) const;

  // Number of positions where seq agrees with every revealed pair.
  std::size_t match_count(const GenotypeSequence& seq) const;
  bool consistent(const GenotypeSequence& seq) const { return match_count(seq) == size(); }

 private:
  std::vector<std::pair<std::size_t, Snv>> pairs_;  // sorted by position
};

using JointTable = std::array<std::array<double, 3>, 3>;  // [prev][cur]

// Per-site allele statistics plus the haplotype panel and copying-model
// parameters. Immutable after construction; shareable across threads.
struct PopulationModel {
  std::size_t site_count = 0;
  std::vector<Dist3> allele_freq;                       // one per site
  std::vector<std::optional<JointTable>> joint_adjacent;  // index i -> pair (i-1, i); nullopt = not in LD
  HaplotypePanel panel;
  double rho = 0.5;    // recombination parameter, >= 0
  double theta = 0.01; // miscopy probability per haploid allele, [0, 0.5)

  void validate() const;
};

// Dependence score for a smoothed joint table against its marginals:
// sum over cells of (p_uv - p_u p_v)^2 / (p_u p_v). A pair scoring below
// the threshold is treated as not in LD.
double ld_score(const JointTable& joint);
inline constexpr double kLdThreshold = 1e-3;

// Estimates allele frequencies and adjacent-pair joint tables from data.
// Singles get add-one smoothing: (count + 1) / (N + 3). Joint cells get
// pseudocount 1/3, (count + 1/3) / (N + 3), so that joint marginals equal
// the smoothed single-site frequencies exactly and no conditional is zero.
PopulationModel build_model(const HaplotypePanel& panel,
                            const std::vector<GenotypeSequence>& genotypes,
                            double rho, double theta);

// Pr(SNV_pos | prefix) from the 1st-order AF/LD chain. For pos = 0 or a
// pair not in LD this is just the site's allele frequency.
Dist3 conditional_markov1(const PopulationModel& model,
                          const GenotypeSequence& prefix, std::size_t pos);

// Pr(SNV_pos | prefix) from the recombination (haplotype copying) model:
// the genotype is an ordered pair of copying chains over the panel rows,
// emissions miscopy with probability theta, genotype = sum of the two
// emitted alleles. Computed as the ratio of prefix marginals.
Dist3 conditional_rr(const PopulationModel& model,
                     const GenotypeSequence& prefix, std::size_t pos);

enum class Selector : std::uint8_t { markov1 = 0, rr = 1 };

const char* selector_name(Selector s);
Selector selector_from_name(const std::string& name);

// Streaming view of a conditional model: distribution at the current site,
// then commit a value and advance. One pass root-to-leaf costs O(n) model
// evaluations instead of O(n^2) for repeated prefix scans.
class CondCursor {
 public:
  virtual ~CondCursor() = default;
  virtual Dist3 dist() const = 0;
  virtual void push(Snv v) = 0;
  virtual std::size_t depth() const = 0;
};

class CondModel {
 public:
  virtual ~CondModel() = default;
  virtual std::size_t site_count() const = 0;
  virtual std::unique_ptr<CondCursor> cursor() const = 0;
};

std::unique_ptr<CondModel> make_cond_model(const PopulationModel& model, Selector sel);

enum class BaselineMethod { B1, B2, B3 };

BaselineMethod baseline_from_name(const std::string& name);

// Left-to-right sequence inference. Revealed positions are copied from the
// side information and conditioned on; hidden positions are filled by
// argmax (B1: markov1, B3: rr) or by sampling with the cumulative rule
// (B2: markov1). Argmax ties break toward the smallest value.
GenotypeSequence infer_baseline(const PopulationModel& model,
                                const SideInformation& side_info,
                                BaselineMethod method, Rng& rng);

// Samples a full sequence from the conditional model (used as the message
// distribution p_m in game simulations).
GenotypeSequence sample_sequence(const CondModel& cond, Rng& rng);

}  // namespace honeyseq
