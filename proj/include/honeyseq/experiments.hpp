#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "honeyseq/attacks.hpp"

namespace honeyseq::experiments {

enum class SideInfoKind { sparse, consecutive };

const char* kind_name(SideInfoKind k);
SideInfoKind kind_from_name(const std::string& name);

struct SideInfoSpec {
  SideInfoKind kind = SideInfoKind::sparse;
  double fraction = 0.0;  // revealed share of n, in [0, 1]

  void validate() const {
    if (!(fraction >= 0.0 && fraction <= 1.0))
      throw std::invalid_argument("side info fraction must be in [0, 1]");
  }
};

// floor(fraction * n) truthful pairs from the target: sparse draws distinct
// uniform positions, consecutive one uniformly placed contiguous block.
SideInformation make_side_info(const GenotypeSequence& target,
                               const SideInfoSpec& spec, Rng& rng);

// Position order whose prefixes give nested side-info sets for one trial:
// sparse is a uniform permutation, consecutive a uniformly placed maximal
// block read left to right (every prefix stays contiguous). Nesting makes
// candidate counts non-increasing in the fraction within a trial.
std::vector<std::size_t> nested_side_info_order(SideInfoKind kind, std::size_t n,
                                                std::size_t max_count, Rng& rng);

SideInformation side_info_from_order(const GenotypeSequence& target,
                                     const std::vector<std::size_t>& order,
                                     std::size_t count);

// Synthetic stand-in for a reference panel: founder haplotypes copied
// blockwise with per-site switch and mutation noise, so neighbouring sites
// stay correlated (LD) the way the copying model expects.
struct SynthSpec {
  std::size_t sites = 100;
  std::size_t panel_size = 50;
  std::size_t genotype_count = 50;
  std::size_t founders = 4;
  double switch_prob = 0.08;
  double mutation_rate = 0.01;
  double maf_low = 0.15;   // per-site minor allele frequency range
  double maf_high = 0.5;

  void validate() const;
};

struct SynthResult {
  HaplotypePanel panel;
  std::vector<GenotypeSequence> genotypes;  // sums of random panel-row pairs
};

SynthResult generate_synthetic_panel(const SynthSpec& spec, Rng& rng);

enum class ExperimentMode { low, high };

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::low;

  // Data source: file-backed single population, or synthetic populations
  // (one per label, each from its own seed-derived stream).
  std::string panel_path;      // empty -> synthetic
  std::string genotypes_path;
  SynthSpec synth;
  std::vector<std::string> population_labels = {"synA", "synB", "synC"};

  attacks::PasswordCorpus corpus;

  unsigned h = 4;
  Selector selector = Selector::markov1;
  double rho = 0.5;
  double theta = 0.01;
  std::uint32_t kdf_cost = 1;

  std::vector<double> fractions = {0.0, 0.01, 0.025, 0.05, 0.1, 0.2};
  std::vector<SideInfoKind> kinds = {SideInfoKind::sparse, SideInfoKind::consecutive};
  std::size_t trials = 200;
  std::uint64_t seed = 1;
  attacks::AccuracyMode metric_mode = attacks::AccuracyMode::hidden_only;

  std::ostream* log = nullptr;  // optional run log

  void validate() const;
};

struct ResultRow {
  std::string population;
  std::string kind;     // sparse | consecutive
  double fraction = 0.0;
  std::string metric;   // candidates | advantage | accuracy_* | delta_best
  double mean = 0.0;
  double std_dev = 0.0;
  std::size_t trials = 0;
};

// Per trial: draw a target and a corpus password, encrypt, decrypt under the
// whole corpus, then filter against nested side-info sets per fraction,
// recording distinct-candidate counts and the guessing advantage.
std::vector<ResultRow> run_low_entropy(const ExperimentConfig& cfg);

// Per trial: encrypt under a fresh ~72-bit password outside the corpus and
// score the G1/G2 honey inferences against the B1/B2/B3 baselines per
// fraction; also emits the best-G minus best-baseline delta series.
std::vector<ResultRow> run_high_entropy(const ExperimentConfig& cfg);

// CSV with the fixed header population,kind,fraction,metric,mean,std,trials.
std::string emit_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_csv(const std::string& text);
void write_csv(const std::vector<ResultRow>& rows, const std::string& path);

// One SVG line chart per metric (mean vs fraction, a polyline per
// population x kind series), written as <prefix><metric>.svg.
std::vector<std::string> write_plots(const std::vector<ResultRow>& rows,
                                     const std::string& prefix);

// Fresh password of 12 symbols from a 64-symbol alphabet (~72 bits).
std::string random_high_entropy_password(Rng& rng);

}  // namespace honeyseq::experiments
