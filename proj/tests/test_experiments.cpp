#include <doctest.h>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "honeyseq/experiments.hpp"
#include "honeyseq/io.hpp"
#include "test_support.hpp"

using namespace honeyseq;
using namespace honeyseq::experiments;
using namespace honeyseq::testsupport;

namespace {

attacks::PasswordCorpus numeric_corpus(std::size_t count) {
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < count; ++i) lines.push_back(std::to_string(i + 1));
  return attacks::PasswordCorpus::from_lines(lines);
}

ExperimentConfig smoke_config(ExperimentMode mode) {
  ExperimentConfig cfg;
  cfg.mode = mode;
  cfg.population_labels = {"synA"};
  cfg.synth.sites = 30;
  cfg.synth.panel_size = 16;
  cfg.synth.genotype_count = 12;
  cfg.corpus = numeric_corpus(50);
  cfg.fractions = {0.0, 0.1, 0.3};
  cfg.trials = 6;
  cfg.seed = 5;
  cfg.kdf_cost = 1;
  return cfg;
}

}  // namespace

TEST_CASE("synthetic panel: one founder, no mutation, all rows identical") {
  SynthSpec spec;
  spec.sites = 20;
  spec.panel_size = 8;
  spec.genotype_count = 4;
  spec.founders = 1;
  spec.mutation_rate = 0.0;
  Rng rng(2);
  auto result = generate_synthetic_panel(spec, rng);
  for (const auto& row : result.panel.rows) CHECK(row == result.panel.rows[0]);
  for (const auto& g : result.genotypes) {
    for (std::size_t j = 0; j < spec.sites; ++j)
      CHECK(g[j] == Snv(2 * result.panel.rows[0][j]));
  }
}

TEST_CASE("synthetic panel: two founders, no recombination or mutation") {
  SynthSpec spec;
  spec.sites = 25;
  spec.panel_size = 12;
  spec.genotype_count = 4;
  spec.founders = 2;
  spec.switch_prob = 0.0;
  spec.mutation_rate = 0.0;
  Rng rng(3);
  auto result = generate_synthetic_panel(spec, rng);
  std::set<std::vector<std::uint8_t>> distinct(result.panel.rows.begin(),
                                               result.panel.rows.end());
  CHECK(distinct.size() <= 2);  // every haplotype is a pure founder copy
}

TEST_CASE("synthetic panel: default spec produces LD at most adjacent pairs") {
  SynthSpec spec;  // defaults: n=100, K=50
  Rng rng(11);
  auto result = generate_synthetic_panel(spec, rng);
  auto m = build_model(result.panel, result.genotypes, 0.5, 0.01);
  std::size_t in_ld = 0;
  for (std::size_t i = 1; i < m.site_count; ++i)
    if (m.joint_adjacent[i]) ++in_ld;
  CHECK(double(in_ld) / double(m.site_count - 1) > 0.5);
}

TEST_CASE("synthetic panel rejects degenerate specs") {
  SynthSpec bad;
  bad.panel_size = 1;
  Rng rng(1);
  CHECK_THROWS_AS(generate_synthetic_panel(bad, rng), std::invalid_argument);
  bad = SynthSpec{};
  bad.mutation_rate = 1.5;
  CHECK_THROWS_AS(generate_synthetic_panel(bad, rng), std::invalid_argument);
}

TEST_CASE("make_side_info: fraction endpoints and the consecutive shape") {
  Rng rng(7);
  GenotypeSequence target;
  for (int i = 0; i < 100; ++i) target.values.push_back(Snv(i % 3));

  auto empty = make_side_info(target, {SideInfoKind::sparse, 0.0}, rng);
  CHECK(empty.empty());

  auto full = make_side_info(target, {SideInfoKind::sparse, 1.0}, rng);
  CHECK(full.size() == 100);
  for (std::size_t i = 0; i < 100; ++i) CHECK(*full.at(i) == target[i]);

  auto block = make_side_info(target, {SideInfoKind::consecutive, 0.1}, rng);
  CHECK(block.size() == 10);
  auto positions = block.pairs();
  for (std::size_t i = 1; i < positions.size(); ++i)
    CHECK(positions[i].first == positions[i - 1].first + 1);
  for (const auto& [pos, val] : positions) CHECK(val == target[pos]);
}

TEST_CASE("nested side info orders keep prefixes valid") {
  Rng rng(13);
  auto sparse = nested_side_info_order(SideInfoKind::sparse, 50, 20, rng);
  CHECK(sparse.size() == 20);
  std::set<std::size_t> dedup(sparse.begin(), sparse.end());
  CHECK(dedup.size() == 20);

  auto consec = nested_side_info_order(SideInfoKind::consecutive, 50, 20, rng);
  CHECK(consec.size() == 20);
  for (std::size_t i = 1; i < consec.size(); ++i)
    CHECK(consec[i] == consec[i - 1] + 1);  // prefixes stay contiguous
  CHECK(consec.back() < 50);
}

TEST_CASE("CSV emission: exact header, stable round trip") {
  std::vector<ResultRow> rows = {
      {"synA", "sparse", 0.025, "advantage", 0.8125, 0.0321, 200}};
  std::string csv = emit_csv(rows);
  CHECK(csv == "population,kind,fraction,metric,mean,std,trials\n"
               "synA,sparse,0.025,advantage,0.8125,0.0321,200\n");

  rows.push_back({"synB", "consecutive", 0.1, "candidates", 44.25, 3.5, 200});
  csv = emit_csv(rows);
  auto parsed = parse_csv(csv);
  REQUIRE(parsed.size() == 2);
  CHECK(emit_csv(parsed) == csv);  // byte-stable re-emission
  CHECK(parsed[1].population == "synB");
  CHECK(parsed[1].fraction == doctest::Approx(0.1));
  CHECK(parsed[1].trials == 200);

  CHECK_THROWS_AS(parse_csv("bad,header\n1,2\n"), FormatError);
  CHECK_THROWS_AS(emit_csv({}), std::invalid_argument);
}

TEST_CASE("experiment config validation") {
  auto cfg = smoke_config(ExperimentMode::low);
  cfg.fractions = {0.2, 0.1};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = smoke_config(ExperimentMode::low);
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = smoke_config(ExperimentMode::low);
  cfg.fractions = {0.0, 1.2};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = smoke_config(ExperimentMode::low);
  cfg.panel_path = "only-panel";
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("low-entropy run: shape, ranges, and per-fraction monotonicity") {
  auto cfg = smoke_config(ExperimentMode::low);
  auto rows = run_low_entropy(cfg);
  // 1 population x 2 kinds x 3 fractions x 2 metrics
  CHECK(rows.size() == 12);

  for (const auto& kind : {"sparse", "consecutive"}) {
    std::vector<double> cand_means, adv_means;
    for (const auto& r : rows) {
      if (r.kind != kind) continue;
      CHECK(r.trials == cfg.trials);
      if (r.metric == "candidates") {
        CHECK(r.mean >= 1.0);  // true password is always in the corpus
        cand_means.push_back(r.mean);
      } else {
        REQUIRE(r.metric == "advantage");
        CHECK(r.mean > 0.0);
        CHECK(r.mean <= 1.0);
        adv_means.push_back(r.mean);
      }
    }
    REQUIRE(cand_means.size() == 3);
    for (std::size_t i = 1; i < 3; ++i) {
      CHECK(cand_means[i] <= cand_means[i - 1]);  // nested side info
      CHECK(adv_means[i] >= adv_means[i - 1]);
    }
  }
}

TEST_CASE("low-entropy run is deterministic for a fixed seed") {
  auto cfg = smoke_config(ExperimentMode::low);
  auto a = emit_csv(run_low_entropy(cfg));
  auto b = emit_csv(run_low_entropy(cfg));
  CHECK(a == b);
  cfg.seed += 1;
  CHECK(emit_csv(run_low_entropy(cfg)) != a);
}

TEST_CASE("results do not depend on the thread budget") {
  auto cfg = smoke_config(ExperimentMode::low);
  cfg.trials = 3;
  setenv("HONEYSEQ_THREADS", "1", 1);
  auto serial = emit_csv(run_low_entropy(cfg));
  setenv("HONEYSEQ_THREADS", "3", 1);
  auto parallel = emit_csv(run_low_entropy(cfg));
  unsetenv("HONEYSEQ_THREADS");
  CHECK(serial == parallel);
}

TEST_CASE("high-entropy run: metrics, ranges, and full-reveal accuracy") {
  auto cfg = smoke_config(ExperimentMode::high);
  cfg.fractions = {0.0, 0.2, 1.0};
  cfg.metric_mode = attacks::AccuracyMode::all;
  std::ostringstream log;
  cfg.log = &log;
  auto rows = run_high_entropy(cfg);
  // 1 population x 2 kinds x 3 fractions x 6 metrics
  CHECK(rows.size() == 36);
  CHECK(log.str().find("password=") != std::string::npos);

  for (const auto& r : rows) {
    if (r.metric == "delta_best") continue;
    CHECK(r.mean >= 0.0);
    CHECK(r.mean <= 1.0);
    if (r.fraction == 1.0) CHECK(r.mean == 1.0);  // everything revealed
  }
}

TEST_CASE("high-entropy run is deterministic and resists corpus membership") {
  auto cfg = smoke_config(ExperimentMode::high);
  auto a = emit_csv(run_high_entropy(cfg));
  auto b = emit_csv(run_high_entropy(cfg));
  CHECK(a == b);

  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    auto pw = random_high_entropy_password(rng);
    CHECK(pw.size() == 12);
    for (char c : pw) CHECK((std::isalnum(c) || c == '-' || c == '_'));
  }
}

TEST_CASE("plots are emitted per metric") {
  auto cfg = smoke_config(ExperimentMode::low);
  cfg.trials = 2;
  auto rows = run_low_entropy(cfg);
  auto files = write_plots(rows, "test_plots_");
  CHECK(files.size() == 2);  // candidates + advantage
  for (const auto& f : files) {
    std::ifstream in(f);
    REQUIRE(in.good());
    std::string head;
    std::getline(in, head);
    CHECK(head.rfind("<svg", 0) == 0);
    in.close();
    std::remove(f.c_str());
  }
}
