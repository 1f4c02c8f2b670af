#include <doctest.h>

#include <cmath>

#include "honeyseq/attacks.hpp"
#include "test_support.hpp"

using namespace honeyseq;
using namespace honeyseq::attacks;
using namespace honeyseq::testsupport;

namespace {

PasswordCorpus small_corpus(std::size_t count, const std::string& include_true = "") {
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < count; ++i) lines.push_back("pw" + std::to_string(i));
  if (!include_true.empty()) lines[count / 2] = include_true;
  return PasswordCorpus::from_lines(lines);
}

HoneyPool hand_pool(const std::vector<GenotypeSequence>& seqs,
                    const std::vector<long>& intervals) {
  HoneyPool pool;
  for (std::size_t i = 0; i < seqs.size(); ++i)
    pool.entries.push_back({seqs[i], BigInt(intervals[i]), 0});
  return pool;
}

}  // namespace

TEST_CASE("password corpus deduplicates preserving first occurrence") {
  auto corpus = PasswordCorpus::from_lines({"a", "", "b", "a", "c", "b", ""});
  CHECK(corpus.passwords == std::vector<std::string>{"a", "b", "c"});
  CHECK_THROWS_AS(PasswordCorpus::from_lines({"", ""}), std::invalid_argument);
}

TEST_CASE("honey pool: one entry per password, truth preserved") {
  auto m = toy_model();
  dte::DteParams params{4, 4};
  GenotypeSequence target = seq({0, 1, 1, 2});
  auto corpus = small_corpus(24, "hunter2");
  Rng rng(3);
  auto ct = crypto::henc(crypto::Password{"hunter2"}, target, m, params,
                         Selector::markov1, 1, rng);

  SideInformation si({{0, target[0]}, {3, target[3]}}, 4);
  HoneyPool pool = build_honey_pool(ct, corpus, m, si);
  CHECK(pool.size() == corpus.size());

  std::size_t true_idx = corpus.size() / 2;
  CHECK(corpus.passwords[true_idx] == "hunter2");
  CHECK(pool.entries[true_idx].sequence == target);
  CHECK(pool.entries[true_idx].si_weight == si.size());
  for (const auto& e : pool.entries) {
    CHECK(e.interval_size >= 1);
    CHECK(e.si_weight <= si.size());
  }

  HoneyPool no_si = build_honey_pool(ct, corpus, m, SideInformation{});
  for (const auto& e : no_si.entries) CHECK(e.si_weight == 0);
}

TEST_CASE("mr_si_filter: empty side info keeps the whole pool") {
  auto pool = hand_pool({seq({0, 1}), seq({1, 1}), seq({0, 1})}, {4, 2, 4});
  auto cand = mr_si_filter(pool, SideInformation{});
  CHECK(cand.entry_indices.size() == 3);
  CHECK(cand.distinct_sequences.size() == 2);  // duplicates merged
}

TEST_CASE("mr_si_filter: full side info isolates the target") {
  auto m = toy_model();
  dte::DteParams params{4, 4};
  GenotypeSequence target = seq({2, 1, 0, 0});
  auto corpus = small_corpus(30, "truepw");
  Rng rng(5);
  auto ct = crypto::henc(crypto::Password{"truepw"}, target, m, params,
                         Selector::rr, 1, rng);
  HoneyPool pool = build_honey_pool(ct, corpus, m, SideInformation{});

  std::vector<std::pair<std::size_t, Snv>> pairs;
  for (std::size_t i = 0; i < 4; ++i) pairs.emplace_back(i, target[i]);
  auto cand = mr_si_filter(pool, SideInformation(std::move(pairs), 4));
  bool has_target = false;
  for (const auto& s : cand.distinct_sequences) has_target |= (s == target);
  CHECK(has_target);
  // Any other survivor must equal the full target sequence, so there is
  // exactly one distinct candidate.
  CHECK(cand.distinct_sequences.size() == 1);
}

TEST_CASE("mr_si_filter: nested side info gives nested candidate sets") {
  auto m = toy_model();
  dte::DteParams params{4, 4};
  GenotypeSequence target = seq({0, 1, 2, 0});
  auto corpus = small_corpus(40, "truepw");
  Rng rng(9);
  auto ct = crypto::henc(crypto::Password{"truepw"}, target, m, params,
                         Selector::markov1, 1, rng);
  HoneyPool pool = build_honey_pool(ct, corpus, m, SideInformation{});

  std::vector<std::pair<std::size_t, Snv>> pairs;
  std::size_t prev_count = pool.size() + 1;
  for (std::size_t q = 0; q <= 4; ++q) {
    SideInformation si(std::vector<std::pair<std::size_t, Snv>>(pairs), 4);
    auto cand = mr_si_filter(pool, si);
    CHECK(cand.entry_indices.size() <= prev_count);
    prev_count = cand.entry_indices.size();
    // soundness: the true entry survives every filter
    CHECK(advantage(cand, target) > 0.0);
    if (q < 4) pairs.emplace_back(q, target[q]);
  }
}

TEST_CASE("advantage accounting over distinct sequences") {
  GenotypeSequence target = seq({1, 1});
  CandidateSet only_target;
  only_target.distinct_sequences = {target};
  CHECK(advantage(only_target, target) == 1.0);

  CandidateSet absent;
  absent.distinct_sequences = {seq({0, 0}), seq({2, 2})};
  CHECK(advantage(absent, target) == 0.0);

  CandidateSet four;
  four.distinct_sequences = {seq({0, 0}), seq({2, 2}), target, seq({0, 1})};
  CHECK(advantage(four, target) == 0.25);

  CandidateSet empty;
  CHECK(advantage(empty, target) == 0.0);
}

TEST_CASE("advantage floor: 1/(2n^2) over key-space bits") {
  CHECK(key_space_bits(1ULL << 10) == 10);
  CHECK(advantage_lower_bound(10) == doctest::Approx(1.0 / 200.0));
  CHECK(key_space_bits(2) == 1);
  CHECK(advantage_lower_bound(1) == doctest::Approx(0.5));
  CHECK(key_space_bits(1000) == 10);   // ceil(log2 1000)
  CHECK(key_space_bits(16) == 4);
  CHECK_THROWS_AS(advantage_lower_bound(0), std::invalid_argument);
}

TEST_CASE("recovery upper bound reproduces the published loss term") {
  SecurityBoundInputs inp;
  inp.n = 20000;
  inp.h = 4;
  inp.w = 0.01;
  auto result = recovery_upper_bound(inp);
  CHECK(std::abs(result.delta_term_log2 + 16600.0) <= 5.0);
  CHECK(result.bound == doctest::Approx(inp.w).epsilon(1e-9));  // Delta underflows
}

TEST_CASE("recovery upper bound: limits and exact-arithmetic oracle") {
  // Small n, huge h: Delta vanishes, bound -> w(1+delta).
  SecurityBoundInputs tiny;
  tiny.n = 2;
  tiny.h = 400;
  tiny.w = 0.05;
  tiny.delta = 0.25;
  auto r = recovery_upper_bound(tiny);
  CHECK(r.bound == doctest::Approx(0.05 * 1.25).epsilon(1e-9));

  // n=10, h=4, w=1/100: Delta = (3^10 + 100) * 3^10 / 2^40 exactly.
  SecurityBoundInputs mid;
  mid.n = 10;
  mid.h = 4;
  mid.w = 0.01;
  auto got = recovery_upper_bound(mid);
  BigRat delta_exact = BigRat(BigInt(59049 + 100) * 59049, BigInt(1) << 40);
  double delta_log2_exact = std::log2(delta_exact.convert_to<double>());
  CHECK(got.delta_term_log2 == doctest::Approx(delta_log2_exact).epsilon(1e-6));
  double bound_exact = 0.01 + delta_exact.convert_to<double>();
  CHECK(got.bound == doctest::Approx(bound_exact).epsilon(1e-9));

  // Monotone: larger h shrinks the loss term.
  SecurityBoundInputs higher = mid;
  higher.h = 6;
  CHECK(recovery_upper_bound(higher).delta_term_log2 < got.delta_term_log2);

  SecurityBoundInputs bad = mid;
  bad.h = 1.5;
  CHECK_THROWS_AS(recovery_upper_bound(bad), std::invalid_argument);
}

TEST_CASE("g1_infer: degenerate pools") {
  GenotypeSequence same = seq({0, 1, 2, 1});
  auto pool = hand_pool({same, same, same}, {1, 5, 9});
  SideInformation si({{1, 1}}, 4);
  CHECK(g1_infer(pool, si, 4) == same);

  // Full side info overrides everything.
  GenotypeSequence target = seq({2, 0, 1, 2});
  std::vector<std::pair<std::size_t, Snv>> pairs;
  for (std::size_t i = 0; i < 4; ++i) pairs.emplace_back(i, target[i]);
  CHECK(g1_infer(pool, SideInformation(std::move(pairs), 4), 4) == target);
}

TEST_CASE("g1_infer: hand-worked five-entry pool with weights 2,2,1,0,0") {
  SideInformation si({{0, 1}, {1, 2}}, 6);
  auto pool = hand_pool(
      {
          seq({1, 2, 0, 1, 2, 0}),  // weight 2
          seq({1, 2, 2, 1, 0, 0}),  // weight 2
          seq({1, 0, 2, 2, 2, 1}),  // weight 1
          seq({0, 0, 0, 0, 0, 0}),  // weight 0
          seq({2, 1, 1, 1, 1, 1}),  // weight 0
      },
      {1, 1, 1, 1, 1});
  // Mode over the two weight-2 entries; ties at positions 2 and 4 fall to
  // the smaller value.
  CHECK(g1_infer(pool, si, 6) == seq({1, 2, 0, 1, 0, 0}));
}

TEST_CASE("g2_infer: equal intervals reduce to g1") {
  Rng rng(71);
  auto m = toy_model();
  auto cond = make_cond_model(m, Selector::markov1);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<GenotypeSequence> seqs;
    for (int i = 0; i < 7; ++i) seqs.push_back(sample_sequence(*cond, rng));
    auto pool = hand_pool(seqs, std::vector<long>(7, 13));
    std::vector<std::pair<std::size_t, Snv>> pairs;
    if (rng.flip(0.5)) pairs.emplace_back(rng.below(4), Snv(rng.below(3)));
    SideInformation si(std::move(pairs), 4);
    CHECK(g2_infer(pool, si, 4) == g1_infer(pool, si, 4));
  }
}

TEST_CASE("g2_infer: dominant interval wins every contested position") {
  auto pool = hand_pool({seq({0, 1, 2, 0}), seq({1, 2, 0, 2}), seq({1, 0, 0, 2})},
                        {100, 3, 2});
  SideInformation si({{3, 1}}, 4);
  CHECK(g2_infer(pool, si, 4) == seq({0, 1, 2, 1}));
}

TEST_CASE("g2_infer: hand-worked weighted modes") {
  // Intervals 6, 3, 1: the heavy entry cannot be outvoted (3+1 < 6).
  auto heavy = hand_pool({seq({0, 1, 2, 0}), seq({1, 2, 0, 2}), seq({1, 0, 0, 2})},
                         {6, 3, 1});
  CHECK(g2_infer(heavy, SideInformation{}, 4) == seq({0, 1, 2, 0}));

  // Intervals 3, 2, 2: coalitions beat the leader where they agree.
  auto mixed = hand_pool({seq({0, 1, 2}), seq({1, 0, 2}), seq({1, 2, 0})}, {3, 2, 2});
  CHECK(g2_infer(mixed, SideInformation{}, 3) == seq({1, 1, 2}));
}

TEST_CASE("inference outputs always honor side information") {
  Rng rng(83);
  auto m = toy_model();
  auto cond = make_cond_model(m, Selector::markov1);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<GenotypeSequence> seqs;
    std::vector<long> intervals;
    for (int i = 0; i < 9; ++i) {
      seqs.push_back(sample_sequence(*cond, rng));
      intervals.push_back(long(1 + rng.below(50)));
    }
    auto pool = hand_pool(seqs, intervals);
    std::vector<std::pair<std::size_t, Snv>> pairs;
    for (std::size_t pos = 0; pos < 4; ++pos)
      if (rng.flip(0.4)) pairs.emplace_back(pos, Snv(rng.below(3)));
    SideInformation si(std::move(pairs), 4);
    auto p1 = g1_infer(pool, si, 4);
    auto p2 = g2_infer(pool, si, 4);
    for (const auto& [pos, val] : si.pairs()) {
      CHECK(p1[pos] == val);
      CHECK(p2[pos] == val);
    }
  }
}

TEST_CASE("accuracy counting") {
  GenotypeSequence target = seq({0, 1, 2, 0, 1, 2, 0, 1, 2, 0});
  CHECK(accuracy(target, target, SideInformation{}, AccuracyMode::all) == 1.0);

  GenotypeSequence wrong;
  for (auto v : target.values) wrong.values.push_back(Snv((v + 1) % 3));
  CHECK(accuracy(wrong, target, SideInformation{}, AccuracyMode::all) == 0.0);

  // Ten sites, seven matches; two of the matches are revealed positions.
  GenotypeSequence pred = target;
  pred[2] = Snv((target[2] + 1) % 3);
  pred[5] = Snv((target[5] + 1) % 3);
  pred[8] = Snv((target[8] + 1) % 3);
  SideInformation si({{0, target[0]}, {1, target[1]}}, 10);
  CHECK(accuracy(pred, target, si, AccuracyMode::all) == doctest::Approx(0.7));
  CHECK(accuracy(pred, target, si, AccuracyMode::hidden_only) == doctest::Approx(5.0 / 8.0));

  CHECK_THROWS_AS(accuracy(seq({0}), target, si, AccuracyMode::all),
                  std::invalid_argument);
}

TEST_CASE("MR-SI game simulation is reproducible and sane") {
  auto m = toy_model();
  auto corpus = small_corpus(8);
  dte::DteParams params{4, 4};
  Rng r1(17), r2(17);
  auto a = simulate_mr_si_game(m, params, Selector::markov1, corpus, 1, 400, r1);
  auto b = simulate_mr_si_game(m, params, Selector::markov1, corpus, 1, 400, r2);
  CHECK(a.n_bits == 3);
  CHECK(a.empirical_advantage == b.empirical_advantage);
  CHECK(a.empirical_advantage >= 0.0);
  CHECK(a.empirical_advantage <= 1.0);
  // The analytic floor should already show at this size.
  CHECK(a.empirical_advantage >= advantage_lower_bound(a.n_bits) - 3.0 * a.std_error);
}
