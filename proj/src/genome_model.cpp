#include "honeyseq/genome_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace honeyseq {

void HaplotypePanel::validate() const {
  if (rows.size() < 2) throw std::invalid_argument("haplotype panel needs at least 2 rows");
  std::size_t n = rows[0].size();
  if (n == 0) throw std::invalid_argument("haplotype panel has zero sites");
  for (const auto& r : rows) {
    if (r.size() != n) throw std::invalid_argument("haplotype panel is ragged");
    for (auto a : r)
      if (a > 1) throw std::invalid_argument("haplotype allele outside {0,1}");
  }
}

SideInformation::SideInformation(std::vector<std::pair<std::size_t, Snv>> pairs,
                                 std::size_t n)
    : pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end());
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    if (pairs_[i].first >= n)
      throw std::invalid_argument("side info position out of sequence bounds");
    if (pairs_[i].second >= kSnvAlphabet)
      throw std::invalid_argument("side info value outside {0,1,2}");
    if (i > 0 && pairs_[i].first == pairs_[i - 1].first)
      throw std::invalid_argument("duplicate side info position");
  }
}

std::optional<Snv> SideInformation::at(std::size_t pos) const {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(),
                             std::make_pair(pos, Snv(0)));
  if (it != pairs_.end() && it->first == pos) return it->second;
  return std::nullopt;
}

std::size_t SideInformation::match_count(const GenotypeSequence& seq) const {
  std::size_t m = 0;
  for (const auto& [pos, val] : pairs_)
    if (pos < seq.size() && seq[pos] == val) ++m;
  return m;
}

void PopulationModel::validate() const {
  if (site_count == 0) throw std::invalid_argument("model has zero sites");
  if (allele_freq.size() != site_count || joint_adjacent.size() != site_count)
    throw std::invalid_argument("model table sizes inconsistent with site count");
  if (!(rho >= 0.0)) throw std::invalid_argument("rho must be >= 0");
  if (!(theta >= 0.0 && theta < 0.5)) throw std::invalid_argument("theta must be in [0, 0.5)");
  if (panel.site_count() != site_count)
    throw std::invalid_argument("panel column count != model site count");
  panel.validate();
  for (const auto& af : allele_freq) af.validate();
  if (joint_adjacent[0].has_value())
    throw std::invalid_argument("site 0 cannot carry a joint table");
  for (std::size_t i = 1; i < site_count; ++i) {
    if (!joint_adjacent[i]) continue;
    const JointTable& t = *joint_adjacent[i];
    double total = 0.0;
    for (int u = 0; u < 3; ++u)
      for (int v = 0; v < 3; ++v) {
        if (!(t[u][v] >= 0.0)) throw std::invalid_argument("joint table entry negative");
        total += t[u][v];
      }
    if (std::abs(total - 1.0) > 1e-9)
      throw std::invalid_argument("joint table does not sum to 1");
    for (int u = 0; u < 3; ++u) {
      double row = t[u][0] + t[u][1] + t[u][2];
      if (std::abs(row - allele_freq[i - 1][u]) > 1e-6)
        throw std::invalid_argument("joint row marginal disagrees with allele frequency");
    }
    for (int v = 0; v < 3; ++v) {
      double col = t[0][v] + t[1][v] + t[2][v];
      if (std::abs(col - allele_freq[i][v]) > 1e-6)
        throw std::invalid_argument("joint column marginal disagrees with allele frequency");
    }
  }
}

double ld_score(const JointTable& joint) {
  double pu[3] = {0, 0, 0}, pv[3] = {0, 0, 0};
  for (int u = 0; u < 3; ++u)
    for (int v = 0; v < 3; ++v) {
      pu[u] += joint[u][v];
      pv[v] += joint[u][v];
    }
  double score = 0.0;
  for (int u = 0; u < 3; ++u)
    for (int v = 0; v < 3; ++v) {
      double expect = pu[u] * pv[v];
      if (expect <= 0.0) continue;
      double d = joint[u][v] - expect;
      score += d * d / expect;
    }
  return score;
}

PopulationModel build_model(const HaplotypePanel& panel,
                            const std::vector<GenotypeSequence>& genotypes,
                            double rho, double theta) {
  panel.validate();
  if (genotypes.empty()) throw std::invalid_argument("no genotype sequences");
  const std::size_t n = panel.site_count();
  for (const auto& g : genotypes) {
    if (g.size() != n) throw std::invalid_argument("genotype length != panel site count");
    g.validate();
  }
  const double N = static_cast<double>(genotypes.size());

  PopulationModel m;
  m.site_count = n;
  m.panel = panel;
  m.rho = rho;
  m.theta = theta;
  m.allele_freq.resize(n);
  m.joint_adjacent.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    double cnt[3] = {0, 0, 0};
    for (const auto& g : genotypes) cnt[g[i]] += 1.0;
    for (int v = 0; v < 3; ++v) m.allele_freq[i][v] = (cnt[v] + 1.0) / (N + 3.0);
  }
  // Joint cells take pseudocount 1/3 so the table marginals coincide with
  // the add-one-smoothed single-site frequencies.
  for (std::size_t i = 1; i < n; ++i) {
    double cnt[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    for (const auto& g : genotypes) cnt[g[i - 1]][g[i]] += 1.0;
    JointTable t;
    for (int u = 0; u < 3; ++u)
      for (int v = 0; v < 3; ++v) t[u][v] = (cnt[u][v] + 1.0 / 3.0) / (N + 3.0);
    if (ld_score(t) >= kLdThreshold) m.joint_adjacent[i] = t;
  }
  m.validate();
  return m;
}

Dist3 conditional_markov1(const PopulationModel& model,
                          const GenotypeSequence& prefix, std::size_t pos) {
  if (pos >= model.site_count) throw std::out_of_range("site index out of range");
  if (prefix.size() < pos) throw std::invalid_argument("prefix too short for site index");
  if (pos == 0 || !model.joint_adjacent[pos]) return model.allele_freq[pos];
  Snv prev = prefix[pos - 1];
  if (prev >= kSnvAlphabet) throw std::invalid_argument("prefix value outside {0,1,2}");
  const JointTable& t = *model.joint_adjacent[pos];
  double row = t[prev][0] + t[prev][1] + t[prev][2];
  Dist3 d;
  for (int v = 0; v < 3; ++v) d[v] = t[prev][v] / row;
  return d;
}

namespace {

class Markov1Cursor final : public CondCursor {
 public:
  explicit Markov1Cursor(const PopulationModel& m) : model_(m) {}

  Dist3 dist() const override {
    if (pos_ == 0 || !model_.joint_adjacent[pos_]) return model_.allele_freq[pos_];
    const JointTable& t = *model_.joint_adjacent[pos_];
    double row = t[prev_][0] + t[prev_][1] + t[prev_][2];
    Dist3 d;
    for (int v = 0; v < 3; ++v) d[v] = t[prev_][v] / row;
    return d;
  }

  void push(Snv v) override {
    if (pos_ >= model_.site_count) throw std::out_of_range("cursor past last site");
    prev_ = v;
    ++pos_;
  }

  std::size_t depth() const override { return pos_; }

 private:
  const PopulationModel& model_;
  std::size_t pos_ = 0;
  Snv prev_ = 0;
};

// Forward pass over the ordered pair of copying chains. State space is
// K x K panel-row pairs; the transition kernel factors per chain as
// stay e^{-rho/K} plus a uniform jump, so one step is O(K^2).
class CopyingCursor final : public CondCursor {
 public:
  explicit CopyingCursor(const PopulationModel& m)
      : model_(m), k_(m.panel.size()), alpha_(k_ * k_, 1.0 / double(k_ * k_)) {
    stay_ = std::exp(-m.rho / double(k_));
    jump_ = (1.0 - stay_) / double(k_);
  }

  Dist3 dist() const override {
    const double theta = model_.theta;
    Dist3 d;
    for (std::size_t r1 = 0; r1 < k_; ++r1) {
      double e1_one = model_.panel.rows[r1][pos_] ? 1.0 - theta : theta;
      double e1_zero = 1.0 - e1_one;
      const double* arow = &alpha_[r1 * k_];
      for (std::size_t r2 = 0; r2 < k_; ++r2) {
        double e2_one = model_.panel.rows[r2][pos_] ? 1.0 - theta : theta;
        double e2_zero = 1.0 - e2_one;
        double a = arow[r2];
        d[0] += a * e1_zero * e2_zero;
        d[1] += a * (e1_zero * e2_one + e1_one * e2_zero);
        d[2] += a * e1_one * e2_one;
      }
    }
    double s = d.sum();
    for (int v = 0; v < 3; ++v) d[v] /= s;
    return d;
  }

  void push(Snv v) override {
    if (pos_ >= model_.site_count) throw std::out_of_range("cursor past last site");
    const double theta = model_.theta;
    // Condition on the observed genotype value.
    double total = 0.0;
    for (std::size_t r1 = 0; r1 < k_; ++r1) {
      double e1_one = model_.panel.rows[r1][pos_] ? 1.0 - theta : theta;
      double e1_zero = 1.0 - e1_one;
      double* arow = &alpha_[r1 * k_];
      for (std::size_t r2 = 0; r2 < k_; ++r2) {
        double e2_one = model_.panel.rows[r2][pos_] ? 1.0 - theta : theta;
        double e2_zero = 1.0 - e2_one;
        double emit;
        switch (v) {
          case 0: emit = e1_zero * e2_zero; break;
          case 1: emit = e1_zero * e2_one + e1_one * e2_zero; break;
          default: emit = e1_one * e2_one; break;
        }
        arow[r2] *= emit;
        total += arow[r2];
      }
    }
    if (total <= 0.0) throw std::runtime_error("copying model: zero-probability prefix");
    double inv = 1.0 / total;
    for (double& a : alpha_) a *= inv;
    ++pos_;
    if (pos_ < model_.site_count) transition();
  }

  std::size_t depth() const override { return pos_; }

 private:
  void transition() {
    // beta(b1,b2) = s^2 a(b1,b2) + s j row(b1) + s j col(b2) + j^2, with
    // alpha normalized to total 1.
    std::vector<double> row(k_, 0.0), col(k_, 0.0);
    for (std::size_t r1 = 0; r1 < k_; ++r1) {
      const double* arow = &alpha_[r1 * k_];
      for (std::size_t r2 = 0; r2 < k_; ++r2) {
        row[r1] += arow[r2];
        col[r2] += arow[r2];
      }
    }
    const double ss = stay_ * stay_;
    const double sj = stay_ * jump_;
    const double jj = jump_ * jump_;
    for (std::size_t r1 = 0; r1 < k_; ++r1) {
      double* arow = &alpha_[r1 * k_];
      double base = sj * row[r1] + jj;
      for (std::size_t r2 = 0; r2 < k_; ++r2)
        arow[r2] = ss * arow[r2] + base + sj * col[r2];
    }
  }

  const PopulationModel& model_;
  std::size_t k_;
  std::vector<double> alpha_;  // posterior over row pairs, flattened K x K
  double stay_ = 0.0, jump_ = 0.0;
  std::size_t pos_ = 0;
};

class Markov1Model final : public CondModel {
 public:
  explicit Markov1Model(const PopulationModel& m) : model_(m) {}
  std::size_t site_count() const override { return model_.site_count; }
  std::unique_ptr<CondCursor> cursor() const override {
    return std::make_unique<Markov1Cursor>(model_);
  }

 private:
  const PopulationModel& model_;
};

class CopyingModel final : public CondModel {
 public:
  explicit CopyingModel(const PopulationModel& m) : model_(m) {}
  std::size_t site_count() const override { return model_.site_count; }
  std::unique_ptr<CondCursor> cursor() const override {
    return std::make_unique<CopyingCursor>(model_);
  }

 private:
  const PopulationModel& model_;
};

}  // namespace

Dist3 conditional_rr(const PopulationModel& model,
                     const GenotypeSequence& prefix, std::size_t pos) {
  if (pos >= model.site_count) throw std::out_of_range("site index out of range");
  if (prefix.size() < pos) throw std::invalid_argument("prefix too short for site index");
  CopyingCursor cur(model);
  for (std::size_t i = 0; i < pos; ++i) {
    if (prefix[i] >= kSnvAlphabet) throw std::invalid_argument("prefix value outside {0,1,2}");
    cur.push(prefix[i]);
  }
  return cur.dist();
}

const char* selector_name(Selector s) {
  return s == Selector::markov1 ? "markov1" : "rr";
}

Selector selector_from_name(const std::string& name) {
  if (name == "markov1") return Selector::markov1;
  if (name == "rr") return Selector::rr;
  throw ConfigError("unknown model selector: " + name);
}

std::unique_ptr<CondModel> make_cond_model(const PopulationModel& model, Selector sel) {
  if (sel == Selector::markov1) return std::make_unique<Markov1Model>(model);
  return std::make_unique<CopyingModel>(model);
}

BaselineMethod baseline_from_name(const std::string& name) {
  if (name == "B1" || name == "b1") return BaselineMethod::B1;
  if (name == "B2" || name == "b2") return BaselineMethod::B2;
  if (name == "B3" || name == "b3") return BaselineMethod::B3;
  throw ConfigError("unknown baseline method: " + name);
}

namespace {

Snv argmax_snv(const Dist3& d) {
  Snv best = 0;
  for (Snv v = 1; v < kSnvAlphabet; ++v)
    if (d[v] > d[best]) best = v;  // ties keep the smaller value
  return best;
}

Snv sample_snv(const Dist3& d, Rng& rng) {
  double s = rng.uniform();
  if (s < d[0]) return 0;
  if (s < d[0] + d[1]) return 1;
  return 2;
}

}  // namespace

GenotypeSequence infer_baseline(const PopulationModel& model,
                                const SideInformation& side_info,
                                BaselineMethod method, Rng& rng) {
  for (const auto& [pos, val] : side_info.pairs())
    if (pos >= model.site_count)
      throw std::invalid_argument("side info position out of model range");

  Selector sel = method == BaselineMethod::B3 ? Selector::rr : Selector::markov1;
  auto cond = make_cond_model(model, sel);
  auto cur = cond->cursor();

  GenotypeSequence out;
  out.values.reserve(model.site_count);
  for (std::size_t pos = 0; pos < model.site_count; ++pos) {
    Snv v;
    if (auto revealed = side_info.at(pos)) {
      v = *revealed;
    } else {
      Dist3 d = cur->dist();
      v = method == BaselineMethod::B2 ? sample_snv(d, rng) : argmax_snv(d);
    }
    out.values.push_back(v);
    cur->push(v);
  }
  return out;
}

GenotypeSequence sample_sequence(const CondModel& cond, Rng& rng) {
  auto cur = cond.cursor();
  GenotypeSequence out;
  out.values.reserve(cond.site_count());
  for (std::size_t pos = 0; pos < cond.site_count(); ++pos) {
    Snv v = sample_snv(cur->dist(), rng);
    out.values.push_back(v);
    cur->push(v);
  }
  return out;
}

}  // namespace honeyseq
