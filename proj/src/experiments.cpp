#include "honeyseq/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include "honeyseq/io.hpp"

namespace honeyseq::experiments {

const char* kind_name(SideInfoKind k) {
  return k == SideInfoKind::sparse ? "sparse" : "consecutive";
}

SideInfoKind kind_from_name(const std::string& name) {
  if (name == "sparse") return SideInfoKind::sparse;
  if (name == "consecutive") return SideInfoKind::consecutive;
  throw ConfigError("unknown side info kind: " + name);
}

SideInformation make_side_info(const GenotypeSequence& target,
                               const SideInfoSpec& spec, Rng& rng) {
  spec.validate();
  const std::size_t n = target.size();
  const auto count = std::size_t(spec.fraction * double(n));
  auto order = nested_side_info_order(spec.kind, n, count, rng);
  return side_info_from_order(target, order, count);
}

std::vector<std::size_t> nested_side_info_order(SideInfoKind kind, std::size_t n,
                                                std::size_t max_count, Rng& rng) {
  if (max_count > n) throw std::invalid_argument("side info larger than sequence");
  std::vector<std::size_t> order;
  if (kind == SideInfoKind::sparse) {
    order.resize(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    order.resize(std::max(max_count, std::size_t(0)));
  } else {
    if (max_count > 0) {
      std::size_t start = std::size_t(rng.below(n - max_count + 1));
      order.resize(max_count);
      for (std::size_t i = 0; i < max_count; ++i) order[i] = start + i;
    }
  }
  return order;
}

SideInformation side_info_from_order(const GenotypeSequence& target,
                                     const std::vector<std::size_t>& order,
                                     std::size_t count) {
  if (count > order.size()) throw std::invalid_argument("side info count exceeds drawn order");
  std::vector<std::pair<std::size_t, Snv>> pairs;
  pairs.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    pairs.emplace_back(order[i], target[order[i]]);
  return SideInformation(std::move(pairs), target.size());
}

void SynthSpec::validate() const {
  if (sites < 2 || panel_size < 2) throw std::invalid_argument("synthetic spec needs n, K >= 2");
  if (genotype_count < 1) throw std::invalid_argument("need at least one genotype");
  if (founders < 1) throw std::invalid_argument("need at least one founder");
  if (!(switch_prob >= 0.0 && switch_prob <= 1.0))
    throw std::invalid_argument("switch probability outside [0, 1]");
  if (!(mutation_rate >= 0.0 && mutation_rate < 1.0))
    throw std::invalid_argument("mutation rate outside [0, 1)");
  if (!(maf_low >= 0.0 && maf_low <= maf_high && maf_high <= 1.0))
    throw std::invalid_argument("bad minor allele frequency range");
}

SynthResult generate_synthetic_panel(const SynthSpec& spec, Rng& rng) {
  spec.validate();
  std::vector<double> maf(spec.sites);
  for (auto& f : maf) f = spec.maf_low + rng.uniform() * (spec.maf_high - spec.maf_low);

  std::vector<std::vector<std::uint8_t>> founders(spec.founders);
  for (auto& row : founders) {
    row.resize(spec.sites);
    for (std::size_t j = 0; j < spec.sites; ++j) row[j] = rng.flip(maf[j]) ? 1 : 0;
  }

  auto copy_haplotype = [&]() {
    std::vector<std::uint8_t> row(spec.sites);
    std::size_t f = std::size_t(rng.below(spec.founders));
    for (std::size_t j = 0; j < spec.sites; ++j) {
      if (j > 0 && rng.flip(spec.switch_prob)) f = std::size_t(rng.below(spec.founders));
      std::uint8_t a = founders[f][j];
      if (rng.flip(spec.mutation_rate)) a ^= 1;
      row[j] = a;
    }
    return row;
  };

  SynthResult out;
  out.panel.rows.resize(spec.panel_size);
  for (auto& row : out.panel.rows) row = copy_haplotype();
  out.panel.validate();

  out.genotypes.resize(spec.genotype_count);
  for (auto& g : out.genotypes) {
    const auto& a = out.panel.rows[rng.below(spec.panel_size)];
    const auto& b = out.panel.rows[rng.below(spec.panel_size)];
    g.values.resize(spec.sites);
    for (std::size_t j = 0; j < spec.sites; ++j) g[j] = Snv(a[j] + b[j]);
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (h < 2) throw ConfigError("h must be >= 2");
  if (kdf_cost < 1) throw ConfigError("kdf cost must be >= 1");
  if (fractions.empty()) throw ConfigError("no side info fractions");
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    if (!(fractions[i] >= 0.0 && fractions[i] <= 1.0))
      throw ConfigError("fractions must lie in [0, 1]");
    if (i > 0 && fractions[i] <= fractions[i - 1])
      throw ConfigError("fractions must be sorted strictly ascending");
  }
  if (kinds.empty()) throw ConfigError("no side info kinds");
  if (corpus.passwords.empty()) throw ConfigError("password corpus is empty");
  if (panel_path.empty() != genotypes_path.empty())
    throw ConfigError("panel and genotype paths must be given together");
  if (panel_path.empty() && population_labels.empty())
    throw ConfigError("no populations configured");
}

namespace {

struct Population {
  std::string label;
  PopulationModel model;
  std::vector<GenotypeSequence> targets;
};

// Stream-id tags keep the seed-derived substreams of different runner
// stages disjoint.
enum StreamTag : std::uint64_t { kTagSynth = 1, kTagTrial = 2 };

std::uint64_t stream_id(StreamTag tag, std::size_t pop, std::size_t trial = 0) {
  return (std::uint64_t(tag) << 56) ^ (std::uint64_t(pop) << 40) ^ std::uint64_t(trial);
}

std::vector<Population> materialize_populations(const ExperimentConfig& cfg) {
  std::vector<Population> pops;
  if (!cfg.panel_path.empty()) {
    Population p;
    p.label = "panel";
    HaplotypePanel panel = io::load_panel(cfg.panel_path);
    p.targets = io::load_genotypes(cfg.genotypes_path);
    p.model = build_model(panel, p.targets, cfg.rho, cfg.theta);
    pops.push_back(std::move(p));
    return pops;
  }
  for (std::size_t i = 0; i < cfg.population_labels.size(); ++i) {
    Rng rng = Rng::substream(cfg.seed, stream_id(kTagSynth, i));
    SynthResult synth = generate_synthetic_panel(cfg.synth, rng);
    Population p;
    p.label = cfg.population_labels[i];
    p.model = build_model(synth.panel, synth.genotypes, cfg.rho, cfg.theta);
    p.targets = std::move(synth.genotypes);
    pops.push_back(std::move(p));
  }
  return pops;
}

// Streaming mean/std accumulator (Welford; sample std, N-1 denominator).
struct Accum {
  double mean_ = 0.0, m2_ = 0.0;
  std::size_t count = 0;

  void add(double x) {
    ++count;
    double d = x - mean_;
    mean_ += d / double(count);
    m2_ += d * (x - mean_);
  }
  double mean() const { return mean_; }
  double std_dev() const {
    if (count < 2) return 0.0;
    return std::sqrt(std::max(m2_ / double(count - 1), 0.0));
  }
};

using CellKey = std::pair<std::size_t, std::size_t>;  // (kind index, fraction index)

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::vector<ResultRow> run_low_entropy(const ExperimentConfig& cfg) {
  cfg.validate();
  auto pops = materialize_populations(cfg);
  std::vector<ResultRow> rows;

  for (std::size_t pi = 0; pi < pops.size(); ++pi) {
    const Population& pop = pops[pi];
    const std::size_t n = pop.model.site_count;
    const dte::DteParams params{n, cfg.h};
    std::map<CellKey, Accum> cand_acc, adv_acc;

    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
      Rng rng = Rng::substream(cfg.seed, stream_id(kTagTrial, pi, trial));
      const GenotypeSequence& target = pop.targets[rng.below(pop.targets.size())];
      const std::string& password = cfg.corpus.passwords[rng.below(cfg.corpus.size())];

      crypto::Ciphertext ct = crypto::henc(crypto::Password{password}, target,
                                           pop.model, params, cfg.selector,
                                           cfg.kdf_cost, rng);
      attacks::HoneyPool pool =
          attacks::build_honey_pool(ct, cfg.corpus, pop.model, SideInformation{});

      const auto max_count = std::size_t(cfg.fractions.back() * double(n));
      for (std::size_t ki = 0; ki < cfg.kinds.size(); ++ki) {
        auto order = nested_side_info_order(cfg.kinds[ki], n, max_count, rng);
        for (std::size_t fi = 0; fi < cfg.fractions.size(); ++fi) {
          auto count = std::size_t(cfg.fractions[fi] * double(n));
          SideInformation si = side_info_from_order(target, order, count);
          attacks::CandidateSet cand = attacks::mr_si_filter(pool, si);
          cand_acc[{ki, fi}].add(double(cand.distinct_sequences.size()));
          adv_acc[{ki, fi}].add(attacks::advantage(cand, target));
        }
      }
    }

    for (std::size_t ki = 0; ki < cfg.kinds.size(); ++ki)
      for (std::size_t fi = 0; fi < cfg.fractions.size(); ++fi) {
        const Accum& c = cand_acc[{ki, fi}];
        const Accum& a = adv_acc[{ki, fi}];
        rows.push_back({pop.label, kind_name(cfg.kinds[ki]), cfg.fractions[fi],
                        "candidates", c.mean(), c.std_dev(), c.count});
        rows.push_back({pop.label, kind_name(cfg.kinds[ki]), cfg.fractions[fi],
                        "advantage", a.mean(), a.std_dev(), a.count});
      }
  }
  return rows;
}

std::string random_high_entropy_password(Rng& rng) {
  static const char alphabet[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";
  std::string pw;
  pw.reserve(12);
  for (int i = 0; i < 12; ++i) pw.push_back(alphabet[rng.below(64)]);
  return pw;
}

std::vector<ResultRow> run_high_entropy(const ExperimentConfig& cfg) {
  cfg.validate();
  auto pops = materialize_populations(cfg);
  std::vector<ResultRow> rows;

  static const char* kMethodNames[5] = {"accuracy_B1", "accuracy_B2", "accuracy_B3",
                                        "accuracy_G1", "accuracy_G2"};

  for (std::size_t pi = 0; pi < pops.size(); ++pi) {
    const Population& pop = pops[pi];
    const std::size_t n = pop.model.site_count;
    const dte::DteParams params{n, cfg.h};
    std::map<CellKey, std::array<Accum, 5>> acc;

    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
      Rng rng = Rng::substream(cfg.seed, stream_id(kTagTrial, pi, trial));
      const GenotypeSequence& target = pop.targets[rng.below(pop.targets.size())];
      std::string password = random_high_entropy_password(rng);
      while (cfg.corpus.contains(password)) password = random_high_entropy_password(rng);
      if (cfg.log)
        *cfg.log << "high-entropy trial population=" << pop.label << " trial=" << trial
                 << " password=" << password << "\n";

      crypto::Ciphertext ct = crypto::henc(crypto::Password{password}, target,
                                           pop.model, params, cfg.selector,
                                           cfg.kdf_cost, rng);
      attacks::HoneyPool pool =
          attacks::build_honey_pool(ct, cfg.corpus, pop.model, SideInformation{});

      const auto max_count = std::size_t(cfg.fractions.back() * double(n));
      for (std::size_t ki = 0; ki < cfg.kinds.size(); ++ki) {
        auto order = nested_side_info_order(cfg.kinds[ki], n, max_count, rng);
        for (std::size_t fi = 0; fi < cfg.fractions.size(); ++fi) {
          auto count = std::size_t(cfg.fractions[fi] * double(n));
          SideInformation si = side_info_from_order(target, order, count);

          GenotypeSequence preds[5] = {
              infer_baseline(pop.model, si, BaselineMethod::B1, rng),
              infer_baseline(pop.model, si, BaselineMethod::B2, rng),
              infer_baseline(pop.model, si, BaselineMethod::B3, rng),
              attacks::g1_infer(pool, si, n),
              attacks::g2_infer(pool, si, n)};
          for (int m = 0; m < 5; ++m)
            acc[{ki, fi}][m].add(
                attacks::accuracy(preds[m], target, si, cfg.metric_mode));
        }
      }
    }

    for (std::size_t ki = 0; ki < cfg.kinds.size(); ++ki)
      for (std::size_t fi = 0; fi < cfg.fractions.size(); ++fi) {
        const auto& cell = acc[{ki, fi}];
        for (int m = 0; m < 5; ++m)
          rows.push_back({pop.label, kind_name(cfg.kinds[ki]), cfg.fractions[fi],
                          kMethodNames[m], cell[m].mean(), cell[m].std_dev(),
                          cell[m].count});
        double best_b = std::max({cell[0].mean(), cell[1].mean(), cell[2].mean()});
        double best_g = std::max(cell[3].mean(), cell[4].mean());
        rows.push_back({pop.label, kind_name(cfg.kinds[ki]), cfg.fractions[fi],
                        "delta_best", best_g - best_b, 0.0, cell[0].count});
      }
  }
  return rows;
}

std::string emit_csv(const std::vector<ResultRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("no result rows to emit");
  std::ostringstream out;
  out << "population,kind,fraction,metric,mean,std,trials\n";
  for (const auto& r : rows) {
    out << r.population << ',' << r.kind << ',' << format_double(r.fraction) << ','
        << r.metric << ',' << format_double(r.mean) << ',' << format_double(r.std_dev)
        << ',' << r.trials << '\n';
  }
  return out.str();
}

std::vector<ResultRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "population,kind,fraction,metric,mean,std,trials")
    throw FormatError("unexpected CSV header: " + line);

  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        fields.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    if (fields.size() != 7) throw FormatError("CSV row has wrong field count: " + line);
    ResultRow r;
    r.population = fields[0];
    r.kind = fields[1];
    r.fraction = std::stod(fields[2]);
    r.metric = fields[3];
    r.mean = std::stod(fields[4]);
    r.std_dev = std::stod(fields[5]);
    r.trials = std::stoul(fields[6]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  io::write_text_file(path, emit_csv(rows));
}

namespace {

std::string svg_line_chart(const std::string& metric,
                           const std::vector<ResultRow>& rows) {
  // Collect series keyed by population/kind.
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  double max_y = 1e-9, max_x = 1e-9;
  for (const auto& r : rows) {
    if (r.metric != metric) continue;
    series[r.population + "/" + r.kind].push_back({r.fraction, r.mean});
    max_y = std::max(max_y, r.mean);
    max_x = std::max(max_x, r.fraction);
  }
  const double w = 640, h = 420, ml = 60, mb = 40, mt = 20, mr = 20;
  auto sx = [&](double x) { return ml + x / max_x * (w - ml - mr); };
  auto sy = [&](double y) { return h - mb - y / max_y * (h - mb - mt); };

  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  std::ostringstream out;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h
      << "'>\n<rect width='100%' height='100%' fill='white'/>\n"
      << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << w - mr << "' y2='"
      << h - mb << "' stroke='black'/>\n"
      << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << h - mb
      << "' stroke='black'/>\n"
      << "<text x='" << w / 2 << "' y='" << h - 8
      << "' font-size='13' text-anchor='middle'>side info fraction</text>\n"
      << "<text x='16' y='" << h / 2 << "' font-size='13' transform='rotate(-90 16 "
      << h / 2 << ")' text-anchor='middle'>" << metric << "</text>\n";
  int ci = 0, legend_y = int(mt) + 12;
  for (const auto& [name, pts] : series) {
    const char* color = palette[ci % 8];
    out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
    for (const auto& [x, y] : pts) out << sx(x) << ',' << sy(y) << ' ';
    out << "'/>\n";
    for (const auto& [x, y] : pts)
      out << "<circle cx='" << sx(x) << "' cy='" << sy(y) << "' r='2.5' fill='" << color
          << "'/>\n";
    out << "<text x='" << w - mr - 150 << "' y='" << legend_y << "' font-size='11' fill='"
        << color << "'>" << name << "</text>\n";
    legend_y += 14;
    ++ci;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace

std::vector<std::string> write_plots(const std::vector<ResultRow>& rows,
                                     const std::string& prefix) {
  if (rows.empty()) throw std::invalid_argument("no result rows to plot");
  std::vector<std::string> metrics;
  for (const auto& r : rows)
    if (std::find(metrics.begin(), metrics.end(), r.metric) == metrics.end())
      metrics.push_back(r.metric);
  std::vector<std::string> files;
  for (const auto& metric : metrics) {
    std::string path = prefix + metric + ".svg";
    io::write_text_file(path, svg_line_chart(metric, rows));
    files.push_back(path);
  }
  return files;
}

}  // namespace honeyseq::experiments
