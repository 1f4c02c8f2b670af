// honeyseq: honey encryption for ternary genomic sequences, with the
// side-information attack harness and experiment pipelines.
//
// Exit codes: 0 success, 2 configuration error, 3 I/O or file-format error.

#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "honeyseq/experiments.hpp"
#include "honeyseq/io.hpp"

namespace hs = honeyseq;

namespace {

struct ModelArgs {
  std::string panel_path;
  std::string genotypes_path;
  double rho = 0.5;
  double theta = 0.01;

  void attach(CLI::App* cmd, bool required = true) {
    auto* p = cmd->add_option("--panel", panel_path, "haplotype panel file ('0'/'1' rows)");
    auto* g = cmd->add_option("--genotypes", genotypes_path, "genotype file ('0'/'1'/'2' rows)");
    if (required) {
      p->required();
      g->required();
    }
    cmd->add_option("--rho", rho, "recombination parameter (>= 0)");
    cmd->add_option("--theta", theta, "miscopy probability ([0, 0.5))");
  }

  hs::PopulationModel load() const {
    auto panel = hs::io::load_panel(panel_path);
    auto genotypes = hs::io::load_genotypes(genotypes_path);
    return hs::build_model(panel, genotypes, rho, theta);
  }
};

hs::SideInformation parse_side_info(const std::string& text, std::size_t n) {
  std::vector<std::pair<std::size_t, hs::Snv>> pairs;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    std::string item = text.substr(start, end - start);
    std::size_t colon = item.find(':');
    if (colon == std::string::npos)
      throw hs::ConfigError("side info items must look like pos:val, got '" + item + "'");
    try {
      std::size_t pos = std::stoul(item.substr(0, colon));
      int val = std::stoi(item.substr(colon + 1));
      if (val < 0 || val > 2) throw hs::ConfigError("side info value must be 0, 1 or 2");
      pairs.emplace_back(pos, hs::Snv(val));
    } catch (const std::logic_error&) {
      throw hs::ConfigError("cannot parse side info item '" + item + "'");
    }
    start = end + 1;
  }
  try {
    return hs::SideInformation(std::move(pairs), n);
  } catch (const std::invalid_argument& e) {
    throw hs::ConfigError(e.what());
  }
}

std::vector<double> parse_fractions(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    try {
      out.push_back(std::stod(text.substr(start, end - start)));
    } catch (const std::logic_error&) {
      throw hs::ConfigError("cannot parse fraction list '" + text + "'");
    }
    start = end + 1;
  }
  return out;
}

std::uint64_t default_seed() {
  std::random_device rd;
  return (std::uint64_t(rd()) << 32) ^ rd();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Honey encryption for ternary genomic sequences"};
  app.require_subcommand(1);
  // The storage-overhead flag is spelled --h, so help must not claim -h.
  app.set_help_flag("--help", "print help and exit");

  // encrypt
  auto* enc = app.add_subcommand("encrypt", "DTE-encode a sequence and encrypt the seed");
  ModelArgs enc_model;
  enc_model.attach(enc);
  std::string enc_sequence, enc_password, enc_out, enc_selector = "rr";
  unsigned enc_h = 4;
  std::uint32_t enc_kdf = 10000;
  std::uint64_t enc_seed = default_seed();
  enc->add_option("--sequence", enc_sequence, "file with the plaintext sequence")->required();
  enc->add_option("--password", enc_password, "encryption password")->required();
  enc->add_option("--selector", enc_selector, "conditional model: markov1 | rr");
  enc->add_option("--h", enc_h, "storage overhead bits per SNV (>= 2)");
  enc->add_option("--kdf-cost", enc_kdf, "PBKDF2 iteration count");
  enc->add_option("--seed", enc_seed, "RNG seed (default: random)");
  enc->add_option("--out", enc_out, "ciphertext output file")->required();

  // decrypt
  auto* dec = app.add_subcommand("decrypt", "decrypt a ciphertext (any password succeeds)");
  ModelArgs dec_model;
  dec_model.attach(dec);
  std::string dec_password, dec_in, dec_out;
  dec->add_option("--password", dec_password, "password to try")->required();
  dec->add_option("--in", dec_in, "ciphertext file")->required();
  dec->add_option("--out", dec_out, "write sequence here instead of stdout");

  // bound
  auto* bound = app.add_subcommand("bound", "message-recovery upper bound and loss term");
  hs::attacks::SecurityBoundInputs bound_in;
  bound->add_option("--n", bound_in.n, "sequence length")->required();
  bound->add_option("--h", bound_in.h, "storage overhead");
  bound->add_option("--w", bound_in.w, "max password probability");
  bound->add_option("--gamma", bound_in.gamma, "max sequence probability");
  bound->add_option("--delta", bound_in.delta, "distribution slack (default 0)");

  // crack
  auto* crack = app.add_subcommand("crack", "MR-SI brute-force filter over a corpus");
  ModelArgs crack_model;
  crack_model.attach(crack);
  std::string crack_corpus, crack_in, crack_si, crack_target;
  crack->add_option("--corpus", crack_corpus, "password corpus file")->required();
  crack->add_option("--in", crack_in, "ciphertext file")->required();
  crack->add_option("--si", crack_si, "side info pairs pos:val[,pos:val...]");
  crack->add_option("--target", crack_target, "true sequence file (reports advantage)");

  // infer
  auto* infer = app.add_subcommand("infer", "one-shot sequence inference (G1/G2/B1/B2/B3)");
  ModelArgs infer_model;
  infer_model.attach(infer);
  std::string infer_method, infer_corpus, infer_in, infer_si, infer_target, infer_out;
  std::string infer_mode = "hidden_only";
  std::uint64_t infer_seed = default_seed();
  infer->add_option("--method", infer_method, "G1 | G2 | B1 | B2 | B3")->required();
  infer->add_option("--corpus", infer_corpus, "password corpus (G1/G2)");
  infer->add_option("--in", infer_in, "ciphertext file (G1/G2)");
  infer->add_option("--si", infer_si, "side info pairs pos:val[,pos:val...]");
  infer->add_option("--target", infer_target, "true sequence file (reports accuracy)");
  infer->add_option("--metric-mode", infer_mode, "accuracy mode: all | hidden_only");
  infer->add_option("--seed", infer_seed, "RNG seed for B2 (default: random)");
  infer->add_option("--out", infer_out, "write prediction here instead of stdout");

  // experiment
  auto* exp = app.add_subcommand("experiment", "low/high-entropy evaluation pipelines");
  hs::experiments::ExperimentConfig cfg;
  std::string exp_mode = "low", exp_corpus, exp_out, exp_selector = "markov1";
  std::string exp_fractions, exp_metric_mode = "hidden_only";
  std::vector<std::string> exp_kinds;
  bool exp_plot = false;
  cfg.seed = 1;
  exp->add_option("--mode", exp_mode, "low | high")->required();
  exp->add_option("--corpus", exp_corpus, "password corpus file")->required();
  exp->add_option("--out", exp_out, "CSV output path")->required();
  exp->add_option("--panel", cfg.panel_path, "panel file (default: synthetic populations)");
  exp->add_option("--genotypes", cfg.genotypes_path, "genotype file");
  exp->add_option("--sites", cfg.synth.sites, "synthetic sites per sequence");
  exp->add_option("--panel-size", cfg.synth.panel_size, "synthetic panel haplotypes");
  exp->add_option("--genotype-count", cfg.synth.genotype_count, "synthetic genotypes");
  exp->add_option("--founders", cfg.synth.founders, "synthetic founder haplotypes");
  exp->add_option("--switch-prob", cfg.synth.switch_prob, "synthetic per-site founder switch prob");
  exp->add_option("--mutation-rate", cfg.synth.mutation_rate, "synthetic mutation rate");
  exp->add_option("--h", cfg.h, "storage overhead bits per SNV");
  exp->add_option("--selector", exp_selector, "markov1 | rr (markov1 is much faster)");
  exp->add_option("--rho", cfg.rho, "recombination parameter");
  exp->add_option("--theta", cfg.theta, "miscopy probability");
  exp->add_option("--kdf-cost", cfg.kdf_cost, "PBKDF2 iterations (default 1 for throughput)");
  exp->add_option("--fractions", exp_fractions, "comma list, default 0,0.01,0.025,0.05,0.1,0.2");
  exp->add_option("--kind", exp_kinds, "sparse | consecutive (repeatable; default both)");
  exp->add_option("--trials", cfg.trials, "trials per population");
  exp->add_option("--seed", cfg.seed, "master RNG seed");
  exp->add_option("--metric-mode", exp_metric_mode, "accuracy mode: all | hidden_only");
  exp->add_flag("--plot", exp_plot, "also write SVG charts next to the CSV");

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic panel + genotype sample");
  hs::experiments::SynthSpec synth_spec;
  std::string synth_panel_out, synth_genotypes_out;
  std::uint64_t synth_seed = 1;
  synth->add_option("--sites", synth_spec.sites, "sites per sequence");
  synth->add_option("--panel-size", synth_spec.panel_size, "panel haplotypes");
  synth->add_option("--genotype-count", synth_spec.genotype_count, "genotype sample size");
  synth->add_option("--founders", synth_spec.founders, "founder haplotypes");
  synth->add_option("--switch-prob", synth_spec.switch_prob, "per-site founder switch prob");
  synth->add_option("--mutation-rate", synth_spec.mutation_rate, "mutation rate");
  synth->add_option("--seed", synth_seed, "RNG seed");
  synth->add_option("--panel-out", synth_panel_out, "panel output file")->required();
  synth->add_option("--genotypes-out", synth_genotypes_out, "genotype output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*enc) {
      auto model = enc_model.load();
      auto seq = hs::io::load_sequence(enc_sequence);
      hs::dte::DteParams params{model.site_count, enc_h};
      hs::Rng rng(enc_seed);
      auto ct = hs::crypto::henc(hs::crypto::Password{enc_password}, seq, model, params,
                                 hs::selector_from_name(enc_selector), enc_kdf, rng);
      hs::io::save_ciphertext(ct, enc_out);
      std::cout << "wrote " << enc_out << " (n=" << ct.n << ", h=" << unsigned(ct.h)
                << ", selector=" << hs::selector_name(ct.selector) << ")\n";
    } else if (*dec) {
      auto model = dec_model.load();
      auto ct = hs::io::load_ciphertext(dec_in);
      auto seq = hs::crypto::hdec(hs::crypto::Password{dec_password}, ct, model);
      std::string text = hs::io::sequence_to_string(seq);
      if (dec_out.empty()) std::cout << text << "\n";
      else hs::io::write_text_file(dec_out, text + "\n");
    } else if (*bound) {
      auto result = hs::attacks::recovery_upper_bound(bound_in);
      std::cout << "bound=" << result.bound << "\n"
                << "log2_delta=" << result.delta_term_log2 << "\n";
    } else if (*crack) {
      auto model = crack_model.load();
      auto ct = hs::io::load_ciphertext(crack_in);
      auto corpus = hs::io::load_corpus(crack_corpus);
      auto si = parse_side_info(crack_si, ct.n);
      auto pool = hs::attacks::build_honey_pool(ct, corpus, model, si);
      auto cand = hs::attacks::mr_si_filter(pool, si);
      std::cout << "corpus=" << corpus.size() << " surviving_passwords="
                << cand.entry_indices.size() << " distinct_sequences="
                << cand.distinct_sequences.size() << "\n";
      if (!crack_target.empty()) {
        auto target = hs::io::load_sequence(crack_target);
        std::cout << "advantage=" << hs::attacks::advantage(cand, target) << "\n";
      }
      for (std::size_t i = 0; i < cand.entry_indices.size() && i < 10; ++i) {
        std::size_t idx = cand.entry_indices[i];
        std::cout << "candidate password=" << corpus.passwords[idx] << " sequence="
                  << hs::io::sequence_to_string(pool.entries[idx].sequence) << "\n";
      }
    } else if (*infer) {
      auto model = infer_model.load();
      auto si = parse_side_info(infer_si, model.site_count);
      hs::GenotypeSequence pred;
      if (infer_method == "G1" || infer_method == "G2" || infer_method == "g1" ||
          infer_method == "g2") {
        if (infer_corpus.empty() || infer_in.empty())
          throw hs::ConfigError("G1/G2 need --corpus and --in");
        auto ct = hs::io::load_ciphertext(infer_in);
        auto corpus = hs::io::load_corpus(infer_corpus);
        auto pool = hs::attacks::build_honey_pool(ct, corpus, model, si);
        pred = (infer_method == "G1" || infer_method == "g1")
                   ? hs::attacks::g1_infer(pool, si, model.site_count)
                   : hs::attacks::g2_infer(pool, si, model.site_count);
      } else {
        hs::Rng rng(infer_seed);
        pred = hs::infer_baseline(model, si, hs::baseline_from_name(infer_method), rng);
      }
      std::string text = hs::io::sequence_to_string(pred);
      if (infer_out.empty()) std::cout << text << "\n";
      else hs::io::write_text_file(infer_out, text + "\n");
      if (!infer_target.empty()) {
        auto target = hs::io::load_sequence(infer_target);
        std::cout << "accuracy="
                  << hs::attacks::accuracy(pred, target, si,
                                           hs::attacks::accuracy_mode_from_name(infer_mode))
                  << "\n";
      }
    } else if (*exp) {
      cfg.corpus = hs::io::load_corpus(exp_corpus);
      cfg.selector = hs::selector_from_name(exp_selector);
      cfg.metric_mode = hs::attacks::accuracy_mode_from_name(exp_metric_mode);
      if (!exp_fractions.empty()) cfg.fractions = parse_fractions(exp_fractions);
      if (!exp_kinds.empty()) {
        cfg.kinds.clear();
        for (const auto& k : exp_kinds)
          cfg.kinds.push_back(hs::experiments::kind_from_name(k));
      }
      std::vector<hs::experiments::ResultRow> rows;
      if (exp_mode == "low") {
        cfg.mode = hs::experiments::ExperimentMode::low;
        rows = hs::experiments::run_low_entropy(cfg);
      } else if (exp_mode == "high") {
        cfg.mode = hs::experiments::ExperimentMode::high;
        std::ofstream log(exp_out + ".log");
        cfg.log = &log;
        rows = hs::experiments::run_high_entropy(cfg);
      } else {
        throw hs::ConfigError("mode must be low or high");
      }
      hs::experiments::write_csv(rows, exp_out);
      std::cout << "wrote " << exp_out << " (" << rows.size() << " rows)\n";
      if (exp_plot) {
        for (const auto& f : hs::experiments::write_plots(rows, exp_out + "."))
          std::cout << "wrote " << f << "\n";
      }
    } else if (*synth) {
      hs::Rng rng(synth_seed);
      auto result = hs::experiments::generate_synthetic_panel(synth_spec, rng);
      hs::io::save_panel(result.panel, synth_panel_out);
      hs::io::save_genotypes(result.genotypes, synth_genotypes_out);
      std::cout << "wrote " << synth_panel_out << " (" << result.panel.size()
                << " haplotypes) and " << synth_genotypes_out << " ("
                << result.genotypes.size() << " genotypes)\n";
    }
  } catch (const hs::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 3;
  } catch (const hs::FormatError& e) {
    std::cerr << "file format error: " << e.what() << "\n";
    return 3;
  } catch (const hs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
