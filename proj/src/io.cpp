#include "honeyseq/io.hpp"

#include <fstream>
#include <sstream>

namespace honeyseq::io {

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

bool is_comment_or_blank(const std::string& line) {
  return line.empty() || line[0] == '#';
}

std::vector<std::uint8_t> parse_digit_row(const std::string& line, char max_digit,
                                          const std::string& what) {
  std::vector<std::uint8_t> row;
  row.reserve(line.size());
  for (char c : line) {
    if (c < '0' || c > max_digit)
      throw IoError(what + ": invalid character '" + std::string(1, c) + "'");
    row.push_back(std::uint8_t(c - '0'));
  }
  return row;
}

}  // namespace

HaplotypePanel load_panel(const std::string& path) {
  HaplotypePanel panel;
  for (const auto& line : read_lines(path)) {
    if (is_comment_or_blank(line)) continue;
    panel.rows.push_back(parse_digit_row(line, '1', "panel file " + path));
  }
  if (panel.rows.empty()) throw IoError("panel file " + path + " has no haplotypes");
  try {
    panel.validate();
  } catch (const std::invalid_argument& e) {
    throw IoError("panel file " + path + ": " + e.what());
  }
  return panel;
}

void save_panel(const HaplotypePanel& panel, const std::string& path) {
  std::ostringstream out;
  for (const auto& row : panel.rows) {
    for (auto a : row) out << char('0' + a);
    out << '\n';
  }
  write_text_file(path, out.str());
}

std::vector<GenotypeSequence> load_genotypes(const std::string& path) {
  std::vector<GenotypeSequence> out;
  for (const auto& line : read_lines(path)) {
    if (is_comment_or_blank(line)) continue;
    out.emplace_back(parse_digit_row(line, '2', "genotype file " + path));
  }
  if (out.empty()) throw IoError("genotype file " + path + " has no sequences");
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i].size() != out[0].size())
      throw IoError("genotype file " + path + " has ragged rows");
  return out;
}

void save_genotypes(const std::vector<GenotypeSequence>& genotypes, const std::string& path) {
  std::ostringstream out;
  for (const auto& g : genotypes) out << sequence_to_string(g) << '\n';
  write_text_file(path, out.str());
}

GenotypeSequence load_sequence(const std::string& path) {
  return load_genotypes(path).front();
}

attacks::PasswordCorpus load_corpus(const std::string& path) {
  try {
    return attacks::PasswordCorpus::from_lines(read_lines(path));
  } catch (const std::invalid_argument& e) {
    throw IoError("corpus file " + path + ": " + e.what());
  }
}

crypto::Ciphertext load_ciphertext(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return crypto::parse(bytes);
}

void save_ciphertext(const crypto::Ciphertext& ct, const std::string& path) {
  auto bytes = crypto::serialize(ct);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            std::streamsize(bytes.size()));
  if (!out) throw IoError("write failed for " + path);
}

std::string sequence_to_string(const GenotypeSequence& seq) {
  std::string s;
  s.reserve(seq.size());
  for (auto v : seq.values) s.push_back(char('0' + v));
  return s;
}

GenotypeSequence sequence_from_string(const std::string& line) {
  GenotypeSequence seq(parse_digit_row(line, '2', "sequence"));
  seq.validate();
  return seq;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace honeyseq::io
