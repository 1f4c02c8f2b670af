#pragma once

#include <string>
#include <vector>

#include "honeyseq/attacks.hpp"
#include "honeyseq/genome_model.hpp"

namespace honeyseq::io {

// Panel file: one haplotype per line, characters '0'/'1'; '#' lines are
// comments; LF or CRLF.
HaplotypePanel load_panel(const std::string& path);
void save_panel(const HaplotypePanel& panel, const std::string& path);

// Genotype file: same shape with '0'/'1'/'2'.
std::vector<GenotypeSequence> load_genotypes(const std::string& path);
void save_genotypes(const std::vector<GenotypeSequence>& genotypes, const std::string& path);

// Single sequence: first non-comment line of a genotype file.
GenotypeSequence load_sequence(const std::string& path);

// Newline-delimited passwords, blank lines skipped, duplicates dropped.
attacks::PasswordCorpus load_corpus(const std::string& path);

crypto::Ciphertext load_ciphertext(const std::string& path);
void save_ciphertext(const crypto::Ciphertext& ct, const std::string& path);

std::string sequence_to_string(const GenotypeSequence& seq);
GenotypeSequence sequence_from_string(const std::string& line);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace honeyseq::io
