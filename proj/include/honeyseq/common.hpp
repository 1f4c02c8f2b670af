#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace honeyseq {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Thrown on bad user-supplied configuration/arguments. CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown on file/stream failures. CLI exit code 3.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed binary records (ciphertext header etc).
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// SNV value alphabet is {0,1,2}: 0 common homozygous, 1 heterozygous,
// 2 rare homozygous.
using Snv = std::uint8_t;
inline constexpr int kSnvAlphabet = 3;

struct GenotypeSequence {
  std::vector<Snv> values;

  GenotypeSequence() = default;
  explicit GenotypeSequence(std::vector<Snv> v) : values(std::move(v)) {}

  std::size_t size() const { return values.size(); }
  Snv operator[](std::size_t i) const { return values[i]; }
  Snv& operator[](std::size_t i) { return values[i]; }
  bool operator==(const GenotypeSequence& o) const { return values == o.values; }

  // Every element must be in {0,1,2} and length >= 1.
  void validate() const {
    if (values.empty()) throw std::invalid_argument("genotype sequence is empty");
    for (Snv v : values)
      if (v >= kSnvAlphabet)
        throw std::invalid_argument("genotype value outside {0,1,2}");
  }
};

// Probability triple over the SNV alphabet.
struct Dist3 {
  double p[3] = {0.0, 0.0, 0.0};

  double operator[](int v) const { return p[v]; }
  double& operator[](int v) { return p[v]; }

  double sum() const { return p[0] + p[1] + p[2]; }

  void validate(double tol = 1e-9) const {
    for (double x : p)
      if (!(x >= 0.0)) throw std::invalid_argument("Dist3 entry negative");
    double s = sum();
    if (s < 1.0 - tol || s > 1.0 + tol)
      throw std::invalid_argument("Dist3 does not sum to 1");
  }
};

// 3^k as BigInt.
BigInt pow3(std::size_t k);

// 2^k as BigInt.
inline BigInt pow2(std::size_t k) { return BigInt(1) << k; }

// Big-endian byte encoding, left-padded with zeros to `width` bytes.
std::vector<std::uint8_t> to_bytes_be(const BigInt& v, std::size_t width);
BigInt from_bytes_be(const std::uint8_t* data, std::size_t len);

}  // namespace honeyseq
