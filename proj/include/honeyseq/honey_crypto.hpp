#pragma once

#include <array>
#include <string>
#include <vector>

#include "honeyseq/dte.hpp"
#include "honeyseq/genome_model.hpp"

namespace honeyseq::crypto {

inline constexpr std::uint8_t kVersion = 1;
inline constexpr std::size_t kSaltBytes = 16;

// Versioned binary record. Wire layout (little-endian integers):
//   magic "HSEQ" | version u8 | selector u8 | n u32 | h u8 | kdf_cost u32 |
//   salt[16] | body[ceil(h*n/8)]
// The body is the seed, left-padded with zero bits to the full byte count,
// XORed with the keystream over every body bit. There is deliberately no
// MAC: any password must decrypt to a plausible seed.
struct Ciphertext {
  std::uint8_t version = kVersion;
  Selector selector = Selector::markov1;
  std::uint32_t n = 0;
  std::uint8_t h = 0;
  std::uint32_t kdf_cost = 1;
  std::array<std::uint8_t, kSaltBytes> salt{};
  std::vector<std::uint8_t> body;

  std::size_t body_bytes() const { return (std::size_t(n) * h + 7) / 8; }
  dte::DteParams params() const { return dte::DteParams{n, h}; }

  bool operator==(const Ciphertext& o) const = default;
};

std::vector<std::uint8_t> serialize(const Ciphertext& ct);
Ciphertext parse(const std::vector<std::uint8_t>& bytes);  // throws FormatError

struct Password {
  std::string text;  // non-empty UTF-8 passphrase

  void validate() const {
    if (text.empty()) throw std::invalid_argument("password must be non-empty");
  }
};

// PBKDF2-HMAC-SHA256 with `cost` iterations, 32-byte key.
std::array<std::uint8_t, 32> derive_key(const Password& password,
                                        const std::array<std::uint8_t, kSaltBytes>& salt,
                                        std::uint32_t kdf_cost);

// Counter-mode expansion: block i = SHA256(key || BE32(i)).
std::vector<std::uint8_t> expand(const std::array<std::uint8_t, 32>& key,
                                 std::size_t nbytes);

// DTE-then-encrypt. Fresh random salt per call; the seed is drawn uniformly
// from the leaf interval, so repeated calls give distinct ciphertexts.
Ciphertext henc(const Password& password, const GenotypeSequence& seq,
                const PopulationModel& model, const dte::DteParams& params,
                Selector sel, std::uint32_t kdf_cost, Rng& rng);

// Unmask-then-decode. Never fails for a well-formed ciphertext: the
// unmasked value is reduced into [0, 2^{h*n}) and every seed decodes, so a
// wrong password yields a plausible decoy sequence.
GenotypeSequence hdec(const Password& password, const Ciphertext& ct,
                      const PopulationModel& model);

// The seed recovered by `password` (decoy or not); hdec = decode(hdec_seed).
BigInt hdec_seed(const Password& password, const Ciphertext& ct);

}  // namespace honeyseq::crypto
