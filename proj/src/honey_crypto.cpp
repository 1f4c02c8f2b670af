#include "honeyseq/honey_crypto.hpp"

#include <cstring>

#include <openssl/evp.h>

namespace honeyseq::crypto {

namespace {

constexpr char kMagic[4] = {'H', 'S', 'E', 'Q'};

void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(std::uint8_t(v));
  out.push_back(std::uint8_t(v >> 8));
  out.push_back(std::uint8_t(v >> 16));
  out.push_back(std::uint8_t(v >> 24));
}

std::uint32_t get_u32le(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 |
         std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}

std::array<std::uint8_t, 32> sha256(const std::uint8_t* data, std::size_t len) {
  std::array<std::uint8_t, 32> out{};
  unsigned int olen = 0;
  if (EVP_Digest(data, len, out.data(), &olen, EVP_sha256(), nullptr) != 1 || olen != 32)
    throw std::runtime_error("SHA-256 failed");
  return out;
}

// Masks or unmasks the full body (header-independent).
std::vector<std::uint8_t> mask_body(const Password& password,
                                    const std::array<std::uint8_t, kSaltBytes>& salt,
                                    std::uint32_t kdf_cost,
                                    const std::vector<std::uint8_t>& data) {
  auto key = derive_key(password, salt, kdf_cost);
  auto ks = expand(key, data.size());
  std::vector<std::uint8_t> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = data[i] ^ ks[i];
  return out;
}

}  // namespace

std::vector<std::uint8_t> serialize(const Ciphertext& ct) {
  std::vector<std::uint8_t> out;
  out.reserve(4 + 1 + 1 + 4 + 1 + 4 + kSaltBytes + ct.body.size());
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(ct.version);
  out.push_back(static_cast<std::uint8_t>(ct.selector));
  put_u32le(out, ct.n);
  out.push_back(ct.h);
  put_u32le(out, ct.kdf_cost);
  out.insert(out.end(), ct.salt.begin(), ct.salt.end());
  out.insert(out.end(), ct.body.begin(), ct.body.end());
  return out;
}

Ciphertext parse(const std::vector<std::uint8_t>& bytes) {
  constexpr std::size_t kHeader = 4 + 1 + 1 + 4 + 1 + 4 + kSaltBytes;
  if (bytes.size() < kHeader) throw FormatError("ciphertext truncated");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("bad magic");
  Ciphertext ct;
  ct.version = bytes[4];
  if (ct.version != kVersion) throw FormatError("unsupported version");
  if (bytes[5] > 1) throw FormatError("unknown model selector");
  ct.selector = static_cast<Selector>(bytes[5]);
  ct.n = get_u32le(bytes.data() + 6);
  ct.h = bytes[10];
  ct.kdf_cost = get_u32le(bytes.data() + 11);
  if (ct.n == 0) throw FormatError("sequence length zero");
  if (ct.h < 2) throw FormatError("storage overhead below minimum");
  if (ct.kdf_cost == 0) throw FormatError("KDF cost zero");
  std::copy(bytes.begin() + 15, bytes.begin() + 15 + kSaltBytes, ct.salt.begin());
  if (bytes.size() != kHeader + ct.body_bytes())
    throw FormatError("ciphertext body length mismatch");
  ct.body.assign(bytes.begin() + kHeader, bytes.end());
  return ct;
}

std::array<std::uint8_t, 32> derive_key(const Password& password,
                                        const std::array<std::uint8_t, kSaltBytes>& salt,
                                        std::uint32_t kdf_cost) {
  password.validate();
  if (kdf_cost < 1) throw std::invalid_argument("kdf_cost must be >= 1");
  std::array<std::uint8_t, 32> key{};
  if (PKCS5_PBKDF2_HMAC(password.text.data(), int(password.text.size()),
                        salt.data(), int(salt.size()), int(kdf_cost),
                        EVP_sha256(), int(key.size()), key.data()) != 1)
    throw std::runtime_error("PBKDF2 failed");
  return key;
}

std::vector<std::uint8_t> expand(const std::array<std::uint8_t, 32>& key,
                                 std::size_t nbytes) {
  std::vector<std::uint8_t> out;
  out.reserve(nbytes + 31);
  std::uint8_t block_in[36];
  std::memcpy(block_in, key.data(), 32);
  for (std::uint32_t counter = 0; out.size() < nbytes; ++counter) {
    block_in[32] = std::uint8_t(counter >> 24);
    block_in[33] = std::uint8_t(counter >> 16);
    block_in[34] = std::uint8_t(counter >> 8);
    block_in[35] = std::uint8_t(counter);
    auto block = sha256(block_in, sizeof(block_in));
    out.insert(out.end(), block.begin(), block.end());
  }
  out.resize(nbytes);
  return out;
}

Ciphertext henc(const Password& password, const GenotypeSequence& seq,
                const PopulationModel& model, const dte::DteParams& params,
                Selector sel, std::uint32_t kdf_cost, Rng& rng) {
  password.validate();
  params.validate();
  if (params.n != model.site_count)
    throw std::invalid_argument("DTE length parameter != model site count");
  if (params.n > UINT32_MAX) throw std::invalid_argument("sequence too long for header");
  if (params.h > 255) throw std::invalid_argument("storage overhead too large for header");
  if (kdf_cost < 1) throw std::invalid_argument("kdf_cost must be >= 1");

  BigInt seed = dte::encode(model, seq, params, sel, rng);

  Ciphertext ct;
  ct.selector = sel;
  ct.n = std::uint32_t(params.n);
  ct.h = std::uint8_t(params.h);
  ct.kdf_cost = kdf_cost;
  auto salt = rng.bytes(kSaltBytes);
  std::copy(salt.begin(), salt.end(), ct.salt.begin());
  ct.body = mask_body(password, ct.salt, ct.kdf_cost,
                      to_bytes_be(seed, ct.body_bytes()));
  return ct;
}

BigInt hdec_seed(const Password& password, const Ciphertext& ct) {
  password.validate();
  auto unmasked = mask_body(password, ct.salt, ct.kdf_cost, ct.body);
  BigInt value = from_bytes_be(unmasked.data(), unmasked.size());
  // Drop the pad bits above h*n; the power-of-two seed space makes every
  // remaining value decodable.
  std::size_t bits = std::size_t(ct.n) * ct.h;
  return value & (pow2(bits) - 1);
}

GenotypeSequence hdec(const Password& password, const Ciphertext& ct,
                      const PopulationModel& model) {
  if (model.site_count != ct.n)
    throw std::invalid_argument("ciphertext length != model site count");
  return dte::decode(model, hdec_seed(password, ct), ct.params(), ct.selector);
}

}  // namespace honeyseq::crypto
