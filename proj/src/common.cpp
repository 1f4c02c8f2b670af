#include "honeyseq/common.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace honeyseq {

BigInt pow3(std::size_t k) {
  BigInt r = 1;
  BigInt base = 3;
  while (k > 0) {
    if (k & 1) r *= base;
    base *= base;
    k >>= 1;
  }
  return r;
}

std::vector<std::uint8_t> to_bytes_be(const BigInt& v, std::size_t width) {
  std::vector<std::uint8_t> raw;
  if (v > 0) export_bits(v, std::back_inserter(raw), 8);
  if (raw.size() > width) throw std::invalid_argument("value wider than requested byte width");
  std::vector<std::uint8_t> out(width, 0);
  std::copy(raw.begin(), raw.end(), out.begin() + (width - raw.size()));
  return out;
}

BigInt from_bytes_be(const std::uint8_t* data, std::size_t len) {
  BigInt v = 0;
  if (len > 0) import_bits(v, data, data + len, 8);
  return v;
}

}  // namespace honeyseq
