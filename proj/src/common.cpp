#include "spatialviz/common.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <limits>

namespace spatialviz {

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t Rng::next_u64() { return engine_(); }

std::uint64_t Rng::bounded(std::uint64_t range) {
  // Rejection sampling over the largest multiple of range.
  if (range == 0) return next_u64();
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t v = next_u64();
  while (v >= limit) v = next_u64();
  return v % range;
}

int Rng::uniform_int(int lo, int hi) {
  if (lo > hi) throw Error("Rng::uniform_int: empty range");
  auto span = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo + 1);
  return lo + static_cast<int>(bounded(span));
}

double Rng::uniform_real(double lo, double hi) {
  const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

bool Rng::chance(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform_real(0.0, 1.0) < p;
}

Rng Rng::fork() { return Rng(mix64(next_u64())); }

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t suite_seed, std::string_view task_tag, int level,
                          int index) {
  // FNV-1a of the tag so the derivation does not depend on enum ordering.
  std::uint64_t tag = 0xcbf29ce484222325ULL;
  for (unsigned char c : task_tag) {
    tag ^= c;
    tag *= 0x100000001b3ULL;
  }
  std::uint64_t s = mix64(suite_seed ^ tag);
  s = mix64(s + static_cast<std::uint64_t>(level));
  return mix64(s + static_cast<std::uint64_t>(index));
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 15]);
  }
  return out;
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  if (bytes.empty()) return out;
  int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                          static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

}  // namespace spatialviz
