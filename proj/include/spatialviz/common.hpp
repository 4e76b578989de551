#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spatialviz {

/// Raised for precondition violations and exhausted resampling budgets.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of attempts any "regenerate until valid" loop may spend.
inline constexpr int kResampleBudget = 64;

/// Seeded generator with portable distributions.
///
/// std::uniform_int_distribution and friends are implementation defined, so
/// the bounded draws are done here on top of the (fully specified)
/// mt19937_64 engine. Identical seeds give identical streams on every
/// platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  /// Uniform integer in the closed range [lo, hi]. Requires lo <= hi.
  int uniform_int(int lo, int hi);
  /// Uniform real in [lo, hi).
  double uniform_real(double lo, double hi);
  /// True with probability p.
  bool chance(double p);

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    if (items.empty()) throw Error("Rng::pick on empty sequence");
    return items[static_cast<std::size_t>(uniform_int(0, static_cast<int>(items.size()) - 1))];
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      auto j = static_cast<std::size_t>(uniform_int(0, static_cast<int>(i) - 1));
      std::swap(items[i - 1], items[j]);
    }
  }

  /// Independent child generator; the parent stream advances by one draw.
  Rng fork();

 private:
  std::mt19937_64 engine_;
  std::uint64_t bounded(std::uint64_t range);
};

/// splitmix64 finalizer, used for all seed derivation.
std::uint64_t mix64(std::uint64_t x);

/// Seed of the index-th instance of (task, level) under a suite seed:
/// mix64(mix64(mix64(suite ^ task_tag) + level) + index).
std::uint64_t derive_seed(std::uint64_t suite_seed, std::string_view task_tag, int level,
                          int index);

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

/// Base64 (RFC 4648, padded).
std::string base64_encode(std::span<const std::uint8_t> bytes);

}  // namespace spatialviz
