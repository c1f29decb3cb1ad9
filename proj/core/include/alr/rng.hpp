#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace alr {

// Deterministic random source shared by every randomized component.
//
// The draw contract is fixed so that results are reproducible across
// standard-library implementations (std::uniform_int_distribution is not
// portable). Everything below is defined in terms of raw mt19937_64 output:
//   - next_u64():       one engine step.
//   - uniform_below(n): rejection sampling; draw v until
//                       v < 2^64 - (2^64 mod n), return v % n.
//   - uniform01():      (next_u64() >> 11) * 2^-53, in [0,1).
//   - normal():         Box-Muller on two uniform01() draws, values returned
//                       in pairs (cos first, then sin).
// Copyable by value; a copy replays the same sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Unbiased integer in [0, n). n must be positive.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  // First `take` entries of a Fisher-Yates shuffle of `items`, in draw order.
  template <typename T>
  std::vector<T> sample_without_replacement(std::vector<T> items,
                                            std::size_t take) {
    for (std::size_t i = 0; i < take && i < items.size(); ++i) {
      const std::size_t j = i + uniform_below(items.size() - i);
      std::swap(items[i], items[j]);
    }
    items.resize(take < items.size() ? take : items.size());
    return items;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// splitmix64 step; the standard seed-mixing finalizer.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stable sub-seed derivation: fold each component into the state with
// splitmix64. Used to give every (dataset, strategy, run) its own stream so
// results do not depend on scheduling or on which strategies are enabled.
inline std::uint64_t derive_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> parts) {
  std::uint64_t s = splitmix64(seed);
  for (std::uint64_t p : parts) s = splitmix64(s ^ p);
  return s;
}

// FNV-1a, used to hash dataset/strategy names into seed components.
inline std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace alr
