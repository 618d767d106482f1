#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace qcdft {

/// One step of the SplitMix64 sequence (Steele, Lea, Flood 2014).
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Deterministic per-stream seed so that instance i of a seeded run gets an
/// independent generator regardless of platform or thread assignment.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t s = base;
  std::uint64_t z = splitmix64_next(s);
  s = z ^ (stream * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);
  return splitmix64_next(s);
}

/// Seeded 64-bit generator with bias-free bounded draws.
///
/// mt19937_64 has a standard-mandated output sequence, and bounded draws use
/// rejection instead of std::uniform_int_distribution (whose mapping is
/// implementation-defined), so sequences are identical across platforms.
class Prng {
 public:
  explicit Prng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform draw from [0, n). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Prng::below: empty range");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Fisher-Yates shuffle driven by below().
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    if (items.empty()) throw std::invalid_argument("Prng::pick: empty set");
    return items[below(items.size())];
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qcdft
