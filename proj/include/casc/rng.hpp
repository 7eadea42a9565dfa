#pragma once

// Deterministic RNG utilities. All randomness in the project flows through
// Rng so that streams are reproducible bit-for-bit given a seed, independent
// of platform quirks in <random> distribution implementations.

#include <cmath>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace casc {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Fold extra words into a base seed; used to derive independent per-unit
// streams (per fold, per repetition, per cascade) from one master seed.
inline std::uint64_t derive_seed(std::uint64_t base) {
  std::uint64_t s = base;
  return splitmix64(s);
}

template <typename... Rest>
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t word, Rest... rest) {
  std::uint64_t s = base ^ (word + 0x632be59bd9b4e019ULL + (base << 6) + (base >> 2));
  return derive_seed(splitmix64(s), rest...);
}

inline std::uint64_t hash_tag(std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// xoshiro256** core with fixed helper mappings.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform in [0,1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // unbiased integer in [0,n)
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = -n % n;  // rejection zone
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  double normal() {
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  double exponential(double mean) {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return -mean * std::log(u);
  }

  // Knuth's method, chunked so it stays exact for moderate lambda.
  std::uint64_t poisson(double lambda) {
    std::uint64_t total = 0;
    while (lambda > 20.0) {
      total += poisson_knuth(20.0);
      lambda -= 20.0;
    }
    return total + poisson_knuth(lambda);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t poisson_knuth(double lambda) {
    if (lambda <= 0.0) return 0;
    const double limit = std::exp(-lambda);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

  std::uint64_t s_[4];
};

}  // namespace casc
