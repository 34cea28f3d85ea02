#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <utility>
#include <string_view>
#include <vector>

namespace trustrate::rng {

// Portable generators: std distributions differ across standard libraries,
// and corpora and builtin services must be byte-identical everywhere.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Order-sensitive hash of a key tuple.
inline std::uint64_t mix(std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = 0x6A09E667F3BCC909ULL;
  for (auto k : keys) h = splitmix64(h ^ splitmix64(k));
  return h;
}

/// Uniform in [0, 1) from the top 53 bits.
inline double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform(std::initializer_list<std::uint64_t> keys) {
  return to_unit(mix(keys));
}

/// Standard normal via Box-Muller over two keyed uniforms.
inline double normal(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  double u1 = to_unit(mix({a, b, c, 1}));
  double u2 = to_unit(mix({a, b, c, 2}));
  if (u1 < 0x1.0p-60) u1 = 0x1.0p-60;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

/// Sequential stream for shuffling.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return splitmix64(state_);
  }
  /// Unbiased integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % bound;
  }

 private:
  std::uint64_t state_;
};

template <typename T>
void shuffle(std::vector<T>& v, std::uint64_t seed) {
  Stream s(seed);
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(s.below(i));
    std::swap(v[i - 1], v[j]);
  }
}

/// FNV-1a over bytes, used for spec digests.
inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace trustrate::rng
