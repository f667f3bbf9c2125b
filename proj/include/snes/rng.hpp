#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace snes {

// Seeded random stream with fixed, implementation-independent draw
// semantics: every distribution below consumes a defined number of
// engine words, so sequences are reproducible across platforms and
// across call sites (std::*_distribution are deliberately avoided).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution. One engine word.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; safe as a log() argument. One engine word.
  double uniform01_open() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform integer on [lo, hi] inclusive. One engine word.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }

  // N(0, sigma^2) via Box-Muller, no second-value caching so the
  // draw count is always exactly two engine words.
  double gaussian(double sigma) {
    const double u1 = uniform01_open();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return sigma * r * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::mt19937_64 engine_;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}
}  // namespace detail

// Derives a child seed from a root seed, a purpose name, and up to three
// indices. Streams for distinct (name, a, b, c) tuples are statistically
// independent, so changing the draw count of one purpose never perturbs
// another ("named-stream" fan-out).
inline std::uint64_t mix_seed(std::uint64_t root, std::string_view name,
                              std::uint64_t a = 0, std::uint64_t b = 0,
                              std::uint64_t c = 0) {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a over the name
  for (const char ch : name) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ull;
  }
  std::uint64_t s = detail::splitmix64(root ^ h);
  s = detail::splitmix64(s ^ a);
  s = detail::splitmix64(s ^ b);
  s = detail::splitmix64(s ^ c);
  return s;
}

inline RngStream derive_stream(std::uint64_t root, std::string_view name,
                               std::uint64_t a = 0, std::uint64_t b = 0,
                               std::uint64_t c = 0) {
  return RngStream(mix_seed(root, name, a, b, c));
}

}  // namespace snes
