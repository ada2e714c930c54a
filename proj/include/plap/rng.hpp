#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace plap {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Per-component stream seed: splitmix64 over (global seed, FNV-1a of the component tag,
/// counter). Streams for distinct (tag, counter) pairs never share state, so randomized
/// work can be split across workers without changing any output.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view component, std::uint64_t counter = 0) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : component) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(seed ^ h) + counter);
}

/// Seeded generator with library-independent draws (no std:: distributions, whose
/// output differs between standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::string_view component, std::uint64_t counter = 0)
      : engine_(derive_seed(seed, component, counter)) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  /// Uniform integer in [0, n).
  int below(int n) { return static_cast<int>(uniform() * n); }
  bool bernoulli(double prob) { return uniform() < prob; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace plap
