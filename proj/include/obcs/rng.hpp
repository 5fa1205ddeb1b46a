#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

namespace obcs::rng {

// Splitmix64 avalanche step. All derived seeds in this project go through
// this mixer so that serial and parallel execution see the same streams.
// Constants: increment 0x9E3779B97F4A7C15, multipliers 0xBF58476D1CE4E5B9
// and 0x94D049BB133111EB (documented in the README).
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t combine(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b));
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// mt19937_64 core (bit-exact per the standard) with hand-rolled draws;
// std::uniform_int_distribution and friends are implementation-defined
// and would break the reproducibility contract across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Unbiased integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  // [0, 1) with 53 random bits.
  double unit_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit_double(); }

  bool coin() { return (engine_() & 1ULL) != 0; }

  // Standard normal via Marsaglia polar; the spare is cached.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * unit_double() - 1.0;
      v = 2.0 * unit_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  // Uniform d-subset of {1,...,m}, sorted ascending (Floyd's algorithm).
  std::vector<std::uint32_t> sample_subset(std::uint32_t m, std::uint32_t d) {
    std::vector<std::uint32_t> out;
    out.reserve(d);
    std::unordered_set<std::uint32_t> seen;
    seen.reserve(d * 2);
    for (std::uint32_t j = m - d + 1; j <= m; ++j) {
      const auto t = static_cast<std::uint32_t>(1 + below(j));
      if (seen.insert(t).second) {
        out.push_back(t);
      } else {
        seen.insert(j);
        out.push_back(j);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace obcs::rng
