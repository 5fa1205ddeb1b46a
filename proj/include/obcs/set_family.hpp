#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "obcs/fraction.hpp"

namespace obcs {

namespace detail {

// Word-packed indicator over {1,...,m}. Used as the fast path for
// intersection counting when m <= kBitsetCap; the merge-scan path over
// sorted index lists is the reference and handles arbitrary m.
constexpr std::uint32_t kBitsetCap = 4096;

struct Bits {
  std::vector<std::uint64_t> words;

  explicit Bits(std::uint32_t m = 0) : words((m + 63) / 64, 0) {}

  void set(std::uint32_t element) {  // 1-based
    words[(element - 1) >> 6] |= 1ULL << ((element - 1) & 63);
  }
  bool test(std::uint32_t element) const {
    return (words[(element - 1) >> 6] >> ((element - 1) & 63)) & 1ULL;
  }
  void clear() { std::fill(words.begin(), words.end(), 0); }

  static Bits from_set(const std::vector<std::uint32_t>& set, std::uint32_t m) {
    Bits b(m);
    for (auto e : set) b.set(e);
    return b;
  }
};

inline std::size_t and_popcount(const Bits& a, const Bits& b) {
  std::size_t count = 0;
  for (std::size_t w = 0; w < a.words.size(); ++w) {
    count += static_cast<std::size_t>(std::popcount(a.words[w] & b.words[w]));
  }
  return count;
}

// |a ∩ b| for sorted index lists.
inline std::size_t intersect_count(const std::vector<std::uint32_t>& a,
                                   const std::vector<std::uint32_t>& b) {
  std::size_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

}  // namespace detail

// An ordered family B_1,...,B_n of subsets of {1,...,m}. Each set is kept
// sorted ascending with 1-based elements. Sets may be empty and sizes may
// differ; operations that need uniform sizes check for themselves.
struct SetFamily {
  std::uint32_t n = 0;
  std::uint32_t m = 0;
  std::vector<std::vector<std::uint32_t>> sets;

  SetFamily() = default;
  SetFamily(std::uint32_t m_, std::vector<std::vector<std::uint32_t>> sets_)
      : n(static_cast<std::uint32_t>(sets_.size())), m(m_), sets(std::move(sets_)) {
    for (auto& s : sets) std::sort(s.begin(), s.end());
    validate();
  }

  void validate() const {
    if (sets.size() != n) throw input_error("family: sets list must have exactly n entries");
    for (std::uint32_t j = 0; j < n; ++j) {
      const auto& s = sets[j];
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] < 1 || s[i] > m)
          throw input_error("family: set " + std::to_string(j + 1) +
                            " has element outside {1,...,m}");
        if (i > 0 && s[i] == s[i - 1])
          throw input_error("family: set " + std::to_string(j + 1) + " has duplicate elements");
        if (i > 0 && s[i] < s[i - 1])
          throw input_error("family: set " + std::to_string(j + 1) + " is not sorted");
      }
    }
  }

  // All sets the same size d? Returns d if so.
  std::optional<std::uint32_t> uniform_size() const {
    if (n == 0) return std::nullopt;
    const auto d = static_cast<std::uint32_t>(sets[0].size());
    for (const auto& s : sets) {
      if (s.size() != d) return std::nullopt;
    }
    return d;
  }

  nlohmann::json to_json() const {
    return nlohmann::json{{"n", n}, {"m", m}, {"sets", sets}};
  }

  static SetFamily from_json(const nlohmann::json& j) {
    SetFamily f;
    f.n = j.at("n").get<std::uint32_t>();
    f.m = j.at("m").get<std::uint32_t>();
    f.sets = j.at("sets").get<std::vector<std::vector<std::uint32_t>>>();
    for (auto& s : f.sets) std::sort(s.begin(), s.end());
    f.validate();
    return f;
  }

  static SetFamily load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open family file: " + path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw input_error("bad JSON in " + path + ": " + e.what());
    }
    return from_json(j);
  }
};

struct FamilyStats {
  std::size_t min_size = 0;
  std::size_t max_size = 0;
  double mean_size = 0.0;
  std::size_t max_pairwise = 0;  // 0 when the family has a single set
  std::map<std::size_t, std::size_t> pairwise_histogram;
};

inline FamilyStats family_stats(const SetFamily& family) {
  if (family.n == 0) throw input_error("family_stats: empty family");
  FamilyStats stats;
  stats.min_size = stats.max_size = family.sets[0].size();
  std::size_t total = 0;
  for (const auto& s : family.sets) {
    stats.min_size = std::min(stats.min_size, s.size());
    stats.max_size = std::max(stats.max_size, s.size());
    total += s.size();
  }
  stats.mean_size = static_cast<double>(total) / family.n;
  std::vector<std::size_t> histogram(stats.max_size + 1, 0);
  if (family.m <= detail::kBitsetCap) {
    std::vector<detail::Bits> bits;
    bits.reserve(family.n);
    for (const auto& s : family.sets) bits.push_back(detail::Bits::from_set(s, family.m));
    for (std::uint32_t i = 0; i < family.n; ++i) {
      for (std::uint32_t j = i + 1; j < family.n; ++j) {
        ++histogram[detail::and_popcount(bits[i], bits[j])];
      }
    }
  } else {
    for (std::uint32_t i = 0; i < family.n; ++i) {
      for (std::uint32_t j = i + 1; j < family.n; ++j) {
        ++histogram[detail::intersect_count(family.sets[i], family.sets[j])];
      }
    }
  }
  for (std::size_t c = 0; c < histogram.size(); ++c) {
    if (histogram[c] > 0) {
      stats.pairwise_histogram[c] = histogram[c];
      stats.max_pairwise = c;
    }
  }
  return stats;
}

}  // namespace obcs
