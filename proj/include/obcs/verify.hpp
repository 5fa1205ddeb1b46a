#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "obcs/fraction.hpp"
#include "obcs/set_family.hpp"

namespace obcs {

struct RuffParams {
  std::uint32_t n = 0;
  std::uint32_t m = 0;
  std::uint32_t d = 0;
  std::uint32_t k = 0;
  Fraction alpha{1, 1};

  void validate() const {
    if (d < 1 || d > m) throw input_error("params: need 1 <= d <= m");
    if (n < 2 || k < 1 || k > n - 1) throw input_error("params: need 1 <= k <= n-1");
    if (alpha.num() < 1 || alpha > Fraction(1, 1))
      throw input_error("params: need 0 < alpha <= 1");
  }
};

// A tuple (j0, {j1,...,jk}) at which the defining inequality fails, plus
// the offending overlap |B_j0 ∩ (B_j1 ∪ ... ∪ B_jk)|. Indices 1-based.
struct ViolationWitness {
  std::uint32_t j0 = 0;
  std::vector<std::uint32_t> others;  // sorted ascending
  std::size_t overlap = 0;
};

struct VerifyResult {
  bool pass = true;
  std::optional<ViolationWitness> witness;
};

struct CertificateResult {
  bool certified = false;
  std::uint32_t worst_i = 0;  // 1-based pair achieving the largest overlap
  std::uint32_t worst_j = 0;
  std::size_t worst_overlap = 0;
};

// Test knob: force one intersection strategy. Auto picks the bitset path
// for m <= detail::kBitsetCap and merge-scan otherwise; both must agree.
enum class ScanPath { Auto, MergeScan, Bitset };

namespace detail {

// DFS over k-subsets of [n]\{j0} in lexicographic order, accumulating the
// portion of B_j0 covered by the union so far and aborting a branch as
// soon as the covered count reaches the violation threshold. Because the
// covered count only grows along a branch, the first threshold crossing in
// DFS order, completed with the smallest indices above the prefix, is the
// lexicographically least witness overall.
class CoverSearch {
 public:
  CoverSearch(const SetFamily& family, bool use_bits)
      : family_(family), use_bits_(use_bits) {
    if (use_bits_) {
      bits_.reserve(family.n);
      for (const auto& s : family.sets) bits_.push_back(Bits::from_set(s, family.m));
    }
  }

  // Returns a witness for the least (j0, others) with
  // |B_j0 ∩ (∪ others)| >= threshold(j0), if any.
  template <typename ThresholdFn>
  std::optional<ViolationWitness> find_violation(std::uint32_t k, ThresholdFn threshold) {
    for (std::uint32_t j0 = 1; j0 <= family_.n; ++j0) {
      const std::size_t need = threshold(j0);
      if (auto w = search_j0(j0, k, need)) return w;
    }
    return std::nullopt;
  }

  std::size_t overlap_with_union(std::uint32_t j0, const std::vector<std::uint32_t>& others) const {
    const auto& base = family_.sets[j0 - 1];
    std::vector<char> covered(base.size(), 0);
    std::size_t count = 0;
    for (auto j : others) count += mark_covered(j0, j, covered);
    return count;
  }

 private:
  // Marks elements of B_j0 ∩ B_j not yet covered; returns how many were new.
  std::size_t mark_covered(std::uint32_t j0, std::uint32_t j, std::vector<char>& covered) const {
    const auto& base = family_.sets[j0 - 1];
    std::size_t added = 0;
    if (use_bits_) {
      const Bits& other = bits_[j - 1];
      for (std::size_t p = 0; p < base.size(); ++p) {
        if (!covered[p] && other.test(base[p])) {
          covered[p] = 1;
          ++added;
        }
      }
    } else {
      const auto& other = family_.sets[j - 1];
      auto ia = base.begin();
      auto ib = other.begin();
      while (ia != base.end() && ib != other.end()) {
        if (*ia < *ib) {
          ++ia;
        } else if (*ib < *ia) {
          ++ib;
        } else {
          const auto p = static_cast<std::size_t>(ia - base.begin());
          if (!covered[p]) {
            covered[p] = 1;
            ++added;
          }
          ++ia;
          ++ib;
        }
      }
    }
    return added;
  }

  std::optional<ViolationWitness> search_j0(std::uint32_t j0, std::uint32_t k, std::size_t need) {
    prefix_.clear();
    covered_.assign(family_.sets[j0 - 1].size(), 0);
    return descend(j0, k, need, 1, 0);
  }

  // covered_ holds the depth-stamped cover state: entry value v > 0 means
  // the element was first covered at depth v; unwinding resets stamps > depth.
  std::optional<ViolationWitness> descend(std::uint32_t j0, std::uint32_t k, std::size_t need,
                                          std::uint32_t start, std::size_t count) {
    if (count >= need) return complete_witness(j0, k, count);
    const auto depth = static_cast<std::uint32_t>(prefix_.size());
    if (depth == k) return std::nullopt;
    const std::uint32_t slots_after = k - depth - 1;
    for (std::uint32_t j = start; j <= family_.n; ++j) {
      if (j == j0) continue;
      std::uint32_t avail = family_.n - j;
      if (j0 > j) --avail;  // j0 cannot fill a remaining slot
      if (avail < slots_after) break;
      const std::size_t added = stamp(j0, j, depth + 1);
      prefix_.push_back(j);
      if (auto w = descend(j0, k, need, j + 1, count + added)) return w;
      prefix_.pop_back();
      unstamp(depth + 1);
    }
    return std::nullopt;
  }

  std::size_t stamp(std::uint32_t j0, std::uint32_t j, std::uint32_t depth) {
    const auto& base = family_.sets[j0 - 1];
    std::size_t added = 0;
    if (use_bits_) {
      const Bits& other = bits_[j - 1];
      for (std::size_t p = 0; p < base.size(); ++p) {
        if (covered_[p] == 0 && other.test(base[p])) {
          covered_[p] = depth;
          ++added;
        }
      }
    } else {
      const auto& other = family_.sets[j - 1];
      auto ia = base.begin();
      auto ib = other.begin();
      while (ia != base.end() && ib != other.end()) {
        if (*ia < *ib) {
          ++ia;
        } else if (*ib < *ia) {
          ++ib;
        } else {
          const auto p = static_cast<std::size_t>(ia - base.begin());
          if (covered_[p] == 0) {
            covered_[p] = depth;
            ++added;
          }
          ++ia;
          ++ib;
        }
      }
    }
    return added;
  }

  void unstamp(std::uint32_t depth) {
    for (auto& v : covered_) {
      if (v == depth) v = 0;
    }
  }

  // Pad the current prefix with the smallest unused indices above it, then
  // recompute the exact overlap for the reported tuple.
  std::optional<ViolationWitness> complete_witness(std::uint32_t j0, std::uint32_t k,
                                                   std::size_t count) {
    ViolationWitness w;
    w.j0 = j0;
    w.others = prefix_;
    std::uint32_t next = prefix_.empty() ? 1 : prefix_.back() + 1;
    while (w.others.size() < k) {
      if (next == j0) {
        ++next;
        continue;
      }
      w.others.push_back(next++);
    }
    w.overlap = w.others == prefix_ ? count : overlap_with_union(j0, w.others);
    return w;
  }

  const SetFamily& family_;
  bool use_bits_;
  std::vector<Bits> bits_;
  std::vector<std::uint32_t> prefix_;
  std::vector<std::uint32_t> covered_;
};

inline bool pick_bits(const SetFamily& family, ScanPath path) {
  switch (path) {
    case ScanPath::MergeScan:
      return false;
    case ScanPath::Bitset:
      if (family.m > kBitsetCap) throw input_error("bitset path requires m <= 4096");
      return true;
    default:
      return family.m <= kBitsetCap;
  }
}

}  // namespace detail

// Robust union-free verification: pass iff for all distinct j0 and all
// k-subsets {j1,...,jk} of the remaining indices,
// |B_j0 ∩ (B_j1 ∪ ... ∪ B_jk)| < alpha*|B_j0|, with |B_j| = d throughout.
// On fail, the returned witness is lexicographically least (smallest j0,
// then smallest sorted others).
inline VerifyResult verify_ruff(const SetFamily& family, const RuffParams& params,
                                ScanPath path = ScanPath::Auto) {
  params.validate();
  if (family.n != params.n || family.m != params.m)
    throw input_error("verify_ruff: family dimensions do not match params");
  for (std::uint32_t j = 0; j < family.n; ++j) {
    if (family.sets[j].size() != params.d)
      throw input_error("verify_ruff: set " + std::to_string(j + 1) + " has size " +
                        std::to_string(family.sets[j].size()) + ", expected d = " +
                        std::to_string(params.d));
  }
  detail::CoverSearch search(family, detail::pick_bits(family, path));
  const auto threshold = static_cast<std::size_t>(params.alpha.ceil_scaled(params.d));
  auto witness = search.find_violation(params.k, [&](std::uint32_t) { return threshold; });
  return VerifyResult{!witness.has_value(), std::move(witness)};
}

// Plain union-free verification at arity k: pass iff no B_j0 is contained
// in the union of k other sets. Set sizes may differ. k = 0 is allowed
// (only empty sets are covered by an empty union).
inline VerifyResult verify_uff(const SetFamily& family, std::uint32_t k,
                               ScanPath path = ScanPath::Auto) {
  if (family.n == 0) throw input_error("verify_uff: empty family");
  if (k > family.n - 1) throw input_error("verify_uff: need k <= n-1");
  detail::CoverSearch search(family, detail::pick_bits(family, path));
  auto witness = search.find_violation(
      k, [&](std::uint32_t j0) { return family.sets[j0 - 1].size(); });
  return VerifyResult{!witness.has_value(), std::move(witness)};
}

// Sufficient pairwise condition: if max_{i != j} |B_i ∩ B_j| < alpha*d/k
// then the family is an (n,m,d,k,alpha)-Robust-UFF (each union term can
// claim fewer than alpha*d/k elements of B_j0). O(n^2 d) versus the
// O(n^{k+1}) full check; inconclusive is not a refutation.
inline CertificateResult pairwise_certificate(const SetFamily& family, const RuffParams& params) {
  params.validate();
  if (family.n != params.n || family.m != params.m)
    throw input_error("pairwise_certificate: family dimensions do not match params");
  if (family.uniform_size() != params.d)
    throw input_error("pairwise_certificate: family is not uniform with size d");
  CertificateResult result;
  const bool use_bits = family.m <= detail::kBitsetCap;
  std::vector<detail::Bits> bits;
  if (use_bits) {
    bits.reserve(family.n);
    for (const auto& s : family.sets) bits.push_back(detail::Bits::from_set(s, family.m));
  }
  bool have_pair = false;
  for (std::uint32_t i = 0; i < family.n; ++i) {
    for (std::uint32_t j = i + 1; j < family.n; ++j) {
      const std::size_t c = use_bits
                                ? detail::and_popcount(bits[i], bits[j])
                                : detail::intersect_count(family.sets[i], family.sets[j]);
      if (!have_pair || c > result.worst_overlap) {
        have_pair = true;
        result.worst_overlap = c;
        result.worst_i = i + 1;
        result.worst_j = j + 1;
      }
    }
  }
  result.certified = params.alpha.strictly_above(
      static_cast<std::int64_t>(result.worst_overlap), params.d, params.k);
  return result;
}

// Re-check a witness from scratch against the Robust-UFF inequality.
inline bool witness_violates_ruff(const SetFamily& family, const RuffParams& params,
                                  const ViolationWitness& w) {
  detail::CoverSearch search(family, detail::pick_bits(family, ScanPath::Auto));
  const std::size_t overlap = search.overlap_with_union(w.j0, w.others);
  return overlap >= static_cast<std::size_t>(params.alpha.ceil_scaled(params.d));
}

inline bool witness_violates_uff(const SetFamily& family, const ViolationWitness& w) {
  detail::CoverSearch search(family, detail::pick_bits(family, ScanPath::Auto));
  const std::size_t overlap = search.overlap_with_union(w.j0, w.others);
  return overlap >= family.sets[w.j0 - 1].size();
}

}  // namespace obcs
