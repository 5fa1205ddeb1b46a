#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "obcs/set_family.hpp"
#include "obcs/verify.hpp"

namespace obcs {

// Block code over alphabet {0,...,q-1} of length d together with a proven
// bound on the agreement |{i : c1(i) = c2(i)}| between distinct codewords.
struct Code {
  std::uint32_t q = 0;
  std::uint32_t d = 0;
  std::vector<std::vector<std::uint32_t>> codewords;
  std::uint32_t max_agreement = 0;

  std::size_t size() const { return codewords.size(); }

  void validate() const {
    if (q < 1 || d < 1) throw input_error("code: need q >= 1 and d >= 1");
    for (const auto& w : codewords) {
      if (w.size() != d) throw input_error("code: codeword length differs from d");
      for (auto s : w) {
        if (s >= q) throw input_error("code: symbol out of alphabet range");
      }
    }
    auto sorted = codewords;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw input_error("code: codewords must be pairwise distinct");
  }

  // Exhaustive pairwise agreement maximum; O(|C|^2 d), meant for checking
  // max_agreement on small codes.
  std::uint32_t check_max_agreement() const {
    std::uint32_t worst = 0;
    for (std::size_t a = 0; a < codewords.size(); ++a) {
      for (std::size_t b = a + 1; b < codewords.size(); ++b) {
        std::uint32_t agree = 0;
        for (std::uint32_t i = 0; i < d; ++i) {
          if (codewords[a][i] == codewords[b][i]) ++agree;
        }
        worst = std::max(worst, agree);
      }
    }
    return worst;
  }
};

inline bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t f = 2; f * f <= v; ++f) {
    if (v % f == 0) return false;
  }
  return true;
}

// All q^D evaluations of polynomials of degree < D over the prime field
// F_q at the points {0,...,d-1}. Two distinct polynomials of degree < D
// agree on at most D-1 points, so max_agreement = D-1. Codeword order is
// by coefficient vector (a_0,...,a_{D-1}) read as a base-q integer with
// a_0 least significant.
inline Code reed_solomon_code(std::uint32_t q, std::uint32_t deg_bound, std::uint32_t num_points) {
  if (!is_prime(q)) throw input_error("reed_solomon_code: q must be prime");
  if (deg_bound < 1 || deg_bound > num_points || num_points > q)
    throw input_error("reed_solomon_code: need 1 <= D <= d <= q");
  std::uint64_t count = 1;
  for (std::uint32_t t = 0; t < deg_bound; ++t) {
    count *= q;
    if (count > (1ULL << 31))
      throw input_error("reed_solomon_code: q^D too large to enumerate");
  }

  Code code;
  code.q = q;
  code.d = num_points;
  code.max_agreement = deg_bound - 1;
  code.codewords.reserve(count);
  std::vector<std::uint32_t> coeffs(deg_bound, 0);
  for (std::uint64_t index = 0; index < count; ++index) {
    std::uint64_t rest = index;
    for (std::uint32_t t = 0; t < deg_bound; ++t) {
      coeffs[t] = static_cast<std::uint32_t>(rest % q);
      rest /= q;
    }
    std::vector<std::uint32_t> word(num_points);
    for (std::uint32_t x = 0; x < num_points; ++x) {
      std::uint64_t value = 0;  // Horner, highest coefficient first
      for (std::uint32_t t = deg_bound; t-- > 0;) {
        value = (value * x + coeffs[t]) % q;
      }
      word[x] = static_cast<std::uint32_t>(value);
    }
    code.codewords.push_back(std::move(word));
  }
  return code;
}

struct Design {
  SetFamily family;
  RuffParams params;  // k = 1; vacuous when the code has a single word
};

// One set per codeword over the ground set [d] x [q], flattened by
// (i, sigma) -> (i-1)*q + sigma + 1. Sets of distinct codewords intersect
// in exactly the agreement positions, so pairwise overlaps are bounded by
// max_agreement and the family is a k=1 Robust-UFF at any alpha with
// alpha*d > max_agreement; we report the smallest such fraction with
// denominator d, namely (max_agreement+1)/d.
inline Design design_from_code(const Code& code) {
  code.validate();
  if (code.codewords.empty()) throw input_error("design_from_code: code is empty");
  if (code.codewords.size() > 0xFFFFFFFFULL)
    throw input_error("design_from_code: too many codewords");

  const std::uint32_t m = code.q * code.d;
  std::vector<std::vector<std::uint32_t>> sets;
  sets.reserve(code.codewords.size());
  for (const auto& word : code.codewords) {
    std::vector<std::uint32_t> set(code.d);
    for (std::uint32_t i = 1; i <= code.d; ++i) {
      set[i - 1] = (i - 1) * code.q + word[i - 1] + 1;
    }
    sets.push_back(std::move(set));
  }

  Design design;
  design.family = SetFamily(m, std::move(sets));
  design.params.n = static_cast<std::uint32_t>(code.codewords.size());
  design.params.m = m;
  design.params.d = code.d;
  design.params.k = 1;
  design.params.alpha = Fraction(code.max_agreement + 1, code.d);
  return design;
}

// A k=1 family with pairwise overlaps below alpha0*d is a k-family with
// overlaps below (alpha0*k)*d: a union of k sets claims at most k times
// the worst pairwise overlap.
inline RuffParams lift_k1_params(const RuffParams& params, std::uint32_t k_target) {
  if (params.k != 1) throw input_error("lift_k1_params: params.k must be 1");
  if (k_target < 1) throw input_error("lift_k1_params: k_target must be >= 1");
  const Fraction lifted = params.alpha.times(k_target);
  if (lifted > Fraction(1, 1))
    throw input_error("lift_k1_params: lifted alpha " + lifted.str() +
                      " exceeds 1 (vacuous robustness)");
  RuffParams out = params;
  out.k = k_target;
  out.alpha = lifted;
  return out;
}

}  // namespace obcs
