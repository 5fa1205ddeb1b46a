#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "obcs/rng.hpp"
#include "obcs/sensing.hpp"
#include "obcs/set_family.hpp"
#include "obcs/verify.hpp"

namespace obcs {

// Self-describing record for a bound evaluation; value is exact (integer
// or rational rendered as a string) wherever the formula is exact.
struct BoundReport {
  std::string name;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::string value;
  std::string formula_ref;

  nlohmann::json to_json() const {
    nlohmann::json in = nlohmann::json::object();
    for (const auto& [key, val] : inputs) in[key] = val;
    return nlohmann::json{
        {"name", name}, {"inputs", in}, {"value", value}, {"formula_ref", formula_ref}};
  }
};

inline mpz_class binom(std::uint64_t n, std::uint64_t k) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

// Largest possible size of an (n,m,k)-union-free family:
// n <= k + C(m,t) with t = ceil((m-k)/C(k+1,2)). Requires k >= 2.
// Any verified k-UFF whose n exceeds this value indicates a bug.
inline mpz_class furedi_max_n(std::uint64_t m, std::uint64_t k) {
  if (k < 2) throw input_error("furedi_max_n: need k >= 2");
  if (m < k) throw input_error("furedi_max_n: need m >= k");
  const std::uint64_t pairs = k * (k + 1) / 2;  // C(k+1,2)
  const std::uint64_t t = (m - k + pairs - 1) / pairs;
  return mpz_class(static_cast<unsigned long>(k)) + binom(m, t);
}

// Smallest m whose union-free capacity reaches n; a necessary row count
// for any support-recovery matrix at sparsity k+1.
inline std::uint64_t min_m_support(std::uint64_t n, std::uint64_t k) {
  if (k < 2) throw input_error("min_m_support: need k >= 2");
  if (n <= k) throw input_error("min_m_support: need n > k");
  const mpz_class target(std::to_string(n));
  for (std::uint64_t m = k;; ++m) {
    if (furedi_max_n(m, k) >= target) return m;
  }
}

// Column supports of A: B_j = { i : A_ij != 0 }. If A recovers supports
// of k-sparse signals, this family must be union-free at arity k-1.
inline SetFamily extract_family(const SensingMatrix& a) {
  std::vector<std::vector<std::uint32_t>> sets(a.n);
  for (std::uint32_t j = 1; j <= a.n; ++j) {
    for (std::uint32_t i = 1; i <= a.m; ++i) {
      if (a.at(i, j) != 0.0) sets[j - 1].push_back(i);
    }
  }
  return SetFamily(a.m, std::move(sets));
}

namespace detail {

inline void check_witness_covered(const SetFamily& family, const ViolationWitness& w) {
  if (w.j0 < 1 || w.j0 > family.n) throw input_error("witness: j0 out of range");
  Bits union_bits(family.m);
  for (auto j : w.others) {
    if (j < 1 || j > family.n || j == w.j0) throw input_error("witness: bad index among others");
    for (auto e : family.sets[j - 1]) union_bits.set(e);
  }
  for (auto e : family.sets[w.j0 - 1]) {
    if (!union_bits.test(e))
      throw input_error("witness: B_j0 is not covered by the union of the others");
  }
}

}  // namespace detail

struct ConfusablePair {
  SparseVector x1;
  SparseVector x2;
  SignPattern pattern;  // the shared sign pattern
};

// For a nonnegative matrix whose column-support family has a covered
// column (witness: B_j0 ⊆ ∪ B_jl), the indicator vectors of the witness
// sets are confusable: x1 = 1({j1..jl}), x2 = 1({j0, j1..jl}). Adding j0
// only increases row sums that were already positive, so the sign pattern
// is unchanged while the supports differ.
inline ConfusablePair confusable_pair_nonneg(const SensingMatrix& a,
                                             const ViolationWitness& witness) {
  a.validate();
  if (!a.nonnegative()) throw input_error("confusable_pair_nonneg: matrix must be nonnegative");
  const SetFamily family = extract_family(a);
  detail::check_witness_covered(family, witness);

  std::vector<std::pair<std::uint32_t, double>> e1;
  for (auto j : witness.others) e1.emplace_back(j, 1.0);
  auto e2 = e1;
  e2.emplace_back(witness.j0, 1.0);
  ConfusablePair pair;
  pair.x1 = SparseVector(a.n, std::move(e1));
  pair.x2 = SparseVector(a.n, std::move(e2));
  const SignPattern b1 = measure(a, pair.x1);
  const SignPattern b2 = measure(a, pair.x2);
  if (b1.values != b2.values)
    throw std::runtime_error("confusable_pair_nonneg: sign patterns differ (bug upstream)");
  pair.pattern = b1;
  return pair;
}

// Real-entry variant: x1 is random on the witness's others, scaled until
// every measurement indexed by ∪ B_jl has magnitude strictly above
// epsilon; then x2 = x1 + epsilon*e_j0 moves every row sum by at most
// epsilon (entries of A are in [-1,1]) and only on rows inside the union,
// so no sign flips. The draw is retried with a doubled scale when some
// row lands within epsilon of zero (64 retries before reporting the
// matrix degenerate).
inline ConfusablePair confusable_pair_real(const SensingMatrix& a,
                                           const ViolationWitness& witness, double epsilon,
                                           std::uint64_t seed) {
  a.validate();
  if (!(epsilon > 0.0)) throw input_error("confusable_pair_real: epsilon must be positive");
  const SetFamily family = extract_family(a);
  detail::check_witness_covered(family, witness);

  ConfusablePair pair;
  if (witness.others.empty()) {
    // Covered by an empty union means column j0 is zero: the zero vector
    // and epsilon*e_j0 measure identically (all zeros).
    pair.x1 = SparseVector{a.n, {}};
    pair.x2 = SparseVector(a.n, {{witness.j0, epsilon}});
  } else {
    std::vector<std::uint32_t> union_rows;
    {
      detail::Bits in_union(a.m);
      for (auto j : witness.others) {
        for (auto e : family.sets[j - 1]) in_union.set(e);
      }
      for (std::uint32_t i = 1; i <= a.m; ++i) {
        if (in_union.test(i)) union_rows.push_back(i);
      }
    }
    rng::Rng gen(seed);
    bool found = false;
    double scale = std::max(1.0, 2.0 * epsilon);
    for (int retry = 0; retry < 64 && !found; ++retry, scale *= 2.0) {
      std::vector<std::pair<std::uint32_t, double>> entries;
      for (auto j : witness.others) {
        const double mag = gen.uniform(0.5, 1.5);
        entries.emplace_back(j, scale * (gen.coin() ? mag : -mag));
      }
      SparseVector candidate(a.n, std::move(entries));
      bool ok = true;
      for (auto i : union_rows) {
        double sum = 0.0;
        for (const auto& [idx, val] : candidate.entries) sum += a.at(i, idx) * val;
        if (!(std::abs(sum) > epsilon)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        pair.x1 = std::move(candidate);
        found = true;
      }
    }
    if (!found)
      throw std::runtime_error(
          "confusable_pair_real: scaling failed after 64 retries (rows of A nearly "
          "degenerate on the witness support)");
    auto e2 = pair.x1.entries;
    e2.emplace_back(witness.j0, epsilon);
    pair.x2 = SparseVector(a.n, std::move(e2));
  }

  const SignPattern b1 = measure(a, pair.x1);
  const SignPattern b2 = measure(a, pair.x2);
  if (b1.values != b2.values)
    throw std::runtime_error("confusable_pair_real: sign patterns differ (bug upstream)");
  pair.pattern = b1;
  return pair;
}

// m hyperplanes cut R^k into at most 2^k * C(m,k) regions (m >= 2k).
inline mpz_class regions_upper(std::uint64_t m, std::uint64_t k) {
  if (k < 1) throw input_error("regions_upper: need k >= 1");
  if (m < 2 * k) throw input_error("regions_upper: need m >= 2k");
  mpz_class out = binom(m, k);
  mpz_mul_2exp(out.get_mpz_t(), out.get_mpz_t(), k);
  return out;
}

// Size of an epsilon-separated subset of S^{k-1}: at least (c/epsilon)^k.
inline double cover_lower(std::uint64_t k, double epsilon, double c) {
  if (k < 1) throw input_error("cover_lower: need k >= 1");
  if (!(epsilon > 0.0) || !(c > 0.0))
    throw input_error("cover_lower: need epsilon > 0 and c > 0");
  return std::pow(c / epsilon, static_cast<double>(k));
}

struct GvBound {
  mpq_class count;          // C(n,k) / C(n, floor(eps*k)), floor clamped to >= 1
  std::uint64_t implied_m;  // smallest m with 2^m >= count
};

// Packing count of unit-norm k-sparse sign-free vectors with pairwise
// support intersection at most (1-eps)k: M = C(n,k)/C(n,eps*k). Any scheme
// distinguishing them needs 2^m >= M, i.e. m >= log2(M). eps*k enters a
// binomial as an integer; floor (clamped to 1) weakens but never
// overstates the bound.
inline GvBound gv_count(std::uint64_t n, std::uint64_t k, double epsilon) {
  if (k < 1 || n < k) throw input_error("gv_count: need 1 <= k <= n");
  if (!(epsilon > 0.0) || epsilon > 1.0) throw input_error("gv_count: need 0 < epsilon <= 1");
  const auto ek = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::floor(epsilon * static_cast<double>(k))));
  GvBound out;
  out.count = mpq_class(binom(n, k)) / mpq_class(binom(n, ek));
  out.count.canonicalize();
  out.implied_m = 0;
  mpz_class power = 1;  // smallest m with 2^m * den >= num
  while (power * out.count.get_den() < out.count.get_num()) {
    power *= 2;
    ++out.implied_m;
  }
  return out;
}

// Smallest m >= 2k with 2^k * C(m,k) >= (c/epsilon)^k, by monotone search:
// the hyperplane-region count must reach the packing size of the cover.
inline std::uint64_t min_m_approx(std::uint64_t k, double epsilon, double c) {
  if (k < 1) throw input_error("min_m_approx: need k >= 1");
  if (!(epsilon > 0.0) || !(c > 0.0))
    throw input_error("min_m_approx: need epsilon > 0 and c > 0");
  const double target = cover_lower(k, epsilon, c);
  for (std::uint64_t m = 2 * k;; ++m) {
    if (regions_upper(m, k).get_d() >= target) return m;
  }
}

// --- report builders (the CLI emits these as JSON) ---

inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline BoundReport furedi_report(std::uint64_t m, std::uint64_t k) {
  return BoundReport{"furedi-max-n",
                     {{"m", std::to_string(m)}, {"k", std::to_string(k)}},
                     furedi_max_n(m, k).get_str(),
                     "n <= k + C(m,t), t = ceil((m-k)/C(k+1,2))"};
}

inline BoundReport min_m_support_report(std::uint64_t n, std::uint64_t k) {
  return BoundReport{"min-m-support",
                     {{"n", std::to_string(n)}, {"k", std::to_string(k)}},
                     std::to_string(min_m_support(n, k)),
                     "least m with k + C(m,t) >= n, t = ceil((m-k)/C(k+1,2))"};
}

inline BoundReport regions_report(std::uint64_t m, std::uint64_t k) {
  return BoundReport{"hyperplane-regions-upper",
                     {{"m", std::to_string(m)}, {"k", std::to_string(k)}},
                     regions_upper(m, k).get_str(),
                     "2^k * C(m,k)"};
}

inline BoundReport cover_report(std::uint64_t k, double epsilon, double c) {
  return BoundReport{"sphere-cover-lower",
                     {{"k", std::to_string(k)},
                      {"epsilon", format_real(epsilon)},
                      {"c", format_real(c)}},
                     format_real(cover_lower(k, epsilon, c)),
                     "(c/epsilon)^k"};
}

inline BoundReport gv_report(std::uint64_t n, std::uint64_t k, double epsilon) {
  const auto gv = gv_count(n, k, epsilon);
  BoundReport report{"gv-packing-count",
                     {{"n", std::to_string(n)},
                      {"k", std::to_string(k)},
                      {"epsilon", format_real(epsilon)}},
                     gv.count.get_str(),
                     "M = C(n,k)/C(n,floor(eps*k)); measurements m >= ceil(log2 M)"};
  report.inputs.emplace_back("implied_min_m", std::to_string(gv.implied_m));
  return report;
}

inline BoundReport min_m_approx_report(std::uint64_t k, double epsilon, double c) {
  return BoundReport{"min-m-approx",
                     {{"k", std::to_string(k)},
                      {"epsilon", format_real(epsilon)},
                      {"c", format_real(c)}},
                     std::to_string(min_m_approx(k, epsilon, c)),
                     "least m >= 2k with 2^k * C(m,k) >= (c/epsilon)^k"};
}

}  // namespace obcs
