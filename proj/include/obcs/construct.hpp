#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "obcs/rng.hpp"
#include "obcs/set_family.hpp"
#include "obcs/verify.hpp"

namespace obcs {

// Las Vegas sampler configuration. The target sizes follow
// m = ceil(c_m * k^2 * ln(n) / alpha^2) and d = ceil(c_d * k * ln(n) / alpha);
// c_m and c_d are exposed because only the asymptotic orders are forced.
// m_override / d_override (when nonzero) pin the sizes directly, which the
// experiment harness uses to sweep m explicitly.
struct RandomRuffConfig {
  std::uint32_t n = 0;
  std::uint32_t k = 0;
  Fraction alpha{1, 2};
  double c_m = 100.0;
  double c_d = 10.0;
  std::uint32_t max_retries = 10;
  std::uint64_t seed = 0;
  double brute_budget = 1e8;  // full verification when d * n^(k+1) fits this
  std::uint32_t m_override = 0;
  std::uint32_t d_override = 0;

  std::uint32_t derived_m() const {
    if (m_override) return m_override;
    const double a = alpha.value();
    const double v = c_m * k * k * std::log(static_cast<double>(n)) / (a * a);
    return static_cast<std::uint32_t>(std::max(1.0, std::ceil(v)));
  }
  std::uint32_t derived_d() const {
    if (d_override) return d_override;
    const double a = alpha.value();
    const double v = c_d * k * std::log(static_cast<double>(n)) / a;
    return static_cast<std::uint32_t>(std::max(1.0, std::ceil(v)));
  }

  void validate() const {
    if (n < 2 || k < 1 || k > n - 1) throw input_error("config: need 1 <= k <= n-1");
    if (alpha.num() < 1 || alpha > Fraction(1, 1))
      throw input_error("config: need 0 < alpha <= 1");
    if (c_m <= 0 || c_d <= 0) throw input_error("config: c_m and c_d must be positive");
    if (max_retries < 1) throw input_error("config: max_retries >= 1");
  }
};

struct SampleMeta {
  std::uint32_t attempts = 0;
  std::string verification;  // "brute-force" or "pairwise-certificate"
};

struct SampleResult {
  SetFamily family;
  RuffParams params;
  SampleMeta meta;
};

// Draw families of uniformly random d-subsets until one verifies. Each set
// is a fixed-size d-subset of [m] (so |B_j| = d holds by construction),
// independent across j. Attempt i uses seed ^ i, so attempts are
// reproducible individually and could run in parallel with first-accepted
// (lowest attempt index) winning.
inline SampleResult sample_random_ruff(const RandomRuffConfig& config) {
  config.validate();
  const std::uint32_t m = config.derived_m();
  const std::uint32_t d = config.derived_d();
  if (d > m) throw input_error("sample_random_ruff: derived d exceeds derived m");

  RuffParams params;
  params.n = config.n;
  params.m = m;
  params.d = d;
  params.k = config.k;
  params.alpha = config.alpha;

  const double brute_cost =
      static_cast<double>(d) * std::pow(static_cast<double>(config.n), config.k + 1);
  const bool brute = brute_cost <= config.brute_budget;

  std::size_t best_overlap = SIZE_MAX;
  for (std::uint32_t attempt = 0; attempt < config.max_retries; ++attempt) {
    rng::Rng gen(config.seed ^ attempt);
    std::vector<std::vector<std::uint32_t>> sets;
    sets.reserve(config.n);
    for (std::uint32_t j = 0; j < config.n; ++j) sets.push_back(gen.sample_subset(m, d));
    SetFamily family(m, std::move(sets));

    if (brute) {
      auto result = verify_ruff(family, params);
      if (result.pass) {
        return SampleResult{std::move(family), params, {attempt + 1, "brute-force"}};
      }
      best_overlap = std::min(best_overlap, result.witness->overlap);
    } else {
      auto cert = pairwise_certificate(family, params);
      if (cert.certified) {
        return SampleResult{std::move(family), params, {attempt + 1, "pairwise-certificate"}};
      }
      best_overlap = std::min(best_overlap, cert.worst_overlap);
    }
  }
  throw std::runtime_error(
      "sample_random_ruff: retries exhausted after " + std::to_string(config.max_retries) +
      " attempts (n=" + std::to_string(config.n) + ", m=" + std::to_string(m) +
      ", d=" + std::to_string(d) + ", k=" + std::to_string(config.k) +
      ", alpha=" + config.alpha.str() + "); best offending overlap seen " +
      std::to_string(best_overlap) + " via " +
      (brute ? "brute-force witnesses" : "pairwise overlaps"));
}

}  // namespace obcs
