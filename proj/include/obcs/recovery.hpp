#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "obcs/rng.hpp"
#include "obcs/sensing.hpp"
#include "obcs/set_family.hpp"

namespace obcs {

struct ApproxConfig {
  double epsilon = 0.1;  // target angular error, in (0, 2)
  std::uint32_t m2 = 1u << 12;
  enum class Estimator { Linear, NetDecode } estimator = Estimator::Linear;
  double net_resolution = 0.01;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(epsilon > 0.0 && epsilon < 2.0)) throw input_error("config: epsilon in (0,2)");
    if (m2 < 1) throw input_error("config: m2 >= 1");
    if (estimator == Estimator::NetDecode &&
        !(net_resolution > 0.0 && net_resolution <= epsilon))
      throw input_error("config: net_resolution in (0, epsilon]");
  }
};

struct SupportRecovery {
  std::vector<std::uint32_t> support;  // sorted ascending
  std::vector<std::size_t> counts;     // |B_j ∩ supp(b)| for each j
  std::vector<std::uint32_t> ties;     // j with count exactly d/2 (diagnostic)
};

// Majority rule: include j exactly when |B_j ∩ supp(b)| > d/2. For a
// verified (n,m,d,k,1/2)-Robust-UFF and b measured from a k-sparse signal,
// this returns the exact support: sets off the support keep more than half
// of their rows outside the union (those measure zero), sets on it keep
// more than half exclusive to themselves (those measure sign(x_j) != 0).
// Exact d/2 ties cannot occur for valid inputs and are surfaced as
// diagnostics. O(n d) membership probes.
inline SupportRecovery recover_support(const SetFamily& family, const SignPattern& b) {
  if (b.size() != family.m) throw input_error("recover_support: pattern length != m");
  const auto d = family.uniform_size();
  if (!d) throw input_error("recover_support: family is not uniform");
  SupportRecovery out;
  out.counts.reserve(family.n);
  for (std::uint32_t j = 1; j <= family.n; ++j) {
    std::size_t count = 0;
    for (auto i : family.sets[j - 1]) {
      if (b.values[i - 1] != 0) ++count;
    }
    out.counts.push_back(count);
    if (2 * count > *d) out.support.push_back(j);
    if (2 * count == *d) out.ties.push_back(j);
  }
  return out;
}

// Recorded second-stage measurements: m2 standard Gaussian rows over all n
// coordinates (drawn up front, independent of stage 1) and the signs of
// their inner products with the signal.
struct GaussianContext {
  std::uint32_t m2 = 0;
  std::uint32_t n = 0;
  std::vector<double> rows;  // row-major m2 x n
  std::vector<std::int8_t> signs;
};

inline std::vector<double> draw_gaussian_rows(std::uint32_t rows, std::uint32_t cols,
                                              std::uint64_t seed) {
  rng::Rng gen(seed);
  std::vector<double> out(static_cast<std::size_t>(rows) * cols);
  for (auto& v : out) v = gen.gaussian();
  return out;
}

inline GaussianContext gaussian_context(std::uint32_t m2, std::uint32_t n, std::uint64_t seed,
                                        const SparseVector& x) {
  if (x.dim != n) throw input_error("gaussian_context: signal dimension mismatch");
  GaussianContext ctx;
  ctx.m2 = m2;
  ctx.n = n;
  ctx.rows = draw_gaussian_rows(m2, n, seed);
  ctx.signs.resize(m2);
  for (std::uint32_t i = 0; i < m2; ++i) {
    double sum = 0.0;
    for (const auto& [idx, val] : x.entries) {
      sum += ctx.rows[static_cast<std::size_t>(i) * n + (idx - 1)] * val;
    }
    ctx.signs[i] = static_cast<std::int8_t>(sign_of(sum));
  }
  return ctx;
}

namespace detail {

// Grid on S^{s-1} with spacing <= resolution, s <= 3. s = 1 is {-1, +1};
// s = 2 a uniform circle; s = 3 latitude rings with longitude steps scaled
// by the ring radius.
inline std::vector<std::vector<double>> sphere_grid(std::uint32_t s, double resolution) {
  constexpr double kTau = 2.0 * std::numbers::pi;
  std::vector<std::vector<double>> points;
  if (s == 1) {
    points.push_back({1.0});
    points.push_back({-1.0});
  } else if (s == 2) {
    const auto steps = static_cast<std::size_t>(std::ceil(kTau / resolution));
    for (std::size_t i = 0; i < steps; ++i) {
      const double theta = kTau * static_cast<double>(i) / static_cast<double>(steps);
      points.push_back({std::cos(theta), std::sin(theta)});
    }
  } else {
    const auto bands = static_cast<std::size_t>(std::ceil(std::numbers::pi / resolution)) + 1;
    for (std::size_t a = 0; a < bands; ++a) {
      const double phi = std::numbers::pi * static_cast<double>(a) / static_cast<double>(bands - 1);
      const double ring = std::sin(phi);
      const auto steps = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::ceil(kTau * ring / resolution)));
      for (std::size_t b = 0; b < steps; ++b) {
        const double psi = kTau * static_cast<double>(b) / static_cast<double>(steps);
        points.push_back({ring * std::cos(psi), ring * std::sin(psi), std::cos(phi)});
      }
    }
  }
  if (points.size() > 4'000'000)
    throw input_error("net-decode: grid too fine");  // unreachable for s <= 3, res >= 1e-6
  return points;
}

inline double dot(const double* row, const std::vector<double>& v) {
  double sum = 0.0;
  for (std::size_t t = 0; t < v.size(); ++t) sum += row[t] * v[t];
  return sum;
}

}  // namespace detail

// Direction estimate from sign measurements y_i = sign(<g_i, x>) against
// rows g_i of dimension s. The linear estimator normalizes
// (1/m2) * sum y_i g_i (its expectation is proportional to x/|x|); the net
// decoder exhaustively scores a resolution grid on the sphere by agreement
// with the recorded signs and is restricted to s <= 3.
inline std::vector<double> estimate_direction(const std::vector<double>& rows, std::uint32_t m2,
                                              std::uint32_t s, const std::vector<std::int8_t>& signs,
                                              ApproxConfig::Estimator estimator,
                                              double net_resolution) {
  if (s < 1) throw input_error("estimate_direction: empty coordinate set");
  if (estimator == ApproxConfig::Estimator::Linear) {
    std::vector<double> acc(s, 0.0);
    for (std::uint32_t i = 0; i < m2; ++i) {
      const auto y = static_cast<double>(signs[i]);
      if (y == 0.0) continue;
      const double* row = rows.data() + static_cast<std::size_t>(i) * s;
      for (std::uint32_t t = 0; t < s; ++t) acc[t] += y * row[t];
    }
    double norm = 0.0;
    for (double v : acc) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) throw std::runtime_error("estimate_direction: degenerate sign average");
    for (double& v : acc) v /= norm;
    return acc;
  }

  if (s > 3) throw input_error("estimate_direction: net-decode limited to s <= 3");
  const auto grid = detail::sphere_grid(s, net_resolution);
  std::size_t best_agree = 0;
  std::size_t best_index = 0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    std::size_t agree = 0;
    for (std::uint32_t i = 0; i < m2; ++i) {
      const double* row = rows.data() + static_cast<std::size_t>(i) * s;
      if (sign_of(detail::dot(row, grid[p])) == signs[i]) ++agree;
    }
    if (p == 0 || agree > best_agree) {
      best_agree = agree;
      best_index = p;
    }
  }
  return grid[best_index];
}

// Draw fresh Gaussian measurements of a dense s-dimensional vector and
// estimate its direction. Output has unit l2 norm.
inline std::vector<double> gaussian_stage(const std::vector<double>& x_restricted,
                                          const ApproxConfig& config) {
  config.validate();
  const auto s = static_cast<std::uint32_t>(x_restricted.size());
  if (s < 1) throw input_error("gaussian_stage: need s >= 1");
  if (std::all_of(x_restricted.begin(), x_restricted.end(), [](double v) { return v == 0.0; }))
    throw input_error("gaussian_stage: zero vector");
  const auto rows = draw_gaussian_rows(config.m2, s, config.seed);
  std::vector<std::int8_t> signs(config.m2);
  for (std::uint32_t i = 0; i < config.m2; ++i) {
    signs[i] = static_cast<std::int8_t>(
        sign_of(detail::dot(rows.data() + static_cast<std::size_t>(i) * s, x_restricted)));
  }
  return estimate_direction(rows, config.m2, s, signs, config.estimator, config.net_resolution);
}

// Two-stage recovery: stage 1 reads the support off the family pattern,
// stage 2 estimates the direction from the recorded Gaussian signs
// restricted to the recovered coordinates. The Gaussian rows were drawn
// over all n coordinates up front, so the pipeline is non-adaptive.
// Returns a unit-norm estimate supported on the recovered coordinates.
inline SparseVector approx_recover(const SetFamily& family, const SignPattern& b1,
                                   const GaussianContext& ctx, const ApproxConfig& config) {
  config.validate();
  if (ctx.n != family.n) throw input_error("approx_recover: context dimension mismatch");
  const auto stage1 = recover_support(family, b1);
  const auto& support = stage1.support;
  if (support.empty()) {
    const bool signs_zero = std::all_of(ctx.signs.begin(), ctx.signs.end(),
                                        [](std::int8_t v) { return v == 0; });
    if (!signs_zero)
      throw std::runtime_error(
          "approx_recover: recovered support is empty but stage-2 signs are not all zero");
    return SparseVector{family.n, {}};
  }

  const auto s = static_cast<std::uint32_t>(support.size());
  std::vector<double> restricted(static_cast<std::size_t>(ctx.m2) * s);
  for (std::uint32_t i = 0; i < ctx.m2; ++i) {
    for (std::uint32_t t = 0; t < s; ++t) {
      restricted[static_cast<std::size_t>(i) * s + t] =
          ctx.rows[static_cast<std::size_t>(i) * ctx.n + (support[t] - 1)];
    }
  }
  const auto estimate =
      estimate_direction(restricted, ctx.m2, s, ctx.signs, config.estimator, config.net_resolution);

  std::vector<std::pair<std::uint32_t, double>> entries;
  entries.reserve(s);
  for (std::uint32_t t = 0; t < s; ++t) {
    if (estimate[t] != 0.0) entries.emplace_back(support[t], estimate[t]);
  }
  return SparseVector(family.n, std::move(entries));
}

// l2 distance between the unit normalizations, in [0, 2].
inline double angular_error(const SparseVector& x, const SparseVector& xhat) {
  if (x.is_zero() || xhat.is_zero()) throw input_error("angular_error: zero input");
  const double nx = x.l2_norm();
  const double nh = xhat.l2_norm();
  double sum = 0.0;
  auto ia = x.entries.begin();
  auto ib = xhat.entries.begin();
  while (ia != x.entries.end() || ib != xhat.entries.end()) {
    double va = 0.0;
    double vb = 0.0;
    if (ib == xhat.entries.end() || (ia != x.entries.end() && ia->first < ib->first)) {
      va = ia->second;
      ++ia;
    } else if (ia == x.entries.end() || ib->first < ia->first) {
      vb = ib->second;
      ++ib;
    } else {
      va = ia->second;
      vb = ib->second;
      ++ia;
      ++ib;
    }
    const double diff = va / nx - vb / nh;
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

inline double angular_error_dense(const std::vector<double>& x, const std::vector<double>& y) {
  double nx = 0.0;
  double ny = 0.0;
  for (double v : x) nx += v * v;
  for (double v : y) ny += v * v;
  nx = std::sqrt(nx);
  ny = std::sqrt(ny);
  if (nx == 0.0 || ny == 0.0) throw input_error("angular_error: zero input");
  double sum = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const double diff = x[t] / nx - y[t] / ny;
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

}  // namespace obcs
