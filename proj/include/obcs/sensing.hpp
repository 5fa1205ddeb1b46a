#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "obcs/rng.hpp"
#include "obcs/set_family.hpp"

namespace obcs {

// Vector in R^n stored as (index, value) pairs, indices 1-based and
// sorted, values nonzero. The empty entry list is the zero vector.
struct SparseVector {
  std::uint32_t dim = 0;
  std::vector<std::pair<std::uint32_t, double>> entries;

  SparseVector() = default;
  SparseVector(std::uint32_t dim_, std::vector<std::pair<std::uint32_t, double>> entries_)
      : dim(dim_), entries(std::move(entries_)) {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    validate();
  }

  void validate() const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (entries[i].first < 1 || entries[i].first > dim)
        throw input_error("signal: index out of range");
      if (entries[i].second == 0.0) throw input_error("signal: zero-valued entry");
      if (i > 0 && entries[i].first == entries[i - 1].first)
        throw input_error("signal: duplicate index");
    }
  }

  std::size_t l0() const { return entries.size(); }
  bool is_zero() const { return entries.empty(); }

  std::vector<std::uint32_t> support() const {
    std::vector<std::uint32_t> s;
    s.reserve(entries.size());
    for (const auto& [idx, val] : entries) s.push_back(idx);
    return s;
  }

  double l2_norm() const {
    double sum = 0.0;
    for (const auto& [idx, val] : entries) sum += val * val;
    return std::sqrt(sum);
  }

  // max|value| / min|value| over the support (dynamic range).
  double condition_number() const {
    if (entries.empty()) throw input_error("condition_number: zero vector");
    double lo = std::abs(entries[0].second);
    double hi = lo;
    for (const auto& [idx, val] : entries) {
      lo = std::min(lo, std::abs(val));
      hi = std::max(hi, std::abs(val));
    }
    return hi / lo;
  }

  nlohmann::json to_json() const {
    nlohmann::json ents = nlohmann::json::array();
    for (const auto& [idx, val] : entries) ents.push_back({idx, val});
    return nlohmann::json{{"dim", dim}, {"entries", ents}};
  }

  static SparseVector from_json(const nlohmann::json& j) {
    std::vector<std::pair<std::uint32_t, double>> entries;
    for (const auto& e : j.at("entries")) {
      entries.emplace_back(e.at(0).get<std::uint32_t>(), e.at(1).get<double>());
    }
    return SparseVector(j.at("dim").get<std::uint32_t>(), std::move(entries));
  }

  static SparseVector load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open signal file: " + path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw input_error("bad JSON in " + path + ": " + e.what());
    }
    return from_json(j);
  }
};

// Dense m x n measurement matrix with entries in [-1, 1]. Matrices built
// from a set family are 0-1 valued with column supports equal to the sets,
// and keep the family around for provenance-dependent operations.
struct SensingMatrix {
  std::uint32_t m = 0;
  std::uint32_t n = 0;
  std::vector<double> values;  // row-major
  std::optional<SetFamily> family;

  double at(std::uint32_t row, std::uint32_t col) const {  // 1-based
    return values[static_cast<std::size_t>(row - 1) * n + (col - 1)];
  }
  double& at(std::uint32_t row, std::uint32_t col) {
    return values[static_cast<std::size_t>(row - 1) * n + (col - 1)];
  }

  void validate() const {
    if (values.size() != static_cast<std::size_t>(m) * n)
      throw input_error("matrix: values size does not match m*n");
    for (double v : values) {
      if (!(std::abs(v) <= 1.0)) throw input_error("matrix: entries must lie in [-1, 1]");
    }
  }

  bool nonnegative() const {
    return std::all_of(values.begin(), values.end(), [](double v) { return v >= 0.0; });
  }

  nlohmann::json to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (std::uint32_t i = 0; i < m; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::uint32_t j = 0; j < n; ++j) row.push_back(values[static_cast<std::size_t>(i) * n + j]);
      rows.push_back(std::move(row));
    }
    return nlohmann::json{{"m", m}, {"n", n}, {"values", rows}};
  }

  static SensingMatrix from_json(const nlohmann::json& j) {
    SensingMatrix a;
    a.m = j.at("m").get<std::uint32_t>();
    a.n = j.at("n").get<std::uint32_t>();
    a.values.reserve(static_cast<std::size_t>(a.m) * a.n);
    for (const auto& row : j.at("values")) {
      if (row.size() != a.n) throw input_error("matrix: ragged rows");
      for (const auto& v : row) a.values.push_back(v.get<double>());
    }
    a.validate();
    return a;
  }
};

// Element of {-1, 0, +1}^m.
struct SignPattern {
  std::vector<std::int8_t> values;

  std::size_t size() const { return values.size(); }

  std::vector<std::uint32_t> support() const {  // 1-based rows with nonzero sign
    std::vector<std::uint32_t> s;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] != 0) s.push_back(static_cast<std::uint32_t>(i + 1));
    }
    return s;
  }

  bool all_zero() const {
    return std::all_of(values.begin(), values.end(), [](std::int8_t v) { return v == 0; });
  }

  nlohmann::json to_json() const {
    nlohmann::json vals = nlohmann::json::array();
    for (auto v : values) vals.push_back(static_cast<int>(v));
    return nlohmann::json{{"values", vals}};
  }

  static SignPattern from_json(const nlohmann::json& j) {
    SignPattern p;
    for (const auto& v : j.at("values")) {
      const int s = v.get<int>();
      if (s < -1 || s > 1) throw input_error("pattern: values must be in {-1,0,1}");
      p.values.push_back(static_cast<std::int8_t>(s));
    }
    return p;
  }

  static SignPattern load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open pattern file: " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
  }
};

// Indicator matrix A_ij = 1 iff i ∈ B_j.
inline SensingMatrix matrix_from_family(const SetFamily& family) {
  SensingMatrix a;
  a.m = family.m;
  a.n = family.n;
  a.values.assign(static_cast<std::size_t>(family.m) * family.n, 0.0);
  for (std::uint32_t j = 1; j <= family.n; ++j) {
    for (auto i : family.sets[j - 1]) a.at(i, j) = 1.0;
  }
  a.family = family;
  return a;
}

inline int sign_of(double x, double tau = 0.0) {
  if (std::abs(x) <= tau) return 0;
  return x > 0.0 ? 1 : -1;
}

// b = sign(Ax), evaluated row by row as an exact sum over the <= k support
// entries of x (for 0-1 matrices the sum is exactly a sum of signal
// values). tau maps |<a_i, x>| <= tau to 0; the noiseless model is tau = 0.
inline SignPattern measure(const SensingMatrix& a, const SparseVector& x, double tau = 0.0) {
  if (x.dim != a.n) throw input_error("measure: signal dimension does not match matrix columns");
  if (tau < 0.0) throw input_error("measure: tau must be >= 0");
  SignPattern b;
  b.values.resize(a.m);
  for (std::uint32_t i = 1; i <= a.m; ++i) {
    double sum = 0.0;
    for (const auto& [idx, val] : x.entries) {
      const double coef = a.at(i, idx);
      if (coef != 0.0) sum += coef * val;
    }
    b.values[i - 1] = static_cast<std::int8_t>(sign_of(sum, tau));
  }
  return b;
}

struct SignalModel {
  enum class Kind { UnitPositive, RandomSignsUniform, AdversarialCancel, ConditionNumber };
  Kind kind = Kind::UnitPositive;
  double condition = 1.0;  // ConditionNumber only

  static SignalModel parse(const std::string& text) {
    SignalModel model;
    if (text == "unit-positive") {
      model.kind = Kind::UnitPositive;
    } else if (text == "random-signs-uniform" || text == "random-signs") {
      model.kind = Kind::RandomSignsUniform;
    } else if (text == "adversarial-cancel") {
      model.kind = Kind::AdversarialCancel;
    } else if (text.rfind("condition-number", 0) == 0) {
      model.kind = Kind::ConditionNumber;
      const auto open = text.find('(');
      if (open != std::string::npos) {
        const auto close = text.find(')', open);
        model.condition = std::stod(text.substr(open + 1, close - open - 1));
      } else {
        model.condition = 1e6;
      }
      if (model.condition < 1.0)
        throw input_error("signal model: condition number must be >= 1");
    } else {
      throw input_error("signal model: unknown model '" + text + "'");
    }
    return model;
  }

  std::string str() const {
    switch (kind) {
      case Kind::UnitPositive:
        return "unit-positive";
      case Kind::RandomSignsUniform:
        return "random-signs-uniform";
      case Kind::AdversarialCancel:
        return "adversarial-cancel";
      default: {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "condition-number(%g)", condition);
        return buf;
      }
    }
  }
};

namespace detail {

// Search small-integer values for the support that zero out as many rows
// shared by two or more support sets as possible. Rows are grouped by
// their membership signature over the support; candidates are drawn from
// {1,-1,2,-2,3,-3}^k so the cancellations are exact in double arithmetic.
inline std::vector<double> adversarial_values(const SetFamily& family,
                                              const std::vector<std::uint32_t>& support) {
  const auto k = static_cast<std::uint32_t>(support.size());
  std::vector<std::pair<std::uint32_t, std::size_t>> signatures;  // mask -> row count
  {
    std::vector<std::uint32_t> mask_of_row(family.m + 1, 0);
    for (std::uint32_t t = 0; t < k; ++t) {
      for (auto row : family.sets[support[t] - 1]) mask_of_row[row] |= 1u << t;
    }
    std::vector<std::size_t> counts(1u << k, 0);
    for (std::uint32_t row = 1; row <= family.m; ++row) {
      const std::uint32_t mask = mask_of_row[row];
      if (std::popcount(mask) >= 2) ++counts[mask];
    }
    for (std::uint32_t mask = 0; mask < counts.size(); ++mask) {
      if (counts[mask] > 0) signatures.emplace_back(mask, counts[mask]);
    }
  }

  static constexpr int kCandidates[6] = {1, -1, 2, -2, 3, -3};
  std::vector<double> best(k, 1.0);
  if (signatures.empty() || k == 0) return best;
  if (k > 8) {  // enumeration too large; alternate signs as a fallback
    for (std::uint32_t t = 0; t < k; ++t) best[t] = (t % 2 == 0) ? 1.0 : -1.0;
    return best;
  }

  std::uint64_t total = 1;
  for (std::uint32_t t = 0; t < k; ++t) total *= 6;
  std::size_t best_zeroed = 0;
  std::vector<int> values(k);
  for (std::uint64_t c = 0; c < total; ++c) {
    std::uint64_t rest = c;
    for (std::uint32_t t = k; t-- > 0;) {  // first coordinate most significant
      values[t] = kCandidates[rest % 6];
      rest /= 6;
    }
    std::size_t zeroed = 0;
    for (const auto& [mask, count] : signatures) {
      int sum = 0;
      for (std::uint32_t t = 0; t < k; ++t) {
        if (mask & (1u << t)) sum += values[t];
      }
      if (sum == 0) zeroed += count;
    }
    if (zeroed > best_zeroed || c == 0) {
      best_zeroed = zeroed;
      for (std::uint32_t t = 0; t < k; ++t) best[t] = values[t];
    }
  }
  return best;
}

}  // namespace detail

// Random k-sparse test signals. The support is a uniform k-subset; values
// follow the model. adversarial-cancel requires the family the measurement
// matrix came from; condition-number emits values whose dynamic range is
// exactly the requested ratio.
inline SparseVector generate_signal(std::uint32_t n, std::uint32_t k, const SignalModel& model,
                                    std::uint64_t seed, const SetFamily* family = nullptr) {
  if (k > n) throw input_error("generate_signal: k > n");
  rng::Rng gen(seed);
  if (k == 0) return SparseVector{n, {}};
  const auto support = gen.sample_subset(n, k);

  std::vector<double> values(k, 1.0);
  switch (model.kind) {
    case SignalModel::Kind::UnitPositive:
      break;
    case SignalModel::Kind::RandomSignsUniform:
      for (auto& v : values) {
        const double mag = 1.0 + gen.unit_double();
        v = gen.coin() ? mag : -mag;
      }
      break;
    case SignalModel::Kind::ConditionNumber: {
      if (model.condition < 1.0) throw input_error("generate_signal: condition must be >= 1");
      if (k == 1 && model.condition != 1.0)
        throw input_error("generate_signal: 1-sparse signals have condition number 1");
      for (std::uint32_t t = 0; t < k; ++t) {
        double mag = 1.0;
        if (t + 1 == k && k >= 2) {
          mag = model.condition;
        } else if (t > 0) {
          mag = gen.uniform(1.0, model.condition);
        }
        values[t] = gen.coin() ? mag : -mag;
      }
      break;
    }
    case SignalModel::Kind::AdversarialCancel: {
      if (family == nullptr)
        throw input_error("generate_signal: adversarial-cancel needs the source family");
      if (family->n != n)
        throw input_error("generate_signal: family size does not match signal dimension");
      values = detail::adversarial_values(*family, support);
      break;
    }
  }

  std::vector<std::pair<std::uint32_t, double>> entries;
  entries.reserve(k);
  for (std::uint32_t t = 0; t < k; ++t) entries.emplace_back(support[t], values[t]);
  return SparseVector(n, std::move(entries));
}

}  // namespace obcs
