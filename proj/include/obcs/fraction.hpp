#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace obcs {

// Thrown for malformed inputs and violated preconditions. The CLI maps it
// to exit code 2; operational failures (std::runtime_error) map to 1.
struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Nonnegative rational p/q, always kept in lowest terms. Robustness
// fractions are compared against integer overlap counts, and those
// comparisons must be exact: all predicates below cross-multiply in
// 128-bit instead of going through floating point.
class Fraction {
 public:
  Fraction() = default;
  Fraction(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ <= 0) throw input_error("fraction: denominator must be positive");
    if (num_ < 0) throw input_error("fraction: numerator must be nonnegative");
    reduce();
  }

  // Accepts "P/Q" or a bare integer "P".
  static Fraction parse(const std::string& text) {
    const auto slash = text.find('/');
    try {
      if (slash == std::string::npos) {
        return Fraction(std::stoll(text), 1);
      }
      return Fraction(std::stoll(text.substr(0, slash)),
                      std::stoll(text.substr(slash + 1)));
    } catch (const input_error&) {
      throw;
    } catch (const std::exception&) {
      throw input_error("fraction: cannot parse '" + text + "'");
    }
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  Fraction times(std::int64_t factor) const { return Fraction(num_ * factor, den_); }

  // Smallest integer T with T >= (*this) * scale; an integer count c
  // satisfies c >= alpha*scale exactly when c >= T.
  std::int64_t ceil_scaled(std::int64_t scale) const {
    const __int128 prod = static_cast<__int128>(num_) * scale;
    return static_cast<std::int64_t>((prod + den_ - 1) / den_);
  }

  // count < (*this) * scale / divisor, exactly.
  bool strictly_above(std::int64_t count, std::int64_t scale, std::int64_t divisor = 1) const {
    return static_cast<__int128>(count) * den_ * divisor <
           static_cast<__int128>(num_) * scale;
  }

  friend bool operator==(const Fraction& a, const Fraction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Fraction& a, const Fraction& b) { return !(a == b); }
  friend bool operator<(const Fraction& a, const Fraction& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator<=(const Fraction& a, const Fraction& b) { return !(b < a); }
  friend bool operator>(const Fraction& a, const Fraction& b) { return b < a; }
  friend bool operator>=(const Fraction& a, const Fraction& b) { return !(a < b); }

 private:
  void reduce() {
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace obcs
