#ifndef PRUW_RATIONAL_HPP_
#define PRUW_RATIONAL_HPP_

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pruw {

/// Exact rational number over int64. Cost accounting keeps symbol counts and
/// their normalizations exact so that zero-tolerance comparisons between
/// measured and closed-form costs are genuine equalities, not float checks.
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT implicit
  Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
    normalize();
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(checked(static_cast<__int128>(a.num_) * b.den_ +
                            static_cast<__int128>(b.num_) * a.den_),
                    checked(static_cast<__int128>(a.den_) * b.den_));
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(checked(static_cast<__int128>(a.num_) * b.den_ -
                            static_cast<__int128>(b.num_) * a.den_),
                    checked(static_cast<__int128>(a.den_) * b.den_));
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(checked(static_cast<__int128>(a.num_) * b.num_),
                    checked(static_cast<__int128>(a.den_) * b.den_));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::invalid_argument("Rational: divide by zero");
    return Rational(checked(static_cast<__int128>(a.num_) * b.den_),
                    checked(static_cast<__int128>(a.den_) * b.num_));
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return !(a == b);
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ <
           static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ <=
           static_cast<__int128>(b.num_) * a.den_;
  }

 private:
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  // Magnitudes stay tiny (symbol counts, grid sizes); guard anyway.
  static std::int64_t checked(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) {
      throw std::overflow_error("Rational: overflow");
    }
    return static_cast<std::int64_t>(v);
  }

  std::int64_t num_;
  std::int64_t den_;
};

/// A cost of the form base + log_coeff * log_q(P), with both coefficients
/// exact. The irrational log factor is kept symbolic so costs measured from
/// the wire and costs from the closed forms can be compared exactly.
struct CostExpr {
  Rational base;
  Rational log_coeff;

  double value(double log_q_p) const {
    return base.to_double() + log_coeff.to_double() * log_q_p;
  }

  /// Collapse to an exact rational when log_q(P) is the integer k (P = q^k).
  Rational collapse(std::int64_t k) const {
    return base + log_coeff * Rational(k);
  }

  friend CostExpr operator+(const CostExpr& a, const CostExpr& b) {
    return {a.base + b.base, a.log_coeff + b.log_coeff};
  }
  friend bool operator==(const CostExpr& a, const CostExpr& b) {
    return a.base == b.base && a.log_coeff == b.log_coeff;
  }
};

}  // namespace pruw

#endif  // PRUW_RATIONAL_HPP_
