#include "pruw/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pruw {

namespace {

constexpr double kEps = 1e-14;
constexpr int kMaxIterations = 500;

// Series expansion of P(a, x); converges fast for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < kMaxIterations; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw std::runtime_error("gamma series failed to converge");
}

// Lentz continued fraction for Q(a, x); converges fast for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  const double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIterations; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) {
      return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
  }
  throw std::runtime_error("gamma continued fraction failed to converge");
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (a <= 0.0) {
    throw std::invalid_argument("regularized_gamma_q: a must be positive");
  }
  if (x < 0.0) {
    throw std::invalid_argument("regularized_gamma_q: x must be nonnegative");
  }
  if (x == 0.0) {
    return 1.0;
  }
  if (x < a + 1.0) {
    return 1.0 - gamma_p_series(a, x);
  }
  return gamma_q_fraction(a, x);
}

double chi_square_statistic(const std::vector<std::uint64_t>& observed,
                            const std::vector<double>& expected) {
  if (observed.size() != expected.size()) {
    throw std::invalid_argument("chi_square_statistic: size mismatch");
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0.0) {
      throw std::invalid_argument(
          "chi_square_statistic: expected counts must be positive");
    }
    const double diff = static_cast<double>(observed[i]) - expected[i];
    stat += diff * diff / expected[i];
  }
  return stat;
}

double chi_square_p_value(double statistic, int degrees_of_freedom) {
  if (degrees_of_freedom < 1) {
    throw std::invalid_argument("chi_square_p_value: df must be positive");
  }
  return regularized_gamma_q(degrees_of_freedom / 2.0, statistic / 2.0);
}

double uniformity_p_value(const std::vector<std::uint64_t>& counts) {
  if (counts.size() < 2) {
    return 1.0;
  }
  std::uint64_t total = 0;
  for (std::uint64_t c : counts) total += c;
  if (total == 0) {
    return 1.0;
  }
  const double expected_each =
      static_cast<double>(total) / static_cast<double>(counts.size());
  const std::vector<double> expected(counts.size(), expected_each);
  const double stat = chi_square_statistic(counts, expected);
  return chi_square_p_value(stat, static_cast<int>(counts.size()) - 1);
}

double homogeneity_p_value(const std::vector<std::uint64_t>& sample_a,
                           const std::vector<std::uint64_t>& sample_b) {
  if (sample_a.size() != sample_b.size()) {
    throw std::invalid_argument("homogeneity_p_value: size mismatch");
  }
  // Keep only columns observed at least once; empty categories carry no
  // information and would zero out the expected counts.
  std::vector<std::uint64_t> a;
  std::vector<std::uint64_t> b;
  for (std::size_t i = 0; i < sample_a.size(); ++i) {
    if (sample_a[i] + sample_b[i] > 0) {
      a.push_back(sample_a[i]);
      b.push_back(sample_b[i]);
    }
  }
  if (a.size() < 2) {
    return 1.0;
  }
  double total_a = 0.0;
  double total_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    total_a += static_cast<double>(a[i]);
    total_b += static_cast<double>(b[i]);
  }
  const double total = total_a + total_b;
  if (total_a == 0.0 || total_b == 0.0) {
    return 1.0;
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double column = static_cast<double>(a[i] + b[i]);
    const double expect_a = total_a * column / total;
    const double expect_b = total_b * column / total;
    const double da = static_cast<double>(a[i]) - expect_a;
    const double db = static_cast<double>(b[i]) - expect_b;
    stat += da * da / expect_a + db * db / expect_b;
  }
  return chi_square_p_value(stat, static_cast<int>(a.size()) - 1);
}

}  // namespace pruw

