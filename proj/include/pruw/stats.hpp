#ifndef PRUW_STATS_HPP_
#define PRUW_STATS_HPP_

#include <cstdint>
#include <vector>

namespace pruw {

/// Pearson statistic for observed counts against explicit expected counts.
/// Throws std::invalid_argument on size mismatch or nonpositive expecteds.
double chi_square_statistic(const std::vector<std::uint64_t>& observed,
                            const std::vector<double>& expected);

/// Upper tail P[X >= x] for a chi-square variable with df degrees of
/// freedom, i.e. the regularized incomplete gamma Q(df/2, x/2).
double chi_square_p_value(double statistic, int degrees_of_freedom);

/// Q(a, x) computed via the standard series (x < a+1) / continued fraction
/// (x >= a+1) split, accurate to ~1e-12 over the ranges audits use.
double regularized_gamma_q(double a, double x);

/// One-sample uniformity test: counts over k categories against the uniform
/// expectation. Returns the p-value; df = k-1.
double uniformity_p_value(const std::vector<std::uint64_t>& counts);

/// Two-sample homogeneity test on a 2 x k contingency table. Returns the
/// p-value; df = k-1. Columns with zero combined count are dropped.
double homogeneity_p_value(const std::vector<std::uint64_t>& sample_a,
                           const std::vector<std::uint64_t>& sample_b);

}  // namespace pruw

#endif  // PRUW_STATS_HPP_
