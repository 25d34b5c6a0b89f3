#ifndef PRUW_AUDIT_HPP_
#define PRUW_AUDIT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "pruw/params.hpp"

namespace pruw {

/// One privacy check outcome. For statistical checks statistic is the
/// p-value and threshold the Bonferroni-corrected level (pass when p >=
/// threshold). For exhaustive checks statistic is the largest deviation
/// from the ideal distribution and threshold is 0 (pass when exactly 0).
/// Negative controls run the same check against a deliberately leaky
/// variant; the suite demands they FAIL.
struct AuditCheck {
  std::string name;
  bool negative_control = false;
  bool pass = false;
  double statistic = 0.0;
  double threshold = 0.0;
  long samples = 0;
  std::string note;
};

struct AuditReport {
  std::vector<AuditCheck> checks;

  /// True when every regular check passes and every negative control
  /// fails (a passing control means the check cannot detect leaks).
  bool suite_pass() const;
};

/// Parameters for the exhaustive audits, which enumerate every world a
/// single database could face. They run on one database view with locally
/// drawn constants, so q only needs to host 1 + ell distinct values and
/// the full N = 4*ell+2 system is not required.
struct ExhaustiveConfig {
  std::uint64_t q = 5;
  int m_submodels = 2;
  int ell = 1;
  int p_subpackets = 2;
  int b_count = 1;
  std::uint64_t seed = 1;
};

/// Enumeration budget rule: q^(M*ell + b) * P! must stay within 10^6.
bool exhaustive_feasible(const ExhaustiveConfig& config);

/// Exhaustively verifies, against every possible secret and noise draw:
///   - query vectors are identically distributed for every theta
///   - observed pair positions leave a uniform posterior over every
///     candidate true index set
///   - combined update values are identically distributed for every delta
///   - stored symbols are identically distributed for every plaintext
/// plus one sabotaged negative control per check.
AuditReport run_exhaustive_audits(const ExhaustiveConfig& config);

/// Parameters for the statistical audits, which run the real coordinator
/// and client paths over many independently seeded trials and test the
/// observed wire data (first query symbol, pair positions, pair values,
/// stored symbols) for the distributions privacy requires.
struct StatisticalConfig {
  SystemParams system;
  long trials = 10000;
  long control_trials = 2000;
  double alpha_level = 0.01;  // split across checks (Bonferroni)
};

AuditReport run_statistical_audits(const StatisticalConfig& config);

}  // namespace pruw

#endif  // PRUW_AUDIT_HPP_
