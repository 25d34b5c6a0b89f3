#ifndef PRUW_PARAMS_HPP_
#define PRUW_PARAMS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pruw/field.hpp"
#include "pruw/rational.hpp"

namespace pruw {

/// Full system parameterization. Field names follow the protocol-facing
/// identifiers: N databases, M submodels, P subpackets per submodel, ell
/// symbols per subpacket, L = P*ell symbols per submodel, prime modulus q,
/// evaluation constants f (ell of them) and alpha (N of them), uplink
/// sparsification rate r, optional downlink cap r_prime_cap, and the run
/// seed. All indices exposed through interfaces are 1-based.
struct SystemParams {
  int N = 0;
  int M = 0;
  int P = 0;
  int ell = 0;
  long L = 0;
  std::uint64_t q = 0;
  std::vector<FieldElement> f;
  std::vector<FieldElement> alpha;
  double r = 0.0;
  std::optional<double> r_prime_cap;
  std::uint64_t seed = 0;
};

/// Globally known per-parameter update prior: zero with probability 1-r,
/// each nonzero value with probability r/(q-1).
struct PriorDistribution {
  Rational zero_mass;
  Rational nonzero_mass_each;

  static PriorDistribution from(std::uint64_t q, const Rational& r);
};

/// Immutable handle proving the wrapped SystemParams passed validation.
class ValidatedParams {
 public:
  /// Checks every structural constraint and throws ValidationError listing
  /// all violations at once. Constraints:
  ///   - q prime, large enough for the constant sets
  ///   - N = 4*ell + 2 and L = P*ell
  ///   - f and alpha distinct as a combined multiset, every alpha nonzero
  ///   - P*r integral and nonnegative, r in [0,1]
  ///   - r_prime_cap (when set) in [0,1]
  static ValidatedParams validate(SystemParams params);

  const SystemParams& raw() const { return p_; }
  int databases() const { return p_.N; }
  int submodels() const { return p_.M; }
  int subpackets() const { return p_.P; }
  int subpacket_symbols() const { return p_.ell; }
  long submodel_symbols() const { return p_.L; }
  std::uint64_t modulus() const { return p_.q; }
  Fq fq() const { return Fq(p_.q); }
  std::uint64_t seed() const { return p_.seed; }
  FieldElement f(int i) const { return p_.f[i - 1]; }        // 1-based
  FieldElement alpha(int n) const { return p_.alpha[n - 1]; }  // 1-based
  const std::vector<FieldElement>& f_all() const { return p_.f; }
  const std::vector<FieldElement>& alpha_all() const { return p_.alpha; }

  /// Number of subpackets each writer updates: P*r as an exact integer.
  int nonzero_subpackets() const { return b_count_; }
  Rational uplink_rate() const { return Rational(b_count_, p_.P); }

  /// Whole q-ary symbols needed to encode a position in {1..P} on the wire.
  int position_symbols() const { return position_symbols_; }
  /// k when P = q^k exactly, meaning log_q(P) is the integer k.
  std::optional<int> integral_log() const { return integral_log_; }
  double log_q_p() const;

  /// Downlink cap as a subpacket count, when configured.
  std::optional<int> v_cap() const { return v_cap_; }

  /// Prod_{i=1..ell}(f_i - alpha_n): the storage/reversing noise mask scale
  /// for database n. Nonzero by validation.
  FieldElement noise_scale(int n) const;

 private:
  explicit ValidatedParams(SystemParams p);

  SystemParams p_;
  int b_count_ = 0;
  int position_symbols_ = 0;
  std::optional<int> integral_log_;
  std::optional<int> v_cap_;
};

/// Deterministically samples distinct constants: N nonzero alphas plus ell
/// f values, all distinct as one multiset. Throws ValidationError("field
/// too small") when F_q cannot host them. Identical output for identical
/// inputs.
std::pair<std::vector<FieldElement>, std::vector<FieldElement>>
generate_constants(int n_databases, int ell, std::uint64_t q,
                   std::uint64_t seed);

/// Closed-form per-user reading cost at downlink rate r_prime:
///   C_R = (4 r' + (4/N)(1+r') log_q P) / (1 - 2/N).
CostExpr theoretical_read_cost(const ValidatedParams& params,
                               const Rational& r_prime);

/// Closed-form per-user writing cost:
///   C_W = 4 r (1 + log_q P) / (1 - 2/N).
CostExpr theoretical_write_cost(const ValidatedParams& params);

/// Same closed forms for arbitrary real rates (CLI cost tables).
double read_cost_value(int n_databases, double r_prime, double log_q_p);
double write_cost_value(int n_databases, double r, double log_q_p);

/// Per-phase cost floor without sparsification: 2 / (1 - 2/N).
Rational no_sparsification_baseline(int n_databases);

/// Per-reader wire-over-formula slack from encoding positions as whole
/// symbols: (P + |V~|) * (ceil(log_q P) - log_q P) / L.
double read_cost_slack(const ValidatedParams& params, int v_size);
/// Per-writer slack: P*r*N * (ceil(log_q P) - log_q P) / L.
double write_cost_slack(const ValidatedParams& params);

// Key-value config support. Files hold `key = value` lines, `#` comments.

std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Builds SystemParams from parsed keys (schema_version is mandatory),
/// generating f/alpha from the seed when not given explicitly. Returns the
/// params plus the set of keys consumed.
SystemParams params_from_key_values(
    const std::map<std::string, std::string>& kv,
    std::vector<std::string>* consumed_keys);

}  // namespace pruw

#endif  // PRUW_PARAMS_HPP_
