#include "pruw/params.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "pruw/error.hpp"
#include "pruw/rng.hpp"

namespace pruw {

namespace {

// P*r must land on an integer; tolerate only float representation error.
constexpr double kIntegralTolerance = 1e-9;

bool nearly_integral(double x, long* out) {
  const double rounded = std::round(x);
  if (std::abs(x - rounded) > kIntegralTolerance) {
    return false;
  }
  *out = static_cast<long>(rounded);
  return true;
}

}  // namespace

PriorDistribution PriorDistribution::from(std::uint64_t q, const Rational& r) {
  PriorDistribution prior;
  prior.zero_mass = Rational(1) - r;
  prior.nonzero_mass_each = r / Rational(static_cast<long long>(q) - 1);
  return prior;
}

ValidatedParams::ValidatedParams(SystemParams p) : p_(std::move(p)) {
  long b = 0;
  nearly_integral(static_cast<double>(p_.P) * p_.r, &b);
  b_count_ = static_cast<int>(b);

  // position_symbols: smallest k with q^k >= P (0 when a position needs no
  // symbols at all). integral_log: k when q^k hits P exactly.
  if (p_.P > 1) {
    std::uint64_t power = 1;
    int k = 0;
    while (power < static_cast<std::uint64_t>(p_.P)) {
      power *= p_.q;
      ++k;
    }
    position_symbols_ = k;
    if (power == static_cast<std::uint64_t>(p_.P)) {
      integral_log_ = k;
    }
  } else if (p_.P == 1) {
    integral_log_ = 0;
  }

  if (p_.r_prime_cap.has_value()) {
    v_cap_ = static_cast<int>(
        std::floor(*p_.r_prime_cap * p_.P + kIntegralTolerance));
  }
}

ValidatedParams ValidatedParams::validate(SystemParams params) {
  std::vector<std::string> violations;

  if (params.N < 6) {
    violations.push_back("N must be at least 6");
  }
  if (params.ell < 1) {
    violations.push_back("ell must be at least 1");
  }
  if (params.N != 4 * params.ell + 2) {
    violations.push_back("N must equal 4*ell + 2");
  }
  if (params.M < 1) {
    violations.push_back("M must be at least 1");
  }
  if (params.P < 1) {
    violations.push_back("P must be at least 1");
  }
  if (params.L != static_cast<long>(params.P) * params.ell) {
    violations.push_back("L must equal P*ell");
  }

  if (!Fq::is_prime(params.q)) {
    violations.push_back("q must be prime");
  } else if (params.q >= (1ULL << 31)) {
    violations.push_back("q must be below 2^31");
  } else if (params.ell >= 1 &&
             params.q < static_cast<std::uint64_t>(params.N) +
                            static_cast<std::uint64_t>(params.ell)) {
    // N distinct nonzero alphas plus ell further distinct f values need at
    // least N+ell field elements, at most one of which may be zero.
    violations.push_back("field too small: q must be at least N + ell");
  } else {
    if (params.f.size() != static_cast<std::size_t>(params.ell)) {
      violations.push_back("f must hold exactly ell constants");
    }
    if (params.alpha.size() != static_cast<std::size_t>(params.N)) {
      violations.push_back("alpha must hold exactly N constants");
    }
    std::set<FieldElement> seen;
    bool distinct = true;
    bool in_range = true;
    for (FieldElement v : params.f) {
      if (v >= params.q) in_range = false;
      if (!seen.insert(v).second) distinct = false;
    }
    bool alpha_nonzero = true;
    for (FieldElement v : params.alpha) {
      if (v >= params.q) in_range = false;
      if (v == 0) alpha_nonzero = false;
      if (!seen.insert(v).second) distinct = false;
    }
    if (!in_range) {
      violations.push_back("constants must be reduced modulo q");
    }
    if (!distinct) {
      violations.push_back("f and alpha constants must be pairwise distinct");
    }
    if (!alpha_nonzero) {
      violations.push_back("every alpha must be nonzero");
    }
  }

  if (params.r < 0.0 || params.r > 1.0) {
    violations.push_back("r must lie in [0, 1]");
  } else {
    long b = 0;
    if (!nearly_integral(static_cast<double>(params.P) * params.r, &b) ||
        b < 0) {
      violations.push_back("P*r must be a nonnegative integer");
    }
  }
  if (params.r_prime_cap.has_value() &&
      (*params.r_prime_cap < 0.0 || *params.r_prime_cap > 1.0)) {
    violations.push_back("r_prime_cap must lie in [0, 1]");
  }

  if (!violations.empty()) {
    throw ValidationError(std::move(violations));
  }
  return ValidatedParams(std::move(params));
}

double ValidatedParams::log_q_p() const {
  if (p_.P <= 1) {
    return 0.0;
  }
  return std::log(static_cast<double>(p_.P)) /
         std::log(static_cast<double>(p_.q));
}

FieldElement ValidatedParams::noise_scale(int n) const {
  const Fq fq(p_.q);
  FieldElement prod = 1;
  for (int i = 1; i <= p_.ell; ++i) {
    prod = fq.mul(prod, fq.sub(f(i), alpha(n)));
  }
  return prod;
}

std::pair<std::vector<FieldElement>, std::vector<FieldElement>>
generate_constants(int n_databases, int ell, std::uint64_t q,
                   std::uint64_t seed) {
  if (!Fq::is_prime(q)) {
    throw ValidationError({"q must be prime"});
  }
  if (q < static_cast<std::uint64_t>(n_databases) +
              static_cast<std::uint64_t>(ell) ||
      q - 1 < static_cast<std::uint64_t>(n_databases)) {
    throw ValidationError({"field too small: q must be at least N + ell"});
  }
  RngStream rng(seed, "system-constants");
  std::set<FieldElement> used;
  std::vector<FieldElement> alpha;
  alpha.reserve(n_databases);
  while (alpha.size() < static_cast<std::size_t>(n_databases)) {
    const FieldElement v = rng.nonzero_field_element(q);
    if (used.insert(v).second) {
      alpha.push_back(v);
    }
  }
  std::vector<FieldElement> f;
  f.reserve(ell);
  while (f.size() < static_cast<std::size_t>(ell)) {
    const FieldElement v = rng.field_element(q);  // zero is allowed for f
    if (used.insert(v).second) {
      f.push_back(v);
    }
  }
  return {std::move(f), std::move(alpha)};
}

CostExpr theoretical_read_cost(const ValidatedParams& params,
                               const Rational& r_prime) {
  // C_R = (4 r' + (4/N)(1+r') log_q P) / (1 - 2/N)
  //     = 4 N r'/(N-2)  +  4 (1+r')/(N-2) * log_q P.
  const long long n = params.databases();
  CostExpr cost;
  cost.base = Rational(4 * n, n - 2) * r_prime;
  cost.log_coeff = Rational(4, n - 2) * (Rational(1) + r_prime);
  return cost;
}

CostExpr theoretical_write_cost(const ValidatedParams& params) {
  // C_W = 4 r (1 + log_q P) / (1 - 2/N) = 4 N r/(N-2) * (1 + log_q P).
  const long long n = params.databases();
  const Rational scale = Rational(4 * n, n - 2) * params.uplink_rate();
  CostExpr cost;
  cost.base = scale;
  cost.log_coeff = scale;
  return cost;
}

double read_cost_value(int n_databases, double r_prime, double log_q_p) {
  const double n = n_databases;
  return (4.0 * r_prime + (4.0 / n) * (1.0 + r_prime) * log_q_p) /
         (1.0 - 2.0 / n);
}

double write_cost_value(int n_databases, double r, double log_q_p) {
  const double n = n_databases;
  return 4.0 * r * (1.0 + log_q_p) / (1.0 - 2.0 / n);
}

Rational no_sparsification_baseline(int n_databases) {
  return Rational(2 * static_cast<long long>(n_databases), n_databases - 2);
}

double read_cost_slack(const ValidatedParams& params, int v_size) {
  const double gap = params.position_symbols() - params.log_q_p();
  return static_cast<double>(params.subpackets() + v_size) * gap /
         static_cast<double>(params.submodel_symbols());
}

double write_cost_slack(const ValidatedParams& params) {
  const double gap = params.position_symbols() - params.log_q_p();
  return static_cast<double>(params.nonzero_subpackets()) *
         params.databases() * gap /
         static_cast<double>(params.submodel_symbols());
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return std::string();
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
  };
  while (std::getline(lines, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected `key = value`");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": empty key or value");
    }
    if (!kv.emplace(key, value).second) {
      throw ConfigError("duplicate key: " + key);
    }
  }
  return kv;
}

namespace {

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid integer for " + key + ": " + value);
  }
}

int to_int(const std::string& key, const std::string& value) {
  const std::uint64_t v = to_u64(key, value);
  if (v > 1000000) {
    throw ConfigError("value out of range for " + key + ": " + value);
  }
  return static_cast<int>(v);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for " + key + ": " + value);
  }
}

std::vector<FieldElement> to_element_list(const std::string& key,
                                          const std::string& value) {
  std::vector<FieldElement> out;
  std::istringstream parts(value);
  std::string item;
  while (std::getline(parts, item, ',')) {
    out.push_back(to_u64(key, item));
  }
  return out;
}

}  // namespace

SystemParams params_from_key_values(
    const std::map<std::string, std::string>& kv,
    std::vector<std::string>* consumed_keys) {
  auto take = [&](const std::string& key) -> const std::string* {
    const auto it = kv.find(key);
    if (it == kv.end()) return nullptr;
    if (consumed_keys != nullptr) consumed_keys->push_back(key);
    return &it->second;
  };
  auto require = [&](const std::string& key) -> const std::string& {
    const std::string* v = take(key);
    if (v == nullptr) throw ConfigError("missing required key: " + key);
    return *v;
  };

  const std::string& version = require("schema_version");
  if (version != "1") {
    throw ConfigError("unsupported schema_version: " + version);
  }

  SystemParams p;
  p.q = to_u64("q", require("q"));
  p.N = to_int("n_databases", require("n_databases"));
  p.M = to_int("m_submodels", require("m_submodels"));
  p.P = to_int("p_subpackets", require("p_subpackets"));
  p.r = to_double("r", require("r"));
  p.seed = to_u64("seed", require("seed"));

  if (const std::string* v = take("ell")) {
    p.ell = to_int("ell", *v);
  } else {
    p.ell = (p.N - 2) / 4;  // derived; validation rejects N != 4*ell+2
  }
  if (const std::string* v = take("l_symbols")) {
    p.L = to_int("l_symbols", *v);
  } else {
    p.L = static_cast<long>(p.P) * p.ell;
  }
  if (const std::string* v = take("r_prime_cap")) {
    p.r_prime_cap = to_double("r_prime_cap", *v);
  }

  const std::string* f_text = take("f");
  const std::string* alpha_text = take("alpha");
  if (f_text != nullptr && alpha_text != nullptr) {
    p.f = to_element_list("f", *f_text);
    p.alpha = to_element_list("alpha", *alpha_text);
  } else if (f_text != nullptr || alpha_text != nullptr) {
    throw ConfigError("f and alpha must be given together or not at all");
  } else {
    try {
      auto constants = generate_constants(p.N, p.ell, p.q, p.seed);
      p.f = std::move(constants.first);
      p.alpha = std::move(constants.second);
    } catch (const ValidationError&) {
      // Leave the constants empty; full-system validation reports the
      // field-size problem with the rest of the violations. Audit-only
      // configs (single-database enumerations) never need them.
    }
  }
  return p;
}

}  // namespace pruw
