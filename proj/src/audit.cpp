#include "pruw/audit.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>

#include "pruw/client.hpp"
#include "pruw/coordinator.hpp"
#include "pruw/error.hpp"
#include "pruw/permutation.hpp"
#include "pruw/rng.hpp"
#include "pruw/sabotage.hpp"
#include "pruw/stats.hpp"

namespace pruw {

namespace {

using Multiset = std::map<std::vector<FieldElement>, long>;

/// Advances a base-q odometer; returns false after the last state.
bool next_odometer(std::vector<FieldElement>& digits, std::uint64_t q) {
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (++digits[i] < q) {
      return true;
    }
    digits[i] = 0;
  }
  return false;
}

/// Advances a sorted b-subset of {1..p}; returns false after the last.
bool next_subset(std::vector<int>& subset, int p) {
  const int b = static_cast<int>(subset.size());
  for (int i = b - 1; i >= 0; --i) {
    if (subset[i] < p - (b - 1 - i)) {
      ++subset[i];
      for (int j = i + 1; j < b; ++j) {
        subset[j] = subset[j - 1] + 1;
      }
      return true;
    }
  }
  return false;
}

double max_count_deviation(const std::vector<Multiset>& sets) {
  // Largest absolute count difference any observation shows across the
  // secret hypotheses; identical distributions give exactly 0.
  double worst = 0.0;
  for (const Multiset& set : sets) {
    for (const auto& [value, count] : set) {
      for (const Multiset& other : sets) {
        const auto it = other.find(value);
        const long there = it == other.end() ? 0 : it->second;
        worst = std::max(worst, std::abs(static_cast<double>(count - there)));
      }
    }
  }
  return worst;
}

AuditCheck exhaustive_check(const std::string& name, bool control,
                            double deviation, long samples,
                            std::string note = "") {
  AuditCheck check;
  check.name = name;
  check.negative_control = control;
  check.statistic = deviation;
  check.threshold = 0.0;
  check.pass = deviation == 0.0;
  check.samples = samples;
  check.note = std::move(note);
  return check;
}

// ---- exhaustive enumerations ------------------------------------------

/// Query multiset per theta over every noise draw (or the single all-zero
/// draw when sabotaged).
double query_theta_deviation(const ExhaustiveConfig& cfg, const Fq& fq,
                             const std::vector<FieldElement>& f,
                             FieldElement alpha, bool zero_noise,
                             long* samples) {
  const std::size_t width =
      static_cast<std::size_t>(cfg.m_submodels) * cfg.ell;
  std::vector<Multiset> per_theta(cfg.m_submodels);
  for (int theta = 1; theta <= cfg.m_submodels; ++theta) {
    std::vector<FieldElement> digits(width, 0);
    do {
      std::vector<FieldVector> noise;
      for (int k = 0; k < cfg.ell; ++k) {
        FieldVector block(cfg.q, static_cast<std::size_t>(cfg.m_submodels));
        for (int m = 0; m < cfg.m_submodels; ++m) {
          block[m] = digits[k * cfg.m_submodels + m];
        }
        noise.push_back(std::move(block));
      }
      const ReadQuery query =
          make_read_query(fq, cfg.m_submodels, theta, f, alpha, noise);
      ++per_theta[theta - 1][query.elements.e];
      ++*samples;
    } while (!zero_noise && next_odometer(digits, cfg.q));
  }
  return max_count_deviation(per_theta);
}

/// Posterior over true index sets given observed pair positions, across
/// every permutation (or only the identity when sabotaged).
double position_posterior_deviation(const ExhaustiveConfig& cfg,
                                    bool identity_only, long* samples) {
  std::vector<int> forward(cfg.p_subpackets);
  std::iota(forward.begin(), forward.end(), 1);
  // joint[observed positions][true b_set] = number of permutations.
  std::map<std::vector<int>, std::map<std::vector<int>, long>> joint;
  long subset_count = 0;
  do {
    const Permutation perm(forward);
    std::vector<int> b_set(cfg.b_count);
    std::iota(b_set.begin(), b_set.end(), 1);
    subset_count = 0;
    do {
      ++joint[permuted_positions(perm, b_set)][b_set];
      ++subset_count;
      ++*samples;
    } while (next_subset(b_set, cfg.p_subpackets));
  } while (!identity_only &&
           std::next_permutation(forward.begin(), forward.end()));
  double worst = 0.0;
  const double uniform = 1.0 / static_cast<double>(subset_count);
  for (const auto& [observed, by_set] : joint) {
    (void)observed;
    long total = 0;
    for (const auto& [b_set, count] : by_set) {
      (void)b_set;
      total += count;
    }
    // Every candidate set must appear, with posterior exactly 1/C(P,b).
    if (static_cast<long>(by_set.size()) != subset_count) {
      worst = std::max(worst, uniform);
    }
    for (const auto& [b_set, count] : by_set) {
      (void)b_set;
      const double posterior =
          static_cast<double>(count) / static_cast<double>(total);
      worst = std::max(worst, std::abs(posterior - uniform));
    }
  }
  return worst;
}

/// Combined-update value multiset per delta over every noise value (or
/// only zero noise when sabotaged).
double update_value_deviation(const ExhaustiveConfig& cfg, const Fq& fq,
                              const std::vector<FieldElement>& f,
                              FieldElement alpha, bool zero_noise,
                              long* samples) {
  std::vector<Multiset> per_delta;
  std::vector<FieldElement> deltas(cfg.ell, 0);
  while (next_odometer(deltas, cfg.q)) {  // skips the all-zero delta
    Multiset values;
    for (FieldElement z_hat = 0; z_hat < cfg.q; ++z_hat) {
      const FieldElement v = combine_update_at(fq, f, alpha, deltas,
                                               zero_noise ? 0 : z_hat);
      ++values[{v}];
      ++*samples;
      if (zero_noise) break;
    }
    per_delta.push_back(std::move(values));
  }
  return max_count_deviation(per_delta);
}

/// Stored-symbol multiset per plaintext over every storage noise draw (or
/// only zero noise when sabotaged).
double storage_value_deviation(const ExhaustiveConfig& cfg, const Fq& fq,
                               const std::vector<FieldElement>& f,
                               FieldElement alpha, bool zero_noise,
                               long* samples) {
  std::vector<Multiset> per_w(cfg.q);
  for (FieldElement w = 0; w < cfg.q; ++w) {
    std::vector<FieldElement> digits(static_cast<std::size_t>(2 * cfg.ell + 1),
                                     0);
    do {
      const FieldVector z(cfg.q, digits);
      ++per_w[w][{noisy_storage_entry(fq, w, f[0], alpha, z)}];
      ++*samples;
    } while (!zero_noise && next_odometer(digits, cfg.q));
  }
  return max_count_deviation(per_w);
}

// ---- statistical sampling ---------------------------------------------

struct StatisticalSamples {
  // query-homogeneity: first query symbol sent to db 1, split by theta.
  std::vector<std::uint64_t> query_theta1;
  std::vector<std::uint64_t> query_theta2;
  // position-uniformity: observed pair positions at db 1.
  std::vector<std::uint64_t> positions;
  // update-value-uniformity: observed pair values at db 1, binned.
  std::vector<std::uint64_t> values;
  std::vector<double> value_expected;
  // storage-homogeneity: first stored symbol at db 1, split by whether the
  // plaintext falls in the lower or upper half of the field.
  std::vector<std::uint64_t> storage_low_w;
  std::vector<std::uint64_t> storage_high_w;
  long trials = 0;
};

StatisticalSamples collect_samples(const ValidatedParams& base,
                                   const std::vector<int>& fixed_b,
                                   long trials, NoiseControls controls) {
  const std::uint64_t q = base.modulus();
  const std::size_t value_bins = static_cast<std::size_t>(std::min<
      std::uint64_t>(q, 64));
  StatisticalSamples s;
  s.query_theta1.assign(q, 0);
  s.query_theta2.assign(q, 0);
  s.positions.assign(base.subpackets(), 0);
  s.values.assign(value_bins, 0);
  s.storage_low_w.assign(q, 0);
  s.storage_high_w.assign(q, 0);
  s.trials = trials;

  for (long trial = 0; trial < trials; ++trial) {
    // Fresh seed per trial: new permutation, noise, and initial models.
    SystemParams raw = base.raw();
    raw.seed = base.seed() + 0x9e3779b97f4a7c15ULL * (trial + 1);
    const ValidatedParams params = ValidatedParams::validate(raw);
    const SetupResult setup = coordinator_setup(params, controls);
    const int theta = 1 + static_cast<int>(trial % 2);
    const ClientSession client(params, 1, theta, setup.permutation, controls);

    const ReadQuery query = client.round_queries(1)[0];
    (theta == 1 ? s.query_theta1 : s.query_theta2)[query.elements[0]] += 1;

    SparseUpdate update;
    update.b_set = fixed_b;
    RngStream delta_rng(params.seed(), "audit-deltas");
    for (std::size_t j = 0; j < fixed_b.size(); ++j) {
      std::vector<FieldElement> symbols;
      do {
        symbols = delta_rng.field_vector(q, base.subpacket_symbols());
      } while (std::all_of(symbols.begin(), symbols.end(),
                           [](FieldElement v) { return v == 0; }));
      update.deltas.push_back(std::move(symbols));
    }
    for (const WritePair& pair : client.write_pairs_for(update, 1, 1)) {
      s.positions[pair.position - 1] += 1;
      s.values[pair.update % value_bins] += 1;
    }

    const FieldElement w = setup.submodels[0][0];
    const FieldElement stored = setup.databases[0].subpacket(1)[0];
    (w < q / 2 ? s.storage_low_w : s.storage_high_w)[stored] += 1;
  }

  // Exact expected counts for the value bins (residue classes mod bins).
  const long pair_samples =
      trials * static_cast<long>(fixed_b.size());
  s.value_expected.assign(value_bins, 0.0);
  for (std::size_t bin = 0; bin < value_bins; ++bin) {
    const std::uint64_t class_size = q / value_bins + (bin < q % value_bins);
    s.value_expected[bin] = static_cast<double>(pair_samples) *
                            static_cast<double>(class_size) /
                            static_cast<double>(q);
  }
  return s;
}

double value_uniformity_p(const StatisticalSamples& s) {
  return chi_square_p_value(chi_square_statistic(s.values, s.value_expected),
                            static_cast<int>(s.values.size()) - 1);
}

}  // namespace

bool AuditReport::suite_pass() const {
  if (checks.empty()) {
    return false;
  }
  for (const AuditCheck& check : checks) {
    if (check.negative_control ? check.pass : !check.pass) {
      return false;
    }
  }
  return true;
}

bool exhaustive_feasible(const ExhaustiveConfig& config) {
  double worlds = 1.0;
  for (int i = 0; i < config.m_submodels * config.ell + config.b_count; ++i) {
    worlds *= static_cast<double>(config.q);
  }
  for (int i = 2; i <= config.p_subpackets; ++i) {
    worlds *= i;
  }
  return worlds <= 1e6;
}

AuditReport run_exhaustive_audits(const ExhaustiveConfig& cfg) {
  if (cfg.ell < 1 || cfg.m_submodels < 1 || cfg.p_subpackets < 1 ||
      cfg.b_count < 1 || cfg.b_count > cfg.p_subpackets) {
    throw ValidationError({"exhaustive audit needs ell, M, P, b >= 1 and "
                           "b <= P"});
  }
  if (!exhaustive_feasible(cfg)) {
    throw ValidationError({"exhaustive audit infeasible: q^(M*ell+b) * P! "
                           "exceeds 10^6"});
  }
  // One database's view; local constants, one alpha.
  const Fq fq(cfg.q);
  const auto [f, alpha_vec] = generate_constants(1, cfg.ell, cfg.q, cfg.seed);
  const FieldElement alpha = alpha_vec[0];

  AuditReport report;
  auto add = [&report](const std::string& name, bool control,
                       double deviation, long samples,
                       const std::string& note) {
    report.checks.push_back(
        exhaustive_check(name, control, deviation, samples, note));
  };
  {
    long samples = 0;
    const double d = query_theta_deviation(cfg, fq, f, alpha, false, &samples);
    add("query-theta-exhaustive", false, d, samples,
        "query multisets identical for every theta");
  }
  {
    long samples = 0;
    const double d = query_theta_deviation(cfg, fq, f, alpha, true, &samples);
    add("query-theta-exhaustive-control", true, d, samples,
        "query noise zeroed; must leak theta");
  }
  {
    long samples = 0;
    const double d = position_posterior_deviation(cfg, false, &samples);
    add("pair-position-exhaustive", false, d, samples,
        "uniform posterior over true index sets");
  }
  {
    long samples = 0;
    const double d = position_posterior_deviation(cfg, true, &samples);
    add("pair-position-exhaustive-control", true, d, samples,
        "identity permutation; must leak positions");
  }
  {
    long samples = 0;
    const double d = update_value_deviation(cfg, fq, f, alpha, false,
                                            &samples);
    add("update-value-exhaustive", false, d, samples,
        "update multisets identical for every delta");
  }
  {
    long samples = 0;
    const double d = update_value_deviation(cfg, fq, f, alpha, true,
                                            &samples);
    add("update-value-exhaustive-control", true, d, samples,
        "combining noise zeroed; must leak deltas");
  }
  {
    long samples = 0;
    const double d = storage_value_deviation(cfg, fq, f, alpha, false,
                                             &samples);
    add("storage-value-exhaustive", false, d, samples,
        "stored-symbol multisets identical for every plaintext");
  }
  {
    long samples = 0;
    const double d = storage_value_deviation(cfg, fq, f, alpha, true,
                                             &samples);
    add("storage-value-exhaustive-control", true, d, samples,
        "storage noise zeroed; must leak plaintext");
  }
  return report;
}

AuditReport run_statistical_audits(const StatisticalConfig& cfg) {
  const ValidatedParams params = ValidatedParams::validate(cfg.system);
  if (params.nonzero_subpackets() < 1) {
    throw ValidationError({"statistical audit needs P*r >= 1"});
  }
  // The fixed true index set whose permuted image must look uniform.
  std::vector<int> fixed_b(params.nonzero_subpackets());
  std::iota(fixed_b.begin(), fixed_b.end(), 1);

  constexpr int kPositiveChecks = 4;
  const double threshold = cfg.alpha_level / kPositiveChecks;
  const std::uint64_t q = params.modulus();

  const StatisticalSamples honest =
      collect_samples(params, fixed_b, cfg.trials, NoiseControls{});

  auto p_check = [&](const std::string& name, bool control, double p,
                     long samples, std::string note = "") {
    AuditCheck check;
    check.name = name;
    check.negative_control = control;
    check.statistic = p;
    check.threshold = threshold;
    check.pass = p >= threshold;
    check.samples = samples;
    check.note = std::move(note);
    return check;
  };
  std::string value_note;
  if (q > 64) {
    value_note = "values binned into 64 residue classes";
  }
  std::string low_note;
  if (honest.trials / static_cast<long>(q) < 50) {
    low_note = "low samples per bin";
  }

  AuditReport report;
  report.checks.push_back(p_check(
      "query-homogeneity", false,
      homogeneity_p_value(honest.query_theta1, honest.query_theta2),
      honest.trials, low_note));
  report.checks.push_back(
      p_check("position-uniformity", false,
              uniformity_p_value(honest.positions),
              honest.trials * static_cast<long>(fixed_b.size()), ""));
  report.checks.push_back(
      p_check("update-value-uniformity", false, value_uniformity_p(honest),
              honest.trials * static_cast<long>(fixed_b.size()), value_note));
  report.checks.push_back(p_check(
      "storage-homogeneity", false,
      homogeneity_p_value(honest.storage_low_w, honest.storage_high_w),
      honest.trials, low_note));

  // Negative controls: one sabotage each; the targeted check must fail.
  {
    NoiseControls controls;
    controls.zero_query_noise = true;
    const StatisticalSamples leaky =
        collect_samples(params, fixed_b, cfg.control_trials, controls);
    report.checks.push_back(p_check(
        "query-homogeneity-control", true,
        homogeneity_p_value(leaky.query_theta1, leaky.query_theta2),
        leaky.trials, "query noise zeroed; must leak theta"));
  }
  {
    NoiseControls controls;
    controls.identity_permutation = true;
    const StatisticalSamples leaky =
        collect_samples(params, fixed_b, cfg.control_trials, controls);
    report.checks.push_back(
        p_check("position-uniformity-control", true,
                uniformity_p_value(leaky.positions),
                leaky.trials * static_cast<long>(fixed_b.size()),
                "identity permutation; must leak positions"));
  }
  {
    NoiseControls controls;
    controls.zero_update_noise = true;
    const StatisticalSamples leaky =
        collect_samples(params, fixed_b, cfg.control_trials, controls);
    report.checks.push_back(p_check(
        "update-value-uniformity-control", true, value_uniformity_p(leaky),
        leaky.trials * static_cast<long>(fixed_b.size()),
        "combining noise zeroed; must leak deltas"));
  }
  {
    NoiseControls controls;
    controls.zero_storage_noise = true;
    const StatisticalSamples leaky =
        collect_samples(params, fixed_b, cfg.control_trials, controls);
    report.checks.push_back(p_check(
        "storage-homogeneity-control", true,
        homogeneity_p_value(leaky.storage_low_w, leaky.storage_high_w),
        leaky.trials, "storage noise zeroed; must leak plaintext"));
  }
  return report;
}

}  // namespace pruw
