#include "pruw/driver.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <utility>

#include "pruw/audit.hpp"
#include "pruw/error.hpp"

namespace pruw {

namespace {

std::vector<int> to_int_list(const std::string& key,
                             const std::string& value) {
  std::vector<int> out;
  std::istringstream parts(value);
  std::string item;
  while (std::getline(parts, item, ',')) {
    try {
      std::size_t pos = 0;
      const int v = std::stoi(item, &pos);
      while (pos < item.size() && (item[pos] == ' ' || item[pos] == '\t')) {
        ++pos;
      }
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("invalid integer list for " + key + ": " + value);
    }
  }
  if (out.empty()) {
    throw ConfigError("empty list for " + key);
  }
  return out;
}

std::string fmt_double(double v) {
  std::ostringstream out;
  out << std::setprecision(10) << v;
  return out.str();
}

}  // namespace

RunConfig run_config_from_text(const std::string& text) {
  const std::map<std::string, std::string> kv = parse_key_values(text);
  std::vector<std::string> consumed;
  RunConfig config;
  config.system = params_from_key_values(kv, &consumed);

  auto take = [&](const std::string& key) -> const std::string* {
    const auto it = kv.find(key);
    if (it == kv.end()) return nullptr;
    consumed.push_back(key);
    return &it->second;
  };
  auto take_int = [&](const std::string& key, int* out) {
    if (const std::string* v = take(key)) {
      try {
        *out = std::stoi(*v);
      } catch (const std::exception&) {
        throw ConfigError("invalid integer for " + key + ": " + *v);
      }
    }
  };
  take_int("rounds", &config.rounds);
  take_int("writers_per_round", &config.writers_per_round);
  if (const std::string* v = take("thetas")) {
    config.thetas = to_int_list("thetas", *v);
  }
  if (const std::string* v = take("permutation")) {
    config.permutation = to_int_list("permutation", *v);
  }
  if (const std::string* v = take("update_pattern")) {
    config.update_pattern = to_int_list("update_pattern", *v);
  }
  if (const std::string* v = take("trials")) {
    try {
      config.trials = std::stol(*v);
    } catch (const std::exception&) {
      throw ConfigError("invalid integer for trials: " + *v);
    }
  }
  if (const std::string* v = take("verify")) {
    if (*v != "0" && *v != "1") {
      throw ConfigError("verify must be 0 or 1");
    }
    config.verify = *v == "1";
  }

  for (const auto& [key, value] : kv) {
    (void)value;
    if (std::find(consumed.begin(), consumed.end(), key) == consumed.end()) {
      throw ConfigError("unknown key: " + key);
    }
  }
  if (config.rounds < 1) {
    throw ConfigError("rounds must be at least 1");
  }
  if (config.writers_per_round < 0 ||
      config.writers_per_round > static_cast<int>(config.thetas.size())) {
    throw ConfigError("writers_per_round must lie in [0, clients]");
  }
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return run_config_from_text(text.str());
}

RunOutcome execute_run(Orchestrator& orch, const RunConfig& config) {
  std::optional<SparseUpdate> pattern_template;
  if (config.update_pattern.has_value()) {
    std::vector<int> b_set = *config.update_pattern;
    std::sort(b_set.begin(), b_set.end());
    if (static_cast<int>(b_set.size()) !=
        orch.params().nonzero_subpackets()) {
      throw ConfigError("update_pattern must list exactly P*r positions");
    }
    pattern_template = SparseUpdate{std::move(b_set), {}};
  }

  RunOutcome outcome;
  for (int t = 1; t <= config.rounds; ++t) {
    RoundPlan plan;
    plan.verify = config.verify;
    for (int id = 1; id <= config.writers_per_round; ++id) {
      WriterPlan writer;
      writer.client_id = id;
      if (pattern_template.has_value()) {
        // Pin the true index set; keep the client's round-random deltas.
        SparseUpdate update = orch.client(id).random_update(t);
        update.b_set = pattern_template->b_set;
        writer.forced = std::move(update);
      }
      plan.writers.push_back(std::move(writer));
    }
    RoundReport report = orch.run_round(plan);
    outcome.all_decodes_ok = outcome.all_decodes_ok && report.decode_ok;
    if (report.verification.has_value()) {
      outcome.all_verified = outcome.all_verified && report.verification->ok;
    }
    outcome.all_costs_match = outcome.all_costs_match &&
                              report.costs.read_match &&
                              report.costs.write_match;
    outcome.reports.push_back(std::move(report));
  }
  return outcome;
}

void write_costs_csv(const std::vector<RoundReport>& reports,
                     const ValidatedParams& params, std::ostream& out) {
  out << "round,phase,participants,v_size,rate,wire,formula_base,"
         "formula_log_coeff,theory_base,theory_log_coeff,match,slack,"
         "formula_value,baseline\n";
  const Rational baseline = no_sparsification_baseline(params.databases());
  const double log_q_p = params.log_q_p();
  for (const RoundReport& r : reports) {
    const CostReport& c = r.costs;
    out << r.round << ",read," << r.readers << ',' << c.v_size << ','
        << c.r_prime.str() << ',' << c.read_wire.str() << ','
        << c.read_measured.base.str() << ',' << c.read_measured.log_coeff.str()
        << ',' << c.read_theory.base.str() << ','
        << c.read_theory.log_coeff.str() << ','
        << (c.read_match ? "yes" : "no") << ',' << fmt_double(c.read_slack)
        << ',' << fmt_double(c.read_measured.value(log_q_p)) << ','
        << baseline.str() << '\n';
    out << r.round << ",write," << r.writers << ',' << c.v_size << ','
        << params.uplink_rate().str() << ',' << c.write_wire.str() << ','
        << c.write_measured.base.str() << ','
        << c.write_measured.log_coeff.str() << ','
        << c.write_theory.base.str() << ','
        << c.write_theory.log_coeff.str() << ','
        << (c.write_match ? "yes" : "no") << ',' << fmt_double(c.write_slack)
        << ',' << fmt_double(c.write_measured.value(log_q_p)) << ','
        << baseline.str() << '\n';
  }
}

void write_verification_csv(const std::vector<RoundReport>& reports,
                            std::ostream& out) {
  out << "round,ok,first_mismatch_m,first_mismatch_s,first_mismatch_k\n";
  for (const RoundReport& r : reports) {
    if (!r.verification.has_value()) {
      out << r.round << ",skipped,,,\n";
    } else if (r.verification->ok) {
      out << r.round << ",yes,,,\n";
    } else {
      out << r.round << ",no," << r.verification->m << ','
          << r.verification->s << ',' << r.verification->k << '\n';
    }
  }
}

namespace {

Orchestrator make_orchestrator(const RunConfig& config,
                               const NoiseControls& controls) {
  const ValidatedParams params = ValidatedParams::validate(config.system);
  std::optional<Permutation> forced;
  if (config.permutation.has_value()) {
    forced = Permutation(*config.permutation);
  }
  Orchestrator orch(params, controls, forced);
  for (int theta : config.thetas) {
    orch.add_client(theta);
  }
  return orch;
}

int run_summary(const RunOutcome& outcome, std::ostream& log) {
  for (const RoundReport& r : outcome.reports) {
    log << "round " << r.round << ": |V~|=" << r.costs.v_size
        << " decode=" << (r.decode_ok ? "ok" : "MISMATCH")
        << " read=" << fmt_double(r.costs.read_wire.to_double())
        << " (match=" << (r.costs.read_match ? "yes" : "no") << ")"
        << " write=" << fmt_double(r.costs.write_wire.to_double())
        << " (match=" << (r.costs.write_match ? "yes" : "no") << ")";
    if (r.verification.has_value()) {
      if (r.verification->ok) {
        log << " verify=ok";
      } else {
        log << " verify=FAIL(m=" << r.verification->m
            << ",s=" << r.verification->s << ",k=" << r.verification->k
            << ")";
      }
    }
    log << '\n';
  }
  const bool ok = outcome.all_decodes_ok && outcome.all_verified &&
                  outcome.all_costs_match;
  log << (ok ? "run ok" : "run FAILED") << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int cmd_run(const RunConfig& config, const std::string& out_dir,
            const NoiseControls& controls, std::ostream& log) {
  Orchestrator orch = make_orchestrator(config, controls);
  const RunOutcome outcome = execute_run(orch, config);

  std::filesystem::create_directories(out_dir);
  const auto dir = std::filesystem::path(out_dir);
  {
    std::ofstream out(dir / "transcript.csv");
    orch.transcript().write_csv(out);
  }
  {
    std::ofstream out(dir / "costs.csv");
    write_costs_csv(outcome.reports, orch.params(), out);
  }
  {
    std::ofstream out(dir / "verification.csv");
    write_verification_csv(outcome.reports, out);
  }
  log << "wrote " << (dir / "transcript.csv").string() << ", "
      << (dir / "costs.csv").string() << ", "
      << (dir / "verification.csv").string() << '\n';
  return run_summary(outcome, log);
}

int cmd_verify(const RunConfig& config, const NoiseControls& controls,
               std::ostream& log) {
  RunConfig verified = config;
  verified.verify = true;
  Orchestrator orch = make_orchestrator(verified, controls);
  const RunOutcome outcome = execute_run(orch, verified);
  return run_summary(outcome, log);
}

int cmd_audit(const RunConfig& config, std::ostream& log) {
  AuditReport combined;
  bool ran_any = false;

  ExhaustiveConfig exhaustive;
  exhaustive.q = config.system.q;
  exhaustive.m_submodels = config.system.M;
  exhaustive.ell = config.system.ell;
  exhaustive.p_subpackets = config.system.P;
  exhaustive.b_count = std::max(
      1, static_cast<int>(config.system.P * config.system.r + 0.5));
  exhaustive.seed = config.system.seed;
  if (exhaustive_feasible(exhaustive)) {
    AuditReport report = run_exhaustive_audits(exhaustive);
    ran_any = true;
    for (AuditCheck& check : report.checks) {
      combined.checks.push_back(std::move(check));
    }
  } else {
    log << "# exhaustive audits skipped: enumeration exceeds 10^6 worlds\n";
  }

  try {
    StatisticalConfig stat;
    stat.system = config.system;
    stat.trials = config.trials;
    stat.control_trials = std::max<long>(500, config.trials / 5);
    AuditReport report = run_statistical_audits(stat);
    ran_any = true;
    for (AuditCheck& check : report.checks) {
      combined.checks.push_back(std::move(check));
    }
  } catch (const ValidationError& e) {
    log << "# statistical audits skipped: " << e.what() << '\n';
  }

  if (!ran_any) {
    log << "no audit mode applicable to this configuration\n";
    return 2;
  }
  log << "check,control,pass,statistic,threshold,samples,note\n";
  for (const AuditCheck& check : combined.checks) {
    log << check.name << ',' << (check.negative_control ? "yes" : "no") << ','
        << (check.pass ? "pass" : "fail") << ','
        << fmt_double(check.statistic) << ',' << fmt_double(check.threshold)
        << ',' << check.samples << ',' << check.note << '\n';
  }
  const bool ok = combined.suite_pass();
  log << (ok ? "audit suite ok"
             : "audit suite FAILED (a regular check failed or a negative "
               "control passed)")
      << '\n';
  return ok ? 0 : 1;
}

int cmd_costs(const RunConfig& config, std::ostream& log) {
  const ValidatedParams params = ValidatedParams::validate(config.system);
  const double log_q_p = params.log_q_p();
  const Rational baseline = no_sparsification_baseline(params.databases());
  log << "# N=" << params.databases() << " P=" << params.subpackets()
      << " q=" << params.modulus() << " log_q(P)=" << fmt_double(log_q_p)
      << " baseline=" << baseline.str() << " per phase\n";
  log << "rate,read_cost,write_cost\n";
  for (int step = 0; step <= 10; ++step) {
    const Rational rate(step, 10);
    const CostExpr read = theoretical_read_cost(params, rate);
    const double write = write_cost_value(params.databases(),
                                          rate.to_double(), log_q_p);
    log << rate.str() << ',' << fmt_double(read.value(log_q_p)) << ','
        << fmt_double(write) << '\n';
  }
  log << "# configured r=" << params.uplink_rate().str() << " write_cost="
      << fmt_double(theoretical_write_cost(params).value(log_q_p)) << '\n';
  return 0;
}

}  // namespace pruw
