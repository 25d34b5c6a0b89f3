#ifndef PRUW_DRIVER_HPP_
#define PRUW_DRIVER_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pruw/orchestrator.hpp"
#include "pruw/params.hpp"
#include "pruw/sabotage.hpp"

namespace pruw {

/// A full run description, loadable from a `key = value` config file.
/// System keys: schema_version (must be 1), q, n_databases, m_submodels,
/// p_subpackets, r, seed, plus optional ell, l_symbols, r_prime_cap, f,
/// alpha. Run keys: rounds, thetas (comma list, one client each),
/// writers_per_round, permutation (forced, comma list), update_pattern
/// (forced true positions for every writer), trials (audits), verify (0/1).
struct RunConfig {
  SystemParams system;
  int rounds = 1;
  std::vector<int> thetas = {1};
  int writers_per_round = 1;
  std::optional<std::vector<int>> permutation;
  std::optional<std::vector<int>> update_pattern;
  long trials = 10000;
  bool verify = true;
};

RunConfig run_config_from_text(const std::string& text);
RunConfig load_run_config(const std::string& path);

/// Executes the configured rounds on a fresh orchestrator. Writers are the
/// first writers_per_round clients each round; a forced update_pattern
/// pins every writer's true index set (deltas stay client-random).
struct RunOutcome {
  std::vector<RoundReport> reports;
  bool all_decodes_ok = true;
  bool all_verified = true;
  bool all_costs_match = true;
};

RunOutcome execute_run(Orchestrator& orch, const RunConfig& config);

void write_costs_csv(const std::vector<RoundReport>& reports,
                     const ValidatedParams& params, std::ostream& out);
void write_verification_csv(const std::vector<RoundReport>& reports,
                            std::ostream& out);

/// CLI entry points. Each prints human-readable progress to log and
/// returns a process exit code (0 on success).
int cmd_run(const RunConfig& config, const std::string& out_dir,
            const NoiseControls& controls, std::ostream& log);
int cmd_verify(const RunConfig& config, const NoiseControls& controls,
               std::ostream& log);
int cmd_audit(const RunConfig& config, std::ostream& log);
int cmd_costs(const RunConfig& config, std::ostream& log);

}  // namespace pruw

#endif  // PRUW_DRIVER_HPP_
