#ifndef PRUW_ORCHESTRATOR_HPP_
#define PRUW_ORCHESTRATOR_HPP_

#include <optional>
#include <vector>

#include "pruw/client.hpp"
#include "pruw/coordinator.hpp"
#include "pruw/database.hpp"
#include "pruw/params.hpp"
#include "pruw/rational.hpp"
#include "pruw/sabotage.hpp"
#include "pruw/transcript.hpp"

namespace pruw {

/// One planned writer for a round. Without a forced update the client draws
/// its own random sparse update for the round.
struct WriterPlan {
  int client_id = 0;
  std::optional<SparseUpdate> forced;
};

struct RoundPlan {
  std::vector<WriterPlan> writers;
  bool verify = true;  // full storage-vs-oracle check after the round
};

/// Cost meter readout for one round. "measured" costs come from the ledger
/// in formula mode (positions at log_q P); "wire" costs count whole
/// symbols; "theory" is the closed form at this round's realized rates.
/// match flags are exact rational comparisons, slack is wire minus formula
/// value in symbols per model symbol.
struct CostReport {
  int v_size = 0;
  Rational r_prime;
  Rational query_upload;

  CostExpr read_measured;
  CostExpr read_theory;
  Rational read_wire;
  bool read_match = false;
  double read_slack = 0.0;

  CostExpr write_measured;
  CostExpr write_theory;
  Rational write_wire;
  bool write_match = false;
  double write_slack = 0.0;
};

/// Outcome of a full storage check: decode every subpacket of every
/// submodel through fresh unmetered queries and compare with the oracle.
/// On failure, (m, s, k) names the first mismatching symbol, 1-based.
struct VerifyResult {
  bool ok = true;
  int m = 0;
  int s = 0;
  int k = 0;
};

struct RoundReport {
  int round = 0;
  std::vector<int> v_tilde;
  int readers = 0;
  int writers = 0;

  bool decode_ok = true;  // every reader matched the oracle pre-write state
  int first_bad_client = 0;
  int first_bad_entry = 0;  // permuted position of the first bad decode

  CostReport costs;
  std::optional<VerifyResult> verification;
};

/// Drives full protocol rounds over coordinator-planted databases and
/// registered clients: advertises V~, meters queries/answers, decodes and
/// checks every reader, applies writes at a barrier (rolling storage back
/// if any write is rejected), maintains the plaintext oracle, and closes
/// the round. All messages flow through the transcript and cost ledger.
class Orchestrator {
 public:
  explicit Orchestrator(
      const ValidatedParams& params, NoiseControls controls = {},
      const std::optional<Permutation>& forced_permutation = std::nullopt);

  /// Registers a client for the given submodel; returns its id (1-based,
  /// assigned in registration order).
  int add_client(int theta);

  RoundReport run_round(const RoundPlan& plan);

  VerifyResult verify_storage() const;

  int round() const { return round_; }
  int client_count() const { return static_cast<int>(clients_.size()); }
  const ClientSession& client(int id) const { return clients_.at(id - 1); }
  Database& database(int n) { return setup_.databases.at(n - 1); }
  const Database& database(int n) const { return setup_.databases.at(n - 1); }
  const Permutation& permutation() const { return setup_.permutation; }
  const std::vector<FieldVector>& oracle() const { return oracle_; }
  const Transcript& transcript() const { return transcript_; }
  const CostLedger& ledger() const { return ledger_; }
  const ValidatedParams& params() const { return params_; }

 private:
  void log(TranscriptRecord record);

  ValidatedParams params_;
  NoiseControls controls_;
  SetupResult setup_;
  std::vector<ClientSession> clients_;
  std::vector<FieldVector> oracle_;  // plaintext submodels, ground truth
  Transcript transcript_;
  CostLedger ledger_;
  int round_ = 0;
};

}  // namespace pruw

#endif  // PRUW_ORCHESTRATOR_HPP_
