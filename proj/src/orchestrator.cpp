#include "pruw/orchestrator.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "pruw/error.hpp"
#include "pruw/rng.hpp"

namespace pruw {

namespace {

std::string join_positions(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += '|';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string client_name(int id) { return "client " + std::to_string(id); }
std::string db_name(int n) { return "db " + std::to_string(n); }

}  // namespace

Orchestrator::Orchestrator(
    const ValidatedParams& params, NoiseControls controls,
    const std::optional<Permutation>& forced_permutation)
    : params_(params),
      controls_(controls),
      setup_(coordinator_setup(params, controls, forced_permutation)),
      oracle_(setup_.submodels),
      ledger_(params) {}

int Orchestrator::add_client(int theta) {
  if (round_ != 0) {
    throw ProtocolError("clients must register before the first round");
  }
  const int id = static_cast<int>(clients_.size()) + 1;
  clients_.emplace_back(params_, id, theta, setup_.permutation, controls_);
  return id;
}

void Orchestrator::log(TranscriptRecord record) {
  ledger_.add(record);
  transcript_.append(std::move(record));
}

RoundReport Orchestrator::run_round(const RoundPlan& plan) {
  if (clients_.empty()) {
    throw ProtocolError("cannot run a round without clients");
  }
  const int t = round_ + 1;
  for (Database& db : setup_.databases) {
    db.begin_round(t);
  }
  round_ = t;

  RoundReport report;
  report.round = t;
  report.v_tilde = database(1).current_v_tilde();
  for (int n = 2; n <= params_.databases(); ++n) {
    if (database(n).current_v_tilde() != report.v_tilde) {
      throw ProtocolError("databases disagree on the advertised set");
    }
  }
  const std::vector<int>& v = report.v_tilde;
  const std::string v_detail = "v=" + join_positions(v);
  report.readers = client_count();

  // Reading phase. The designated database (db 1) broadcasts V~ padded to
  // P position slots; every client sends its round query everywhere.
  const long query_symbols =
      static_cast<long>(params_.submodels()) * params_.subpacket_symbols();
  std::vector<std::vector<ReadQuery>> queries;  // queries[id-1][n-1]
  for (const ClientSession& c : clients_) {
    log({t, "read", db_name(1), client_name(c.id()), "v_tilde", 0,
         params_.subpackets(), v_detail});
    queries.push_back(c.round_queries(t));
    for (int n = 1; n <= params_.databases(); ++n) {
      log({t, "read", client_name(c.id()), db_name(n), "query", query_symbols,
           0, ""});
      database(n).receive_query(c.id(), queries.back()[n - 1]);
    }
  }

  // Answers: one symbol per advertised entry per database. The designated
  // database also tags each answer with its permuted position so readers
  // can associate answers with entries.
  for (const ClientSession& c : clients_) {
    const std::vector<int> natural = c.true_positions(v);
    for (std::size_t j = 0; j < v.size(); ++j) {
      std::vector<FieldElement> answers(params_.databases());
      for (int n = 1; n <= params_.databases(); ++n) {
        answers[n - 1] =
            database(n).answer_read(database(n).query_of(c.id()), v[j]);
        log({t, "read", db_name(n), client_name(c.id()), "answer", 1,
             n == 1 ? 1 : 0, n == 1 ? "v=" + std::to_string(v[j]) : ""});
      }
      const std::vector<FieldElement> decoded = c.decode_subpacket(answers);
      // Check against the oracle before this round's writes land.
      const int s = natural[j];
      for (int k = 1; k <= params_.subpacket_symbols(); ++k) {
        const FieldElement expected =
            oracle_[c.theta() - 1]
                   [(s - 1) * params_.subpacket_symbols() + (k - 1)];
        if (decoded[k - 1] != expected && report.decode_ok) {
          report.decode_ok = false;
          report.first_bad_client = c.id();
          report.first_bad_entry = v[j];
        }
      }
    }
  }

  // Writing phase, applied at a barrier. Any rejection rolls storage back
  // and voids the round's writes everywhere.
  std::vector<WriterPlan> writers = plan.writers;
  std::sort(writers.begin(), writers.end(),
            [](const WriterPlan& a, const WriterPlan& b) {
              return a.client_id < b.client_id;
            });
  report.writers = static_cast<int>(writers.size());
  std::vector<Database::Snapshot> snapshots;
  snapshots.reserve(params_.databases());
  for (int n = 1; n <= params_.databases(); ++n) {
    snapshots.push_back(database(n).snapshot());
  }
  std::vector<std::pair<int, SparseUpdate>> applied;
  try {
    for (const WriterPlan& w : writers) {
      const ClientSession& c = client(w.client_id);
      const SparseUpdate update =
          w.forced.has_value() ? *w.forced : c.random_update(t);
      for (int n = 1; n <= params_.databases(); ++n) {
        std::vector<WritePair> pairs = c.write_pairs_for(update, n, t);
        std::vector<int> positions;
        positions.reserve(pairs.size());
        for (const WritePair& pair : pairs) {
          positions.push_back(pair.position);
        }
        log({t, "write", client_name(c.id()), db_name(n), "write_pairs",
             static_cast<long>(pairs.size()),
             static_cast<int>(pairs.size()),
             "pos=" + join_positions(positions)});
        database(n).collect_write(c.id(), std::move(pairs));
      }
      applied.emplace_back(w.client_id, update);
    }
    for (int n = 1; n <= params_.databases(); ++n) {
      database(n).apply_writes();
    }
  } catch (...) {
    for (int n = 1; n <= params_.databases(); ++n) {
      database(n).restore(snapshots[n - 1]);
      database(n).abort_round();
    }
    throw;
  }

  // Mirror the successful writes into the plaintext oracle.
  const Fq fq = params_.fq();
  for (const auto& [writer_id, update] : applied) {
    const int theta = client(writer_id).theta();
    for (std::size_t j = 0; j < update.b_set.size(); ++j) {
      const int s = update.b_set[j];
      for (int k = 1; k <= params_.subpacket_symbols(); ++k) {
        FieldElement& slot =
            oracle_[theta - 1]
                   [(s - 1) * params_.subpacket_symbols() + (k - 1)];
        slot = fq.add(slot, update.deltas[j][k - 1]);
      }
    }
  }

  std::vector<int> next_v = database(1).close_round();
  for (int n = 2; n <= params_.databases(); ++n) {
    if (database(n).close_round() != next_v) {
      throw ProtocolError("databases disagree on the next advertised set");
    }
  }

  // Cost meter readout for the round.
  CostReport& costs = report.costs;
  costs.v_size = static_cast<int>(v.size());
  costs.r_prime = Rational(costs.v_size, params_.subpackets());
  costs.query_upload = ledger_.query_upload(t, report.readers);
  costs.read_measured = ledger_.read_cost(t, report.readers);
  costs.read_theory = theoretical_read_cost(params_, costs.r_prime);
  costs.read_wire = ledger_.read_cost_wire(t, report.readers);
  costs.read_match = costs.read_measured == costs.read_theory;
  costs.read_slack =
      costs.read_wire.to_double() - costs.read_measured.value(params_.log_q_p());
  if (report.writers > 0) {
    costs.write_measured = ledger_.write_cost(t, report.writers);
    costs.write_theory = theoretical_write_cost(params_);
    costs.write_wire = ledger_.write_cost_wire(t, report.writers);
  }
  costs.write_match = costs.write_measured == costs.write_theory ||
                      report.writers == 0;
  costs.write_slack = costs.write_wire.to_double() -
                      costs.write_measured.value(params_.log_q_p());

  if (plan.verify) {
    report.verification = verify_storage();
  }
  return report;
}

VerifyResult Orchestrator::verify_storage() const {
  const Fq fq = params_.fq();
  for (int m = 1; m <= params_.submodels(); ++m) {
    // Fresh unmetered verification queries, one noise draw shared by all
    // databases, keyed so repeated checks stay independent.
    RngStream rng(params_.seed(), "verify",
                  static_cast<std::uint64_t>(round_),
                  static_cast<std::uint64_t>(m));
    std::vector<FieldVector> noise;
    for (int k = 1; k <= params_.subpacket_symbols(); ++k) {
      noise.emplace_back(
          params_.modulus(),
          rng.field_vector(params_.modulus(),
                           static_cast<std::size_t>(params_.submodels())));
    }
    std::vector<ReadQuery> queries;
    for (int n = 1; n <= params_.databases(); ++n) {
      queries.push_back(make_read_query(fq, params_.submodels(), m,
                                        params_.f_all(), params_.alpha(n),
                                        noise));
    }
    for (int s = 1; s <= params_.subpackets(); ++s) {
      const int v_entry = setup_.permutation.invert(s);
      std::vector<FieldElement> answers(params_.databases());
      for (int n = 1; n <= params_.databases(); ++n) {
        answers[n - 1] = database(n).answer_read(queries[n - 1], v_entry);
      }
      const std::vector<FieldElement> decoded =
          decode_subpacket(params_, answers);
      for (int k = 1; k <= params_.subpacket_symbols(); ++k) {
        const FieldElement expected =
            oracle_[m - 1][(s - 1) * params_.subpacket_symbols() + (k - 1)];
        if (decoded[k - 1] != expected) {
          return VerifyResult{false, m, s, k};
        }
      }
    }
  }
  return VerifyResult{};
}

}  // namespace pruw
