#ifndef PRUW_DATABASE_HPP_
#define PRUW_DATABASE_HPP_

#include <map>
#include <utility>
#include <vector>

#include "pruw/field.hpp"
#include "pruw/params.hpp"

namespace pruw {

/// A reading-phase query for one database: M*ell symbols laid out as ell
/// stacked blocks of M (block k covers flat indices (k-1)*M .. k*M-1). The
/// same noise realization backs the queries of all N databases; only the
/// 1/(f_k - alpha_n) scaling differs.
struct ReadQuery {
  FieldVector elements;
};

/// One writing-phase (update, position) pair. position is the permuted
/// subpacket index in {1..P}, 1-based; update is the combined noisy symbol.
struct WritePair {
  FieldElement update = 0;
  int position = 0;
};

/// One simulated non-colluding database. Holds its noisy storage share, its
/// permutation-reversing matrix, and per-round protocol state (queries,
/// collected write pairs, the advertised permuted index set V~).
class Database {
 public:
  Database(const ValidatedParams& params, int index, FieldMatrix reversing,
           std::vector<FieldVector> storage);

  int index() const { return index_; }

  /// Starts round t. Round 1 advertises every subpacket (all of {1..P});
  /// later rounds advertise the set computed by the previous close_round.
  void begin_round(int round);

  /// Permuted indices updated last round, sorted ascending. Valid between
  /// begin_round and close_round.
  const std::vector<int>& current_v_tilde() const;

  /// Stores the round query of a client. Each client may send exactly one
  /// query per round.
  void receive_query(int client_id, ReadQuery query);
  const ReadQuery& query_of(int client_id) const;

  /// Answer symbol for one advertised entry: the inner product of storage
  /// with the stacked query built from column v_entry of the reversing
  /// matrix (subpacket s's segment is R_n(s, v_entry) * query).
  FieldElement answer_read(const ReadQuery& query, int v_entry) const;

  /// Accepts a writer's pairs after validating: exactly P*r pairs, distinct
  /// in-range positions, one submission per writer. Mutates nothing else;
  /// storage changes happen at apply_writes.
  void collect_write(int writer_id, std::vector<WritePair> pairs);

  /// Builds the P-vector U~ from pairs and reverses the permutation
  /// noisily: returns T = R_n * U~.
  FieldVector reorder_updates(const std::vector<WritePair>& pairs) const;

  /// Folds one reordered update vector into storage using the writer's own
  /// round query: subpacket s gains T(s) * (D_n * query) where D_n scales
  /// block k by (f_k - alpha_n).
  void apply_write(const FieldVector& reordered, const ReadQuery& query);

  /// Applies every collected write in ascending writer id order.
  void apply_writes();

  /// Ends the round: computes next round's V~ from the union of collected
  /// pair positions (truncated under r_prime_cap by update count, ties to
  /// the lower index), clears round state, and returns the new set.
  std::vector<int> close_round();

  /// Discards all round state as if no write happened: next round
  /// advertises the empty set. Used for rollback after a failed barrier.
  void abort_round();

  /// Storage share of subpacket s (1-based): M*ell symbols.
  const FieldVector& subpacket(int s) const;
  int subpacket_count() const { return static_cast<int>(storage_.size()); }
  const FieldMatrix& reversing_matrix() const { return reversing_; }

  /// Fault injection for tests: adds delta to one stored symbol.
  void corrupt_entry(int s, int flat_index, FieldElement delta);

  struct Snapshot {
    std::vector<FieldVector> storage;
  };
  Snapshot snapshot() const { return Snapshot{storage_}; }
  void restore(const Snapshot& snap) { storage_ = snap.storage; }

 private:
  std::vector<std::pair<int, int>> v_cap_order(
      const std::map<int, int>& touch_counts) const;

  ValidatedParams params_;
  int index_;
  FieldMatrix reversing_;
  std::vector<FieldVector> storage_;  // storage_[s-1], each M*ell symbols
  FieldVector d_scales_;              // diag of D_n: (f_k - alpha_n) per block

  int round_ = 0;
  std::vector<int> v_tilde_;
  std::vector<int> next_v_tilde_;
  std::map<int, ReadQuery> round_queries_;
  std::map<int, std::vector<WritePair>> round_writes_;
};

}  // namespace pruw

#endif  // PRUW_DATABASE_HPP_
