#ifndef PRUW_TRANSCRIPT_HPP_
#define PRUW_TRANSCRIPT_HPP_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "pruw/params.hpp"
#include "pruw/rational.hpp"

namespace pruw {

/// One logged message. symbols counts plain field symbols; positions counts
/// subpacket indices, which occupy ceil(log_q P) wire symbols each but are
/// metered at log_q P in formula mode. detail carries database-visible
/// public content only (advertised sets, pair positions) -- never update
/// values, submodel indices, or the permutation.
struct TranscriptRecord {
  int round = 0;
  std::string phase;  // "read" | "write"
  std::string from;   // "client <id>" | "db <n>"
  std::string to;
  std::string kind;   // "v_tilde" | "query" | "answer" | "write_pairs"
  long symbols = 0;
  int positions = 0;
  std::string detail;
};

/// Append-only log of every message in a run, exportable as CSV.
class Transcript {
 public:
  void append(TranscriptRecord record);
  const std::vector<TranscriptRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  static std::string csv_header();
  void write_csv(std::ostream& out) const;

 private:
  std::vector<TranscriptRecord> records_;
};

/// Aggregated symbol/position counts per (round, phase, direction) cell.
/// Direction is derived from the sender: databases send downlink, clients
/// send uplink. Costs come out in two modes sharing the same cells:
///   wire    -- whole symbols, positions at ceil(log_q P) each, exact
///   formula -- positions at log_q P each, as base + coeff * log_q P
class CostLedger {
 public:
  explicit CostLedger(const ValidatedParams& params);

  void add(const TranscriptRecord& record);
  static CostLedger from_transcript(const ValidatedParams& params,
                                    const Transcript& transcript);

  struct Cell {
    long symbols = 0;
    long positions = 0;

    friend bool operator==(const Cell& a, const Cell& b) {
      return a.symbols == b.symbols && a.positions == b.positions;
    }
  };

  Cell cell(int round, const std::string& phase, bool downlink) const;

  /// Reading cost per reader (downlink cells only; query uplink is logged
  /// but not billed, matching the closed form).
  CostExpr read_cost(int round, int readers) const;
  Rational read_cost_wire(int round, int readers) const;

  /// Writing cost per writer (uplink write cells).
  CostExpr write_cost(int round, int writers) const;
  Rational write_cost_wire(int round, int writers) const;

  /// Unbilled query upload per reader, normalized by L.
  Rational query_upload(int round, int readers) const;

  friend bool operator==(const CostLedger& a, const CostLedger& b) {
    return a.cells_ == b.cells_;
  }

 private:
  struct Key {
    int round;
    bool read_phase;
    bool downlink;

    friend bool operator<(const Key& a, const Key& b) {
      if (a.round != b.round) return a.round < b.round;
      if (a.read_phase != b.read_phase) return a.read_phase < b.read_phase;
      return a.downlink < b.downlink;
    }
    friend bool operator==(const Key& a, const Key& b) {
      return a.round == b.round && a.read_phase == b.read_phase &&
             a.downlink == b.downlink;
    }
  };

  CostExpr normalized(const Cell& c, int participants) const;
  Rational normalized_wire(const Cell& c, int participants) const;

  long submodel_symbols_;
  int position_symbols_;
  std::map<Key, Cell> cells_;
};

}  // namespace pruw

#endif  // PRUW_TRANSCRIPT_HPP_
