#include "pruw/transcript.hpp"

#include <ostream>
#include <utility>

#include "pruw/error.hpp"

namespace pruw {

namespace {

// detail fields use '|' separators and contain no commas; keep CSV simple.
std::string csv_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    out += (c == ',' || c == '\n') ? ';' : c;
  }
  return out;
}

}  // namespace

void Transcript::append(TranscriptRecord record) {
  if (record.phase != "read" && record.phase != "write") {
    throw ProtocolError("transcript phase must be read or write");
  }
  if (record.symbols < 0 || record.positions < 0) {
    throw ProtocolError("transcript counts must be nonnegative");
  }
  records_.push_back(std::move(record));
}

std::string Transcript::csv_header() {
  return "round,phase,from,to,kind,symbols,positions,detail";
}

void Transcript::write_csv(std::ostream& out) const {
  out << csv_header() << '\n';
  for (const TranscriptRecord& r : records_) {
    out << r.round << ',' << r.phase << ',' << csv_escape(r.from) << ','
        << csv_escape(r.to) << ',' << r.kind << ',' << r.symbols << ','
        << r.positions << ',' << csv_escape(r.detail) << '\n';
  }
}

CostLedger::CostLedger(const ValidatedParams& params)
    : submodel_symbols_(params.submodel_symbols()),
      position_symbols_(params.position_symbols()) {}

void CostLedger::add(const TranscriptRecord& record) {
  const Key key{record.round, record.phase == "read",
                record.from.rfind("db", 0) == 0};
  Cell& cell = cells_[key];
  cell.symbols += record.symbols;
  cell.positions += record.positions;
}

CostLedger CostLedger::from_transcript(const ValidatedParams& params,
                                       const Transcript& transcript) {
  CostLedger ledger(params);
  for (const TranscriptRecord& r : transcript.records()) {
    ledger.add(r);
  }
  return ledger;
}

CostLedger::Cell CostLedger::cell(int round, const std::string& phase,
                                  bool downlink) const {
  const auto it = cells_.find(Key{round, phase == "read", downlink});
  return it == cells_.end() ? Cell{} : it->second;
}

CostExpr CostLedger::normalized(const Cell& c, int participants) const {
  CostExpr cost;
  if (participants <= 0) {
    return cost;
  }
  const Rational denom(submodel_symbols_ * participants);
  cost.base = Rational(c.symbols) / denom;
  cost.log_coeff = Rational(c.positions) / denom;
  return cost;
}

Rational CostLedger::normalized_wire(const Cell& c, int participants) const {
  if (participants <= 0) {
    return Rational(0);
  }
  return Rational(c.symbols + c.positions * position_symbols_) /
         Rational(submodel_symbols_ * participants);
}

CostExpr CostLedger::read_cost(int round, int readers) const {
  return normalized(cell(round, "read", true), readers);
}

Rational CostLedger::read_cost_wire(int round, int readers) const {
  return normalized_wire(cell(round, "read", true), readers);
}

CostExpr CostLedger::write_cost(int round, int writers) const {
  return normalized(cell(round, "write", false), writers);
}

Rational CostLedger::write_cost_wire(int round, int writers) const {
  return normalized_wire(cell(round, "write", false), writers);
}

Rational CostLedger::query_upload(int round, int readers) const {
  if (readers <= 0) {
    return Rational(0);
  }
  return Rational(cell(round, "read", false).symbols) /
         Rational(submodel_symbols_ * readers);
}

}  // namespace pruw
