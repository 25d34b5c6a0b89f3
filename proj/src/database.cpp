#include "pruw/database.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "pruw/error.hpp"

namespace pruw {

Database::Database(const ValidatedParams& params, int index,
                   FieldMatrix reversing, std::vector<FieldVector> storage)
    : params_(params),
      index_(index),
      reversing_(std::move(reversing)),
      storage_(std::move(storage)) {
  const int p = params_.subpackets();
  const std::size_t width = static_cast<std::size_t>(params_.submodels()) *
                            params_.subpacket_symbols();
  if (reversing_.rows != static_cast<std::size_t>(p) ||
      reversing_.cols != static_cast<std::size_t>(p)) {
    throw ProtocolError("reversing matrix must be P x P");
  }
  if (storage_.size() != static_cast<std::size_t>(p)) {
    throw ProtocolError("storage must hold P subpackets");
  }
  for (const FieldVector& sub : storage_) {
    if (sub.size() != width) {
      throw ProtocolError("each stored subpacket must hold M*ell symbols");
    }
  }
  // Diagonal of the scaling matrix D_n, expanded per flat symbol index.
  const Fq fq = params_.fq();
  d_scales_ = FieldVector(params_.modulus(), width);
  for (int k = 1; k <= params_.subpacket_symbols(); ++k) {
    const FieldElement s = fq.sub(params_.f(k), params_.alpha(index_));
    for (int m = 1; m <= params_.submodels(); ++m) {
      d_scales_[(k - 1) * params_.submodels() + (m - 1)] = s;
    }
  }
}

void Database::begin_round(int round) {
  if (round != round_ + 1) {
    throw ProtocolError("rounds must advance one at a time (expected " +
                        std::to_string(round_ + 1) + ", got " +
                        std::to_string(round) + ")");
  }
  round_ = round;
  if (round == 1) {
    // Nothing was written before round 1; every subpacket counts as fresh.
    v_tilde_.resize(params_.subpackets());
    std::iota(v_tilde_.begin(), v_tilde_.end(), 1);
  } else {
    v_tilde_ = next_v_tilde_;
  }
}

const std::vector<int>& Database::current_v_tilde() const {
  if (round_ == 0) {
    throw ProtocolError("no round in progress");
  }
  return v_tilde_;
}

void Database::receive_query(int client_id, ReadQuery query) {
  const std::size_t width = static_cast<std::size_t>(params_.submodels()) *
                            params_.subpacket_symbols();
  if (query.elements.size() != width ||
      query.elements.q != params_.modulus()) {
    throw ProtocolError("query must hold M*ell symbols modulo q");
  }
  if (!round_queries_.emplace(client_id, std::move(query)).second) {
    throw ProtocolError("client " + std::to_string(client_id) +
                        " already sent a query this round");
  }
}

const ReadQuery& Database::query_of(int client_id) const {
  const auto it = round_queries_.find(client_id);
  if (it == round_queries_.end()) {
    throw ProtocolError("no round query from client " +
                        std::to_string(client_id));
  }
  return it->second;
}

FieldElement Database::answer_read(const ReadQuery& query, int v_entry) const {
  if (v_entry < 1 || v_entry > params_.subpackets()) {
    throw ProtocolError("answer position " + std::to_string(v_entry) +
                        " out of range [1, " +
                        std::to_string(params_.subpackets()) + "]");
  }
  // Literal stacked-query evaluation: segment s of the stacked query is
  // R_n(s, v_entry) * query, and the answer is <storage, stacked query>.
  const Fq fq = params_.fq();
  FieldElement answer = 0;
  for (int s = 1; s <= params_.subpackets(); ++s) {
    const FieldElement coeff = reversing_.at(s - 1, v_entry - 1);
    const FieldVector segment = scale(coeff, query.elements);
    answer = fq.add(answer, inner_product(storage_[s - 1], segment));
  }
  return answer;
}

void Database::collect_write(int writer_id, std::vector<WritePair> pairs) {
  const int expected = params_.nonzero_subpackets();
  if (static_cast<int>(pairs.size()) != expected) {
    throw ProtocolError("writer " + std::to_string(writer_id) +
                        " must send exactly P*r = " +
                        std::to_string(expected) + " pairs, got " +
                        std::to_string(pairs.size()));
  }
  std::set<int> positions;
  for (const WritePair& pair : pairs) {
    if (pair.position < 1 || pair.position > params_.subpackets()) {
      throw ProtocolError("pair position " + std::to_string(pair.position) +
                          " out of range [1, " +
                          std::to_string(params_.subpackets()) + "]");
    }
    if (!positions.insert(pair.position).second) {
      throw ProtocolError("duplicate pair position " +
                          std::to_string(pair.position));
    }
  }
  if (!round_writes_.emplace(writer_id, std::move(pairs)).second) {
    throw ProtocolError("writer " + std::to_string(writer_id) +
                        " already submitted this round");
  }
}

FieldVector Database::reorder_updates(const std::vector<WritePair>& pairs)
    const {
  FieldVector u_tilde(params_.modulus(), params_.subpackets());
  for (const WritePair& pair : pairs) {
    u_tilde[pair.position - 1] = pair.update;
  }
  return matvec(reversing_, u_tilde);
}

void Database::apply_write(const FieldVector& reordered,
                           const ReadQuery& query) {
  if (reordered.size() != static_cast<std::size_t>(params_.subpackets())) {
    throw ProtocolError("reordered update must hold P symbols");
  }
  const Fq fq = params_.fq();
  // D_n * query, shared by every subpacket of this write.
  FieldVector scaled = query.elements;
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    scaled[i] = fq.mul(scaled[i], d_scales_[i]);
  }
  for (int s = 1; s <= params_.subpackets(); ++s) {
    const FieldVector h = scale(reordered[s - 1], scaled);
    storage_[s - 1] = add(storage_[s - 1], h);
  }
}

void Database::apply_writes() {
  // std::map iteration gives ascending writer ids, the agreed apply order.
  for (const auto& [writer_id, pairs] : round_writes_) {
    apply_write(reorder_updates(pairs), query_of(writer_id));
  }
}

std::vector<int> Database::close_round() {
  if (round_ == 0) {
    throw ProtocolError("no round in progress");
  }
  // Union of advertised positions, weighted by how many writers touched
  // each one (the weight only matters under a downlink cap).
  std::map<int, int> touch_counts;
  for (const auto& [writer_id, pairs] : round_writes_) {
    (void)writer_id;
    for (const WritePair& pair : pairs) {
      ++touch_counts[pair.position];
    }
  }
  std::vector<int> v;
  v.reserve(touch_counts.size());
  for (const auto& [position, count] : v_cap_order(touch_counts)) {
    (void)count;
    v.push_back(position);
  }
  std::sort(v.begin(), v.end());
  next_v_tilde_ = std::move(v);
  round_queries_.clear();
  round_writes_.clear();
  v_tilde_.clear();
  return next_v_tilde_;
}

void Database::abort_round() {
  round_queries_.clear();
  round_writes_.clear();
  v_tilde_.clear();
  next_v_tilde_.clear();
}

const FieldVector& Database::subpacket(int s) const {
  if (s < 1 || s > params_.subpackets()) {
    throw ProtocolError("subpacket index " + std::to_string(s) +
                        " out of range [1, " +
                        std::to_string(params_.subpackets()) + "]");
  }
  return storage_[s - 1];
}

void Database::corrupt_entry(int s, int flat_index, FieldElement delta) {
  FieldVector& sub = storage_.at(s - 1);
  sub[flat_index] = params_.fq().add(sub[flat_index], delta);
}

std::vector<std::pair<int, int>> Database::v_cap_order(
    const std::map<int, int>& touch_counts) const {
  std::vector<std::pair<int, int>> entries(touch_counts.begin(),
                                           touch_counts.end());
  if (!params_.v_cap().has_value() ||
      static_cast<int>(entries.size()) <= *params_.v_cap()) {
    return entries;
  }
  // Keep the most-updated positions, breaking ties toward lower indices.
  std::sort(entries.begin(), entries.end(),
            [](const std::pair<int, int>& a, const std::pair<int, int>& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  entries.resize(static_cast<std::size_t>(*params_.v_cap()));
  return entries;
}

}  // namespace pruw
