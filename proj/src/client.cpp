#include "pruw/client.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "pruw/error.hpp"
#include "pruw/rng.hpp"

namespace pruw {

ReadQuery make_read_query(const Fq& fq, int m_submodels, int theta,
                          const std::vector<FieldElement>& f,
                          FieldElement alpha_n,
                          const std::vector<FieldVector>& noise) {
  if (theta < 1 || theta > m_submodels) {
    throw ProtocolError("theta " + std::to_string(theta) +
                        " out of range [1, " + std::to_string(m_submodels) +
                        "]");
  }
  if (noise.size() != f.size()) {
    throw ProtocolError("query noise must hold ell blocks");
  }
  const int ell = static_cast<int>(f.size());
  ReadQuery query;
  query.elements = FieldVector(fq.modulus(),
                               static_cast<std::size_t>(m_submodels) * ell);
  for (int k = 1; k <= ell; ++k) {
    if (noise[k - 1].size() != static_cast<std::size_t>(m_submodels)) {
      throw ProtocolError("query noise block must hold M symbols");
    }
    const FieldElement pick = fq.inverse(fq.sub(f[k - 1], alpha_n));
    for (int m = 1; m <= m_submodels; ++m) {
      FieldElement v = noise[k - 1][m - 1];
      if (m == theta) {
        v = fq.add(v, pick);
      }
      query.elements[(k - 1) * m_submodels + (m - 1)] = v;
    }
  }
  return query;
}

FieldElement combine_update_at(const Fq& fq,
                               const std::vector<FieldElement>& f,
                               FieldElement alpha,
                               const std::vector<FieldElement>& deltas,
                               FieldElement z_hat) {
  const int ell = static_cast<int>(f.size());
  if (deltas.size() != f.size()) {
    throw ProtocolError("combined update needs ell deltas");
  }
  FieldElement total = 0;
  for (int i = 0; i < ell; ++i) {
    // deltas[i] / prod_{j!=i}(f_j - f_i) * prod_{j!=i}(f_j - alpha)
    FieldElement denom = 1;
    FieldElement numer = deltas[i];
    for (int j = 0; j < ell; ++j) {
      if (j == i) continue;
      denom = fq.mul(denom, fq.sub(f[j], f[i]));
      numer = fq.mul(numer, fq.sub(f[j], alpha));
    }
    total = fq.add(total, fq.mul(numer, fq.inverse(denom)));
  }
  FieldElement mask = z_hat;
  for (int j = 0; j < ell; ++j) {
    mask = fq.mul(mask, fq.sub(f[j], alpha));
  }
  return fq.add(total, mask);
}

std::vector<int> permuted_positions(const Permutation& perm,
                                    const std::vector<int>& b_set) {
  std::vector<int> out;
  out.reserve(b_set.size());
  for (int s : b_set) {
    out.push_back(perm.invert(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> true_positions(const Permutation& perm,
                                const std::vector<int>& v_tilde) {
  std::vector<int> out;
  out.reserve(v_tilde.size());
  for (int v : v_tilde) {
    out.push_back(perm.apply(v));
  }
  return out;
}

ClientSession::ClientSession(const ValidatedParams& params, int id, int theta,
                             Permutation permutation, NoiseControls controls)
    : params_(params),
      id_(id),
      theta_(theta),
      permutation_(std::move(permutation)),
      controls_(controls) {
  if (theta < 1 || theta > params_.submodels()) {
    throw ProtocolError("theta " + std::to_string(theta) +
                        " out of range [1, " +
                        std::to_string(params_.submodels()) + "]");
  }
  if (permutation_.size() != params_.subpackets()) {
    throw ProtocolError("permutation must act on {1..P}");
  }
}

std::vector<ReadQuery> ClientSession::round_queries(int round) const {
  const Fq fq = params_.fq();
  // One noise realization per (client, round), reused for every database.
  RngStream rng(params_.seed(), "client-query-noise",
                static_cast<std::uint64_t>(id_),
                static_cast<std::uint64_t>(round));
  std::vector<FieldVector> noise;
  noise.reserve(params_.subpacket_symbols());
  for (int k = 1; k <= params_.subpacket_symbols(); ++k) {
    FieldVector block(params_.modulus(),
                      static_cast<std::size_t>(params_.submodels()));
    if (!controls_.zero_query_noise) {
      block.e = rng.field_vector(params_.modulus(), block.size());
    }
    noise.push_back(std::move(block));
  }
  std::vector<ReadQuery> queries;
  queries.reserve(params_.databases());
  for (int n = 1; n <= params_.databases(); ++n) {
    queries.push_back(make_read_query(fq, params_.submodels(), theta_,
                                      params_.f_all(), params_.alpha(n),
                                      noise));
  }
  return queries;
}

std::vector<int> ClientSession::true_positions(
    const std::vector<int>& v_tilde) const {
  return pruw::true_positions(permutation_, v_tilde);
}

std::vector<FieldElement> decode_subpacket(
    const ValidatedParams& params, const std::vector<FieldElement>& answers) {
  const int n_count = params.databases();
  const int ell = params.subpacket_symbols();
  if (answers.size() != static_cast<std::size_t>(n_count)) {
    throw ProtocolError("decoding needs one answer per database");
  }
  const Fq fq = params.fq();
  // N = 4*ell+2 unknowns: the ell subpacket symbols followed by the
  // 3*ell+2 coefficients of the answer noise polynomial.
  FieldMatrix system(params.modulus(), n_count, n_count);
  for (int n = 1; n <= n_count; ++n) {
    const FieldElement a = params.alpha(n);
    for (int i = 1; i <= ell; ++i) {
      system.at(n - 1, i - 1) = fq.inverse(fq.sub(params.f(i), a));
    }
    FieldElement power = 1;
    for (int j = 0; j <= 3 * ell + 1; ++j) {
      system.at(n - 1, ell + j) = power;
      power = fq.mul(power, a);
    }
  }
  const FieldVector rhs(params.modulus(), answers);
  const FieldVector solution = solve_linear(system, rhs);
  return std::vector<FieldElement>(solution.e.begin(),
                                   solution.e.begin() + ell);
}

std::vector<FieldElement> ClientSession::decode_subpacket(
    const std::vector<FieldElement>& answers) const {
  return pruw::decode_subpacket(params_, answers);
}

SparseUpdate ClientSession::random_update(int round) const {
  RngStream rng(params_.seed(), "client-update",
                static_cast<std::uint64_t>(id_),
                static_cast<std::uint64_t>(round));
  const int b = params_.nonzero_subpackets();
  std::vector<int> all(params_.subpackets());
  std::iota(all.begin(), all.end(), 1);
  rng.shuffle(all);
  SparseUpdate update;
  update.b_set.assign(all.begin(), all.begin() + b);
  std::sort(update.b_set.begin(), update.b_set.end());
  for (int j = 0; j < b; ++j) {
    std::vector<FieldElement> symbols;
    do {
      symbols = rng.field_vector(params_.modulus(),
                                 params_.subpacket_symbols());
    } while (std::all_of(symbols.begin(), symbols.end(),
                         [](FieldElement v) { return v == 0; }));
    update.deltas.push_back(std::move(symbols));
  }
  return update;
}

SparseUpdate ClientSession::sparsify(const FieldVector& dense) const {
  if (dense.size() != static_cast<std::size_t>(params_.submodel_symbols()) ||
      dense.q != params_.modulus()) {
    throw ProtocolError("dense update must hold L symbols modulo q");
  }
  const int ell = params_.subpacket_symbols();
  std::vector<std::pair<int, int>> density;  // (nonzero count, subpacket)
  for (int s = 1; s <= params_.subpackets(); ++s) {
    int nonzeros = 0;
    for (int k = 0; k < ell; ++k) {
      if (dense[(s - 1) * ell + k] != 0) ++nonzeros;
    }
    density.emplace_back(nonzeros, s);
  }
  std::sort(density.begin(), density.end(),
            [](const std::pair<int, int>& a, const std::pair<int, int>& b) {
              if (a.first != b.first) return a.first > b.first;
              return a.second < b.second;
            });
  SparseUpdate update;
  update.b_set.reserve(params_.nonzero_subpackets());
  for (int j = 0; j < params_.nonzero_subpackets(); ++j) {
    update.b_set.push_back(density[j].second);
  }
  std::sort(update.b_set.begin(), update.b_set.end());
  for (int s : update.b_set) {
    update.deltas.emplace_back(dense.e.begin() + (s - 1) * ell,
                               dense.e.begin() + s * ell);
  }
  return update;
}

std::vector<WritePair> ClientSession::write_pairs_for(
    const SparseUpdate& update, int n, int round) const {
  if (update.b_set.size() != update.deltas.size()) {
    throw ProtocolError("sparse update positions and deltas must align");
  }
  if (!std::is_sorted(update.b_set.begin(), update.b_set.end())) {
    throw ProtocolError("sparse update positions must be sorted");
  }
  const Fq fq = params_.fq();
  // The combining noise is keyed by (client, round) and consumed in b_set
  // order, so every database sees the same noise realization.
  RngStream rng(params_.seed(), "client-update-noise",
                static_cast<std::uint64_t>(id_),
                static_cast<std::uint64_t>(round));
  std::vector<WritePair> pairs;
  pairs.reserve(update.b_set.size());
  for (std::size_t j = 0; j < update.b_set.size(); ++j) {
    const FieldElement z_hat =
        controls_.zero_update_noise ? 0 : rng.field_element(params_.modulus());
    WritePair pair;
    pair.update = combine_update_at(fq, params_.f_all(), params_.alpha(n),
                                    update.deltas[j], z_hat);
    pair.position = permutation_.invert(update.b_set[j]);
    pairs.push_back(pair);
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const WritePair& a, const WritePair& b) {
              return a.position < b.position;
            });
  return pairs;
}

}  // namespace pruw
