#ifndef PRUW_CLIENT_HPP_
#define PRUW_CLIENT_HPP_

#include <vector>

#include "pruw/database.hpp"
#include "pruw/field.hpp"
#include "pruw/params.hpp"
#include "pruw/permutation.hpp"
#include "pruw/sabotage.hpp"

namespace pruw {

/// A sparse submodel update: the true subpacket indices carrying nonzero
/// updates (sorted ascending, 1-based) and, aligned with them, the ell raw
/// update symbols per chosen subpacket.
struct SparseUpdate {
  std::vector<int> b_set;
  std::vector<std::vector<FieldElement>> deltas;  // deltas[j][k-1]
};

// Pure protocol steps, shared by the client session and the privacy audits
// (which enumerate or resample their inputs directly).

/// Query for one database: block k is (1/(f_k - alpha_n)) e_M(theta) plus
/// the shared noise block noise[k-1] (size M, identical for every n).
ReadQuery make_read_query(const Fq& fq, int m_submodels, int theta,
                          const std::vector<FieldElement>& f,
                          FieldElement alpha_n,
                          const std::vector<FieldVector>& noise);

/// Combined update symbol evaluated at one alpha:
///   sum_i (deltas[i-1] / prod_{j!=i}(f_j - f_i)) prod_{j!=i}(f_j - alpha)
///   + prod_j (f_j - alpha) * z_hat.
/// As a polynomial in alpha it passes through deltas[k-1] at alpha = f_k.
FieldElement combine_update_at(const Fq& fq,
                               const std::vector<FieldElement>& f,
                               FieldElement alpha,
                               const std::vector<FieldElement>& deltas,
                               FieldElement z_hat);

/// Where the pairs land on the wire: the permutation preimages of the true
/// positions, sorted ascending.
std::vector<int> permuted_positions(const Permutation& perm,
                                    const std::vector<int>& b_set);

/// Natural positions of an advertised permuted set: V(i) = perm(V~(i)).
std::vector<int> true_positions(const Permutation& perm,
                                const std::vector<int>& v_tilde);

/// Recovers the ell symbols of one subpacket from the N per-database
/// answers by solving the N x N system whose row for database n is
///   [1/(f_1-a_n) .. 1/(f_ell-a_n), 1, a_n, .., a_n^(3*ell+1)]
/// with the subpacket symbols as the first ell unknowns and the answer
/// noise polynomial coefficients as the rest.
std::vector<FieldElement> decode_subpacket(
    const ValidatedParams& params, const std::vector<FieldElement>& answers);

/// One participating user: knows the permutation and its submodel index,
/// derives all randomness from keyed streams so runs are reproducible.
class ClientSession {
 public:
  ClientSession(const ValidatedParams& params, int id, int theta,
                Permutation permutation, NoiseControls controls = {});

  int id() const { return id_; }
  int theta() const { return theta_; }

  /// Queries for databases 1..N, built over one shared noise draw for the
  /// round. Element n-1 goes to database n.
  std::vector<ReadQuery> round_queries(int round) const;

  std::vector<int> true_positions(const std::vector<int>& v_tilde) const;

  /// Solves for the ell subpacket symbols from the N per-database answer
  /// symbols of one advertised entry.
  std::vector<FieldElement> decode_subpacket(
      const std::vector<FieldElement>& answers) const;

  /// Uniformly random sparse update for the round: P*r distinct subpackets,
  /// nonzero combined content per chosen subpacket.
  SparseUpdate random_update(int round) const;

  /// Keeps the P*r densest subpackets of a full dense update (most nonzero
  /// symbols first, ties to the lower subpacket index).
  SparseUpdate sparsify(const FieldVector& dense) const;

  /// Wire pairs for database n: combined updates of the chosen subpackets
  /// at alpha_n, listed at their permuted positions, sorted ascending by
  /// position. The combining noise is shared across databases and drawn
  /// per (client, round, subpacket).
  std::vector<WritePair> write_pairs_for(const SparseUpdate& update, int n,
                                         int round) const;

 private:
  ValidatedParams params_;
  int id_;
  int theta_;
  Permutation permutation_;
  NoiseControls controls_;
};

}  // namespace pruw

#endif  // PRUW_CLIENT_HPP_
