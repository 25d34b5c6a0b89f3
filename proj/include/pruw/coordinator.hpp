#ifndef PRUW_COORDINATOR_HPP_
#define PRUW_COORDINATOR_HPP_

#include <optional>
#include <vector>

#include "pruw/database.hpp"
#include "pruw/field.hpp"
#include "pruw/params.hpp"
#include "pruw/permutation.hpp"
#include "pruw/sabotage.hpp"

namespace pruw {

/// Everything the one-shot trusted setup produces. The permutation goes to
/// clients only; databases receive storage and reversing matrices with no
/// way to recover the permutation from them. The plaintext submodels exist
/// solely so the simulation can keep a ground-truth oracle.
struct SetupResult {
  Permutation permutation;
  std::vector<Database> databases;
  std::vector<FieldVector> submodels;  // submodels[m-1]: L plaintext symbols
};

/// 0/1 matrix of the permutation: entry (s, i) is 1 exactly when the
/// permutation maps i to s, so multiplying it onto a vector indexed by
/// permuted positions restores natural order.
FieldMatrix permutation_matrix(const Permutation& perm, std::uint64_t q);

/// R_n = R + scale * Z-bar, the noise-masked reversing matrix for one
/// database (scale = prod_i (f_i - alpha_n)).
FieldMatrix build_reversing_matrix(const FieldMatrix& reversing,
                                   const FieldMatrix& noise,
                                   FieldElement scale);

/// One stored symbol: w + (f_k - alpha_n) * sum_i alpha_n^i z[i]. The noise
/// coefficients z (2*ell+1 of them) are shared across databases; only the
/// evaluation point alpha_n differs. Audits call this directly.
FieldElement noisy_storage_entry(const Fq& fq, FieldElement w,
                                 FieldElement f_k, FieldElement alpha_n,
                                 const FieldVector& z);

/// Runs the trusted setup: draws the permutation (or plants the forced
/// one), the initial submodels, the shared storage noise, and the shared
/// reversing noise, then hands each database its share. The coordinator
/// retains nothing; all state lives in the returned value.
SetupResult coordinator_setup(
    const ValidatedParams& params, const NoiseControls& controls = {},
    const std::optional<Permutation>& forced_permutation = std::nullopt);

}  // namespace pruw

#endif  // PRUW_COORDINATOR_HPP_
