#include "pruw/coordinator.hpp"

#include <utility>

#include "pruw/error.hpp"
#include "pruw/rng.hpp"

namespace pruw {

FieldMatrix permutation_matrix(const Permutation& perm, std::uint64_t q) {
  const int p = perm.size();
  FieldMatrix m(q, p, p);
  for (int i = 1; i <= p; ++i) {
    m.at(perm.apply(i) - 1, i - 1) = 1;
  }
  return m;
}

FieldMatrix build_reversing_matrix(const FieldMatrix& reversing,
                                   const FieldMatrix& noise,
                                   FieldElement scale) {
  return add(reversing, pruw::scale(scale, noise));
}

FieldElement noisy_storage_entry(const Fq& fq, FieldElement w,
                                 FieldElement f_k, FieldElement alpha_n,
                                 const FieldVector& z) {
  const FieldElement mask = fq.mul(fq.sub(f_k, alpha_n),
                                   eval_poly(z, alpha_n));
  return fq.add(w, mask);
}

SetupResult coordinator_setup(
    const ValidatedParams& params, const NoiseControls& controls,
    const std::optional<Permutation>& forced_permutation) {
  const Fq fq = params.fq();
  const std::uint64_t q = params.modulus();
  const int p = params.subpackets();
  const int m_count = params.submodels();
  const int ell = params.subpacket_symbols();
  const int n_count = params.databases();

  Permutation perm = Permutation::identity(p);
  if (forced_permutation.has_value()) {
    if (forced_permutation->size() != p) {
      throw ProtocolError("forced permutation must act on {1..P}");
    }
    perm = *forced_permutation;
  } else if (!controls.identity_permutation) {
    RngStream perm_rng(params.seed(), "coordinator-permutation");
    perm = Permutation::random(p, perm_rng);
  }

  // Plaintext initial submodels, kept only for the simulation oracle.
  std::vector<FieldVector> submodels;
  submodels.reserve(m_count);
  for (int m = 1; m <= m_count; ++m) {
    RngStream rng(params.seed(), "initial-submodels", m);
    submodels.emplace_back(q, rng.field_vector(q, params.submodel_symbols()));
  }

  // Storage noise: one coefficient vector of length 2*ell+1 per symbol
  // (m, k, s), identical across databases by construction.
  const std::size_t width = static_cast<std::size_t>(m_count) * ell;
  std::vector<std::vector<FieldVector>> z;  // z[s-1][(k-1)*M + (m-1)]
  z.resize(p);
  for (int s = 1; s <= p; ++s) {
    z[s - 1].reserve(width);
    for (int k = 1; k <= ell; ++k) {
      for (int m = 1; m <= m_count; ++m) {
        RngStream rng(params.seed(), "coordinator-storage-noise",
                      static_cast<std::uint64_t>((m - 1) * ell + (k - 1)),
                      static_cast<std::uint64_t>(s - 1));
        FieldVector coeffs(q, static_cast<std::size_t>(2 * ell + 1));
        if (!controls.zero_storage_noise) {
          coeffs.e = rng.field_vector(q, coeffs.size());
        }
        z[s - 1].push_back(std::move(coeffs));
      }
    }
  }

  // Shared reversing-noise matrix Z-bar.
  RngStream zbar_rng(params.seed(), "coordinator-reversing-noise");
  FieldMatrix z_bar(q, p, p);
  if (!controls.zero_reversing_noise) {
    z_bar.e = zbar_rng.field_vector(q, z_bar.e.size());
  }
  const FieldMatrix r_matrix = permutation_matrix(perm, q);

  std::vector<Database> databases;
  databases.reserve(n_count);
  for (int n = 1; n <= n_count; ++n) {
    std::vector<FieldVector> storage;
    storage.reserve(p);
    for (int s = 1; s <= p; ++s) {
      FieldVector sub(q, width);
      for (int k = 1; k <= ell; ++k) {
        for (int m = 1; m <= m_count; ++m) {
          const std::size_t flat = static_cast<std::size_t>(k - 1) * m_count +
                                   (m - 1);
          const FieldElement w =
              submodels[m - 1][(s - 1) * ell + (k - 1)];
          sub[flat] = noisy_storage_entry(fq, w, params.f(k), params.alpha(n),
                                          z[s - 1][flat]);
        }
      }
      storage.push_back(std::move(sub));
    }
    databases.emplace_back(
        params, n,
        build_reversing_matrix(r_matrix, z_bar, params.noise_scale(n)),
        std::move(storage));
  }

  return SetupResult{std::move(perm), std::move(databases),
                     std::move(submodels)};
}

}  // namespace pruw
