#ifndef PRUW_SABOTAGE_HPP_
#define PRUW_SABOTAGE_HPP_

namespace pruw {

/// Deliberate leak switches for audit negative controls. Production runs
/// keep every flag false; audits flip one at a time and expect the privacy
/// checks to fail, proving the checks have teeth.
struct NoiseControls {
  bool zero_query_noise = false;      // readers send bare e_M(theta) queries
  bool zero_update_noise = false;     // writers omit the combining noise term
  bool zero_storage_noise = false;    // databases store bare submodel symbols
  bool zero_reversing_noise = false;  // reversing matrices drop the Z-bar mask
  bool identity_permutation = false;  // coordinator plants the identity

  bool any() const {
    return zero_query_noise || zero_update_noise || zero_storage_noise ||
           zero_reversing_noise || identity_permutation;
  }
};

}  // namespace pruw

#endif  // PRUW_SABOTAGE_HPP_
