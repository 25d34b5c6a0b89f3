#include "pruw/permutation.hpp"

#include <numeric>

namespace pruw {

Permutation::Permutation(std::vector<int> forward)
    : forward_(std::move(forward)) {
  const int p = size();
  inverse_.assign(p, 0);
  for (int i = 1; i <= p; ++i) {
    int s = forward_[i - 1];
    if (s < 1 || s > p) {
      throw ProtocolError("permutation image " + std::to_string(s) +
                          " out of range");
    }
    if (inverse_[s - 1] != 0) {
      throw ProtocolError("permutation not a bijection: image " +
                          std::to_string(s) + " repeated");
    }
    inverse_[s - 1] = i;
  }
}

Permutation Permutation::identity(int p) {
  std::vector<int> fwd(p);
  std::iota(fwd.begin(), fwd.end(), 1);
  return Permutation(std::move(fwd));
}

Permutation Permutation::random(int p, RngStream& rng) {
  std::vector<int> fwd(p);
  std::iota(fwd.begin(), fwd.end(), 1);
  rng.shuffle(fwd);
  return Permutation(std::move(fwd));
}

}  // namespace pruw
