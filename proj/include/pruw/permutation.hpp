#ifndef PRUW_PERMUTATION_HPP_
#define PRUW_PERMUTATION_HPP_

#include <vector>

#include "pruw/error.hpp"
#include "pruw/rng.hpp"

namespace pruw {

/// Bijection on {1..P}, 1-based on both sides.
class Permutation {
 public:
  /// Validates bijectivity of the given forward mapping.
  explicit Permutation(std::vector<int> forward);

  static Permutation identity(int p);
  static Permutation random(int p, RngStream& rng);

  int size() const { return static_cast<int>(forward_.size()); }

  /// Forward image of i.
  int apply(int i) const {
    check_range(i);
    return forward_[i - 1];
  }

  /// Preimage of s.
  int invert(int s) const {
    check_range(s);
    return inverse_[s - 1];
  }

  const std::vector<int>& forward() const { return forward_; }

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.forward_ == b.forward_;
  }

 private:
  void check_range(int i) const {
    if (i < 1 || i > size()) {
      throw ProtocolError("permutation index " + std::to_string(i) +
                          " out of range [1, " + std::to_string(size()) + "]");
    }
  }

  std::vector<int> forward_;
  std::vector<int> inverse_;
};

}  // namespace pruw

#endif  // PRUW_PERMUTATION_HPP_
