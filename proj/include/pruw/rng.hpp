#ifndef PRUW_RNG_HPP_
#define PRUW_RNG_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

namespace pruw {

/// Deterministic random stream derived from (seed, label, a, b).
///
/// Every random choice in the system draws from a stream keyed by its role
/// (e.g. "coordinator-permutation", "client-query") plus numeric qualifiers
/// such as client id and round index. Streams with distinct keys are
/// independent, and a stream's output depends only on its key, never on the
/// order streams are created or consumed. That property is what makes whole
/// runs bit-reproducible from a single 64-bit seed.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view label, std::uint64_t a = 0,
            std::uint64_t b = 0);

  /// Next raw 64-bit draw (SplitMix64 sequence).
  std::uint64_t next_u64();

  /// Uniform draw in [0, bound) without modulo bias. bound must be > 0.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Uniform field element in [0, q).
  std::uint64_t field_element(std::uint64_t q) { return uniform_below(q); }

  /// Uniform nonzero field element in [1, q). q must be > 1.
  std::uint64_t nonzero_field_element(std::uint64_t q) {
    return 1 + uniform_below(q - 1);
  }

  std::vector<std::uint64_t> field_vector(std::uint64_t q, std::size_t len);

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace pruw

#endif  // PRUW_RNG_HPP_
