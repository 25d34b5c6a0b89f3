#ifndef PRUW_FIELD_HPP_
#define PRUW_FIELD_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pruw/error.hpp"

namespace pruw {

/// A field element is a bare residue in [0, q); the modulus lives in the
/// Fq context (and in the vector/matrix carriers), not in each element.
using FieldElement = std::uint64_t;

/// Prime-field arithmetic context for F_q. All operands and results are
/// reduced residues in [0, q). Immutable and freely shareable.
class Fq {
 public:
  /// Throws FieldError unless q is prime (and fits the multiply guard).
  explicit Fq(std::uint64_t q);

  std::uint64_t modulus() const { return q_; }

  FieldElement reduce(std::uint64_t v) const { return v % q_; }

  FieldElement add(FieldElement a, FieldElement b) const {
    FieldElement s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  FieldElement sub(FieldElement a, FieldElement b) const {
    return a >= b ? a - b : a + q_ - b;
  }
  FieldElement neg(FieldElement a) const { return a == 0 ? 0 : q_ - a; }
  FieldElement mul(FieldElement a, FieldElement b) const {
    return (a * b) % q_;
  }

  FieldElement pow(FieldElement base, std::uint64_t exp) const;

  /// Multiplicative inverse; throws FieldError for zero.
  FieldElement inverse(FieldElement a) const;

  static bool is_prime(std::uint64_t n);

 private:
  std::uint64_t q_;
};

/// Ordered sequence of residues sharing one modulus.
struct FieldVector {
  std::uint64_t q = 0;
  std::vector<FieldElement> e;

  FieldVector() = default;
  FieldVector(std::uint64_t q, std::size_t len) : q(q), e(len, 0) {}
  FieldVector(std::uint64_t q, std::vector<FieldElement> elems)
      : q(q), e(std::move(elems)) {}

  std::size_t size() const { return e.size(); }
  FieldElement& operator[](std::size_t i) { return e[i]; }
  FieldElement operator[](std::size_t i) const { return e[i]; }

  friend bool operator==(const FieldVector& a, const FieldVector& b) {
    return a.q == b.q && a.e == b.e;
  }
};

/// Row-major grid of residues sharing one modulus.
struct FieldMatrix {
  std::uint64_t q = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<FieldElement> e;

  FieldMatrix() = default;
  FieldMatrix(std::uint64_t q, std::size_t rows, std::size_t cols)
      : q(q), rows(rows), cols(cols), e(rows * cols, 0) {}

  FieldElement& at(std::size_t r, std::size_t c) { return e[r * cols + c]; }
  FieldElement at(std::size_t r, std::size_t c) const {
    return e[r * cols + c];
  }

  static FieldMatrix identity(std::uint64_t q, std::size_t n);

  friend bool operator==(const FieldMatrix& a, const FieldMatrix& b) {
    return a.q == b.q && a.rows == b.rows && a.cols == b.cols && a.e == b.e;
  }
};

// Vector/matrix operations. All check modulus and shape agreement and throw
// FieldError on mismatch.

FieldVector add(const FieldVector& a, const FieldVector& b);
FieldVector sub(const FieldVector& a, const FieldVector& b);
FieldVector scale(FieldElement c, const FieldVector& v);
FieldElement inner_product(const FieldVector& a, const FieldVector& b);

FieldMatrix add(const FieldMatrix& a, const FieldMatrix& b);
FieldMatrix scale(FieldElement c, const FieldMatrix& m);
FieldVector matvec(const FieldMatrix& m, const FieldVector& v);
FieldVector column(const FieldMatrix& m, std::size_t c);

/// Evaluates sum_i coeffs[i] * x^i by Horner's rule.
FieldElement eval_poly(const FieldVector& coeffs, FieldElement x);

/// Solves A x = b exactly by Gaussian elimination, pivoting on the first
/// nonzero entry in each column. Throws SingularMatrixError (naming the
/// 1-based pivot column) when no pivot exists.
FieldVector solve_linear(const FieldMatrix& a, const FieldVector& b);

}  // namespace pruw

#endif  // PRUW_FIELD_HPP_
