#include "pruw/field.hpp"

#include <string>

namespace pruw {

namespace {

void require_same_modulus(std::uint64_t a, std::uint64_t b,
                          const char* where) {
  if (a != b) {
    throw FieldError(std::string(where) + ": modulus mismatch (" +
                     std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

Fq::Fq(std::uint64_t q) : q_(q) {
  if (!is_prime(q)) {
    throw FieldError("modulus " + std::to_string(q) + " is not prime");
  }
  // mul() uses plain 64-bit products; a*b < 2^62 needs q < 2^31.
  if (q >= (1ULL << 31)) {
    throw FieldError("modulus too large (must fit 31 bits)");
  }
}

bool Fq::is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

FieldElement Fq::pow(FieldElement base, std::uint64_t exp) const {
  FieldElement result = 1;
  FieldElement b = base % q_;
  while (exp > 0) {
    if (exp & 1) result = mul(result, b);
    b = mul(b, b);
    exp >>= 1;
  }
  return result;
}

FieldElement Fq::inverse(FieldElement a) const {
  if (a % q_ == 0) {
    throw FieldError("zero has no multiplicative inverse");
  }
  return pow(a % q_, q_ - 2);  // Fermat
}

FieldMatrix FieldMatrix::identity(std::uint64_t q, std::size_t n) {
  FieldMatrix m(q, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

FieldVector add(const FieldVector& a, const FieldVector& b) {
  require_same_modulus(a.q, b.q, "vector add");
  if (a.size() != b.size()) throw FieldError("vector add: length mismatch");
  Fq fq(a.q);
  FieldVector out(a.q, a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = fq.add(a[i], b[i]);
  return out;
}

FieldVector sub(const FieldVector& a, const FieldVector& b) {
  require_same_modulus(a.q, b.q, "vector sub");
  if (a.size() != b.size()) throw FieldError("vector sub: length mismatch");
  Fq fq(a.q);
  FieldVector out(a.q, a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = fq.sub(a[i], b[i]);
  return out;
}

FieldVector scale(FieldElement c, const FieldVector& v) {
  Fq fq(v.q);
  FieldVector out(v.q, v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = fq.mul(c, v[i]);
  return out;
}

FieldElement inner_product(const FieldVector& a, const FieldVector& b) {
  require_same_modulus(a.q, b.q, "inner product");
  if (a.size() != b.size()) {
    throw FieldError("inner product: length mismatch");
  }
  Fq fq(a.q);
  FieldElement acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc = fq.add(acc, fq.mul(a[i], b[i]));
  }
  return acc;
}

FieldMatrix add(const FieldMatrix& a, const FieldMatrix& b) {
  require_same_modulus(a.q, b.q, "matrix add");
  if (a.rows != b.rows || a.cols != b.cols) {
    throw FieldError("matrix add: shape mismatch");
  }
  Fq fq(a.q);
  FieldMatrix out(a.q, a.rows, a.cols);
  for (std::size_t i = 0; i < a.e.size(); ++i) {
    out.e[i] = fq.add(a.e[i], b.e[i]);
  }
  return out;
}

FieldMatrix scale(FieldElement c, const FieldMatrix& m) {
  Fq fq(m.q);
  FieldMatrix out(m.q, m.rows, m.cols);
  for (std::size_t i = 0; i < m.e.size(); ++i) out.e[i] = fq.mul(c, m.e[i]);
  return out;
}

FieldVector matvec(const FieldMatrix& m, const FieldVector& v) {
  require_same_modulus(m.q, v.q, "matvec");
  if (m.cols != v.size()) throw FieldError("matvec: shape mismatch");
  Fq fq(m.q);
  FieldVector out(m.q, m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) {
    FieldElement acc = 0;
    for (std::size_t c = 0; c < m.cols; ++c) {
      acc = fq.add(acc, fq.mul(m.at(r, c), v[c]));
    }
    out[r] = acc;
  }
  return out;
}

FieldVector column(const FieldMatrix& m, std::size_t c) {
  if (c >= m.cols) throw FieldError("column index out of range");
  FieldVector out(m.q, m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) out[r] = m.at(r, c);
  return out;
}

FieldElement eval_poly(const FieldVector& coeffs, FieldElement x) {
  Fq fq(coeffs.q);
  FieldElement acc = 0;
  for (std::size_t i = coeffs.size(); i > 0; --i) {
    acc = fq.add(fq.mul(acc, x), coeffs[i - 1]);
  }
  return acc;
}

FieldVector solve_linear(const FieldMatrix& a, const FieldVector& b) {
  require_same_modulus(a.q, b.q, "solve_linear");
  if (a.rows != a.cols) throw FieldError("solve_linear: matrix not square");
  if (a.rows != b.size()) throw FieldError("solve_linear: shape mismatch");

  Fq fq(a.q);
  const std::size_t n = a.rows;
  FieldMatrix m = a;
  FieldVector rhs = b;

  for (std::size_t col = 0; col < n; ++col) {
    // First nonzero entry at or below the diagonal becomes the pivot.
    std::size_t pivot = col;
    while (pivot < n && m.at(pivot, col) == 0) ++pivot;
    if (pivot == n) {
      throw SingularMatrixError(
          "singular matrix: no pivot in column " + std::to_string(col + 1),
          col + 1);
    }
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(m.at(pivot, c), m.at(col, c));
      }
      std::swap(rhs[pivot], rhs[col]);
    }
    FieldElement inv = fq.inverse(m.at(col, col));
    for (std::size_t c = col; c < n; ++c) {
      m.at(col, c) = fq.mul(inv, m.at(col, c));
    }
    rhs[col] = fq.mul(inv, rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m.at(r, col) == 0) continue;
      FieldElement factor = m.at(r, col);
      for (std::size_t c = col; c < n; ++c) {
        m.at(r, c) = fq.sub(m.at(r, c), fq.mul(factor, m.at(col, c)));
      }
      rhs[r] = fq.sub(rhs[r], fq.mul(factor, rhs[col]));
    }
  }
  return rhs;
}

}  // namespace pruw
