// Exact arithmetic and dense linear algebra over GF(p).
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cachedof/errors.hpp"
#include "cachedof/rng.hpp"

namespace cachedof {

using Element = std::uint64_t;
using FieldVector = std::vector<Element>;

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;
inline constexpr std::uint64_t kMersenne31 = (std::uint64_t{1} << 31) - 1;

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace detail

/// Deterministic Miller-Rabin, exact for every 64-bit input.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = detail::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// GF(p) for a prime p < 2^63. Elements are canonical residues in [0, p).
class PrimeField {
 public:
  explicit PrimeField(std::uint64_t p = kMersenne61) : p_(p) {
    if (p >= (std::uint64_t{1} << 63) || !is_prime(p))
      throw out_of_range("field modulus " + std::to_string(p) + " is not a prime below 2^63");
  }

  std::uint64_t prime() const noexcept { return p_; }

  Element add(Element a, Element b) const noexcept {
    Element s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Element sub(Element a, Element b) const noexcept { return a >= b ? a - b : a + p_ - b; }
  Element neg(Element a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Element mul(Element a, Element b) const noexcept { return detail::mulmod(a, b, p_); }
  Element pow(Element a, std::uint64_t e) const noexcept { return detail::powmod(a, e, p_); }

  Element inv(Element a) const {
    if (a == 0) throw domain_error("zero has no multiplicative inverse");
    return pow(a, p_ - 2);
  }

  Element reduce(std::int64_t v) const noexcept {
    auto m = static_cast<std::int64_t>(v % static_cast<std::int64_t>(p_));
    return static_cast<Element>(m < 0 ? m + static_cast<std::int64_t>(p_) : m);
  }

  Element random(KeyedRng& rng) const noexcept { return rng.uniform(p_); }
  Element random_nonzero(KeyedRng& rng) const noexcept { return rng.uniform_nonzero(p_); }

  Element dot(std::span<const Element> a, std::span<const Element> b) const {
    Element acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc = add(acc, mul(a[i], b[i]));
    return acc;
  }

  bool operator==(const PrimeField&) const = default;

 private:
  std::uint64_t p_;
};

/// Dense row-major matrix of field elements.
class FieldMatrix {
 public:
  FieldMatrix() = default;
  FieldMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static FieldMatrix identity(std::size_t n) {
    FieldMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static FieldMatrix from_rows(const std::vector<FieldVector>& rows, std::size_t cols) {
    FieldMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r].at(c);
    return m;
  }

  static FieldMatrix random(const PrimeField& f, std::size_t rows, std::size_t cols, KeyedRng& rng) {
    FieldMatrix m(rows, cols);
    for (auto& e : m.data_) e = f.random(rng);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Element& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Element operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Element> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<Element> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  const std::vector<Element>& data() const noexcept { return data_; }

  FieldMatrix transpose() const {
    FieldMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  bool operator==(const FieldMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Element> data_;
};

inline FieldVector multiply(const PrimeField& f, const FieldMatrix& a, std::span<const Element> x) {
  if (x.size() != a.cols()) throw domain_error("matrix-vector dimension mismatch");
  FieldVector y(a.rows(), 0);
  for (std::size_t r = 0; r < a.rows(); ++r) y[r] = f.dot(a.row(r), x);
  return y;
}

inline FieldMatrix multiply(const PrimeField& f, const FieldMatrix& a, const FieldMatrix& b) {
  if (a.cols() != b.rows()) throw domain_error("matrix-matrix dimension mismatch");
  FieldMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      Element aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) = f.add(c(i, j), f.mul(aik, b(k, j)));
    }
  return c;
}

/// Reduced row echelon form of a matrix plus its pivot columns.
struct RowEchelon {
  FieldMatrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of row i, for i < rank
};

/// In-place Gauss-Jordan with first-nonzero pivoting.
inline RowEchelon row_reduce(const PrimeField& f, FieldMatrix m) {
  std::vector<std::size_t> pivots;
  std::size_t lead = 0;
  for (std::size_t col = 0; col < m.cols() && lead < m.rows(); ++col) {
    std::size_t pr = lead;
    while (pr < m.rows() && m(pr, col) == 0) ++pr;
    if (pr == m.rows()) continue;
    if (pr != lead)
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(pr, c), m(lead, c));
    Element scale = f.inv(m(lead, col));
    for (std::size_t c = col; c < m.cols(); ++c) m(lead, c) = f.mul(m(lead, c), scale);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == lead || m(r, col) == 0) continue;
      Element factor = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c) m(r, c) = f.sub(m(r, c), f.mul(factor, m(lead, c)));
    }
    pivots.push_back(col);
    ++lead;
  }
  return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const PrimeField& f, const FieldMatrix& m) { return row_reduce(f, m).pivots.size(); }

/// Unique x with a·x = b for square invertible a.
inline FieldVector solve(const PrimeField& f, const FieldMatrix& a, std::span<const Element> b) {
  if (a.rows() != a.cols()) throw domain_error("solve requires a square matrix");
  if (b.size() != a.rows()) throw domain_error("right-hand side has the wrong length");
  const std::size_t n = a.rows();
  if (n == 0) return {};
  FieldMatrix aug(n, n + 1);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = a(r, c);
    aug(r, n) = b[r];
  }
  RowEchelon e = row_reduce(f, std::move(aug));
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1)
    throw singular_matrix("matrix of order " + std::to_string(n) + " is singular");
  FieldVector x(n);
  for (std::size_t r = 0; r < n; ++r) x[r] = e.reduced(r, n);
  return x;
}

inline bool is_invertible(const PrimeField& f, const FieldMatrix& a) {
  return a.rows() == a.cols() && rank(f, a) == a.rows();
}

/// Uniformly random nonzero vector v with rows·v = 0.
inline FieldVector nullspace_sample(const PrimeField& f, const FieldMatrix& rows, KeyedRng& rng) {
  RowEchelon e = row_reduce(f, rows);
  const std::size_t n = rows.cols();
  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : e.pivots) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < n; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  if (free_cols.empty()) throw full_row_rank_exhausted("null space is trivial");

  FieldVector v(n, 0);
  bool nonzero = false;
  while (!nonzero) {
    for (std::size_t c : free_cols) {
      v[c] = f.random(rng);
      nonzero = nonzero || v[c] != 0;
    }
  }
  // pivot variable = -(sum over free columns of entry * value)
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    Element acc = 0;
    for (std::size_t c : free_cols) acc = f.add(acc, f.mul(e.reduced(r, c), v[c]));
    v[e.pivots[r]] = f.neg(acc);
  }
  return v;
}

}  // namespace cachedof
