#pragma once

#include <optional>
#include <vector>

#include "twistmod/rational.hpp"

namespace twistmod {

/// Dense rational matrix, row-major.
struct MatQ {
  int rows = 0, cols = 0;
  std::vector<Rational> a;

  MatQ() = default;
  MatQ(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, Rational(0)) {}

  Rational& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  const Rational& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

  bool is_zero() const {
    for (const auto& x : a)
      if (!twistmod::is_zero(x)) return false;
    return true;
  }
  bool operator==(const MatQ& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

inline MatQ mat_mul(const MatQ& x, const MatQ& y) {
  MatQ z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      if (twistmod::is_zero(x.at(i, k))) continue;
      for (int j = 0; j < y.cols; ++j) z.at(i, j) += x.at(i, k) * y.at(k, j);
    }
  return z;
}

/// Exact rank by fraction-free (Bareiss) elimination over the integers after
/// clearing row denominators; row scaling does not change the rank.
inline int rank_exact(const MatQ& m) {
  if (m.rows == 0 || m.cols == 0) return 0;
  std::vector<std::vector<mpz_class>> b(m.rows, std::vector<mpz_class>(m.cols));
  for (int i = 0; i < m.rows; ++i) {
    mpz_class l = 1;
    for (int j = 0; j < m.cols; ++j) l = lcm(l, m.at(i, j).get_den());
    for (int j = 0; j < m.cols; ++j) {
      Rational q = m.at(i, j) * Rational(l);
      q.canonicalize();
      b[i][j] = q.get_num();
    }
  }
  int rank = 0;
  mpz_class prev = 1;
  for (int col = 0; col < m.cols && rank < m.rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < m.rows; ++r)
      if (b[r][col] != 0) { pivot = r; break; }
    if (pivot < 0) continue;
    std::swap(b[rank], b[pivot]);
    for (int r = rank + 1; r < m.rows; ++r) {
      for (int c = col + 1; c < m.cols; ++c)
        b[r][c] = (b[rank][col] * b[r][c] - b[r][col] * b[rank][c]) / prev;
      b[r][col] = 0;
    }
    prev = b[rank][col];
    ++rank;
  }
  return rank;
}

/// Solves A x = rhs exactly; empty when the system is inconsistent.
inline std::optional<std::vector<Rational>> solve_exact(const MatQ& A,
                                                        const std::vector<Rational>& rhs) {
  int rows = A.rows, cols = A.cols;
  MatQ m(rows, cols + 1);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m.at(i, j) = A.at(i, j);
    m.at(i, cols) = rhs[i];
  }
  std::vector<int> pivot_col;
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int p = -1;
    for (int r = row; r < rows; ++r)
      if (!twistmod::is_zero(m.at(r, col))) { p = r; break; }
    if (p < 0) continue;
    for (int c = 0; c <= cols; ++c) std::swap(m.at(row, c), m.at(p, c));
    Rational inv = 1 / m.at(row, col);
    for (int c = col; c <= cols; ++c) m.at(row, c) *= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == row || twistmod::is_zero(m.at(r, col))) continue;
      Rational f = m.at(r, col);
      for (int c = col; c <= cols; ++c) m.at(r, c) -= f * m.at(row, c);
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (int r = row; r < rows; ++r)
    if (!twistmod::is_zero(m.at(r, cols))) return std::nullopt;
  std::vector<Rational> x(cols, Rational(0));
  for (int r = 0; r < row; ++r) x[pivot_col[r]] = m.at(r, cols);
  return x;
}

}  // namespace twistmod
