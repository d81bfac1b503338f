#pragma once

// Rank, kernels, column spaces and linear solves. Exact Gaussian
// elimination for rational matrices; SVD/LU (Eigen) for complex ones.
// Both families share signatures so mode-generic code can call either.

#include "hq/matrix.hpp"

#include <Eigen/Dense>

#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace hq {

/// Singular-value threshold policy for floating rank decisions.
/// A singular value s counts iff s > rtol * s_max and s > atol.
/// rtol < 0 selects the default max(rows, cols) * machine epsilon.
struct NumericTol {
  double rtol = -1.0;
  double atol = 1e-300;

  double relative_for(std::size_t rows, std::size_t cols) const {
    if (rtol >= 0) return rtol;
    return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon();
  }
};

// ---------------------------------------------------------------- exact

struct RowEchelon {
  QMatrix reduced;                  // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

inline RowEchelon rref(QMatrix m) {
  RowEchelon out;
  std::size_t row = 0;
  for (std::size_t c = 0; c < m.cols() && row < m.rows(); ++c) {
    std::size_t p = row;
    while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
    const Rational inv = 1 / m(row, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || sgn(m(i, c)) == 0) continue;
      const Rational f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    out.pivots.push_back(c);
    ++row;
  }
  out.reduced = std::move(m);
  return out;
}

inline std::size_t rank(const QMatrix& m, const NumericTol& = {}) { return rref(m).pivots.size(); }

/// Basis of the right kernel, as columns.
inline QMatrix nullspace(const QMatrix& m, const NumericTol& = {}) {
  const RowEchelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  QMatrix n(m.cols(), free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const std::size_t fc = free_cols[k];
    n(fc, k) = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) n(e.pivots[r], k) = -e.reduced(r, fc);
  }
  return n;
}

/// Basis of the column space made of the pivot columns of m.
inline QMatrix column_space(const QMatrix& m, const NumericTol& = {}) {
  return m.select_cols(rref(m).pivots);
}

/// Solves a * x = b; nullopt if inconsistent. Free variables set to zero.
inline std::optional<QMatrix> solve(const QMatrix& a, const QMatrix& b, const NumericTol& = {}) {
  if (a.rows() != b.rows()) throw std::invalid_argument("solve: row mismatch");
  const RowEchelon e = rref(hcat(a, b));
  QMatrix x(a.cols(), b.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] >= a.cols()) return std::nullopt;
    for (std::size_t j = 0; j < b.cols(); ++j) x(e.pivots[r], j) = e.reduced(r, a.cols() + j);
  }
  return x;
}

inline Rational determinant(QMatrix m) {
  if (!m.is_square()) throw std::invalid_argument("determinant of non-square matrix");
  Rational det = 1;
  const std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m(p, c)) == 0) ++p;
    if (p == n) return Rational(0);
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (sgn(m(i, c)) == 0) continue;
      const Rational f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

inline QMatrix inverse(const QMatrix& m, const NumericTol& = {}) {
  if (!m.is_square()) throw std::invalid_argument("inverse of non-square matrix");
  auto x = solve(m, QMatrix::identity(m.rows()));
  if (!x || rank(m) != m.rows()) throw std::domain_error("inverse of singular matrix");
  return *x;
}

inline bool is_zero(const QMatrix& a, double /*tol*/) { return is_zero(a); }

// ---------------------------------------------------------------- float

inline Eigen::MatrixXcd to_eigen(const CMatrix& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

inline CMatrix from_eigen(const Eigen::MatrixXcd& e) {
  CMatrix m(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

inline Eigen::VectorXd singular_values(const CMatrix& m) {
  if (m.empty()) return Eigen::VectorXd();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(to_eigen(m));
  return svd.singularValues();
}

inline std::size_t rank_from_singular_values(const Eigen::VectorXd& s, std::size_t rows, std::size_t cols,
                                             const NumericTol& tol) {
  if (s.size() == 0) return 0;
  const double smax = s(0);
  const double thr = std::max(tol.relative_for(rows, cols) * smax, tol.atol);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > thr) ++r;
  return r;
}

inline std::size_t rank(const CMatrix& m, const NumericTol& tol = {}) {
  return rank_from_singular_values(singular_values(m), m.rows(), m.cols(), tol);
}

/// Orthonormal basis of the right kernel, as columns.
inline CMatrix nullspace(const CMatrix& m, const NumericTol& tol = {}) {
  if (m.cols() == 0) return CMatrix(0, 0);
  if (m.rows() == 0) return CMatrix::identity(m.cols());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m), Eigen::ComputeFullV);
  const std::size_t r = rank_from_singular_values(svd.singularValues(), m.rows(), m.cols(), tol);
  const Eigen::MatrixXcd v = svd.matrixV();
  return from_eigen(v.rightCols(static_cast<Eigen::Index>(m.cols() - r)));
}

/// Orthonormal basis of the column space.
inline CMatrix column_space(const CMatrix& m, const NumericTol& tol = {}) {
  if (m.empty()) return CMatrix(m.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m), Eigen::ComputeFullU);
  const std::size_t r = rank_from_singular_values(svd.singularValues(), m.rows(), m.cols(), tol);
  const Eigen::MatrixXcd u = svd.matrixU();
  return from_eigen(u.leftCols(static_cast<Eigen::Index>(r)));
}

/// Least-squares solve of a * x = b; nullopt if the residual exceeds
/// tolerance relative to |b| (inconsistent system). Minimum-norm solution.
inline std::optional<CMatrix> solve(const CMatrix& a, const CMatrix& b, const NumericTol& tol = {},
                                    double consistency = 1e-8) {
  if (a.rows() != b.rows()) throw std::invalid_argument("solve: row mismatch");
  if (a.cols() == 0) {
    if (max_abs(b) <= consistency) return CMatrix(0, b.cols());
    return std::nullopt;
  }
  if (b.cols() == 0) return CMatrix(a.cols(), 0);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(to_eigen(a));
  cod.setThreshold(tol.relative_for(a.rows(), a.cols()));
  Eigen::MatrixXcd x = cod.solve(to_eigen(b));
  const CMatrix xs = from_eigen(x);
  const double res = max_abs(a * xs - b);
  const double scale = std::max(1.0, max_abs(b));
  if (res > consistency * scale) return std::nullopt;
  return xs;
}

inline Complex determinant(const CMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("determinant of non-square matrix");
  if (m.rows() == 0) return Complex(1.0, 0.0);
  return to_eigen(m).partialPivLu().determinant();
}

inline CMatrix inverse(const CMatrix& m, const NumericTol& tol = {}) {
  if (!m.is_square()) throw std::invalid_argument("inverse of non-square matrix");
  if (m.rows() == 0) return m;
  if (rank(m, tol) != m.rows()) throw std::domain_error("inverse of singular matrix");
  return from_eigen(to_eigen(m).fullPivLu().inverse());
}

/// 2-norm condition number (infinity for singular input).
inline double condition_number(const CMatrix& m) {
  const Eigen::VectorXd s = singular_values(m);
  if (s.size() == 0) return 1.0;
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

inline bool is_zero(const CMatrix& a, double tol) { return max_abs(a) <= tol; }

// ---------------------------------------------------------------- shared

/// dim(span F ∩ span W) for full-column-rank bases F, W.
template <class T>
std::size_t intersection_dim(const Matrix<T>& f, const Matrix<T>& w, const NumericTol& tol = {}) {
  if (f.cols() == 0 || w.cols() == 0) return 0;
  return f.cols() + w.cols() - rank(hcat(f, w), tol);
}

/// True iff every column of a lies in the column span of basis. Floating
/// mode measures the residual of the orthogonal projection against abs_tol.
inline bool contained_in(const QMatrix& a, const QMatrix& basis, double = 0.0) {
  if (a.cols() == 0) return true;
  if (basis.cols() == 0) return is_zero(a);
  return rank(hcat(basis, a)) == rank(basis);
}

inline bool contained_in(const CMatrix& a, const CMatrix& basis, double abs_tol = 1e-8) {
  if (a.cols() == 0) return true;
  if (basis.cols() == 0) return max_abs(a) <= abs_tol;
  const CMatrix q = column_space(basis);
  const CMatrix resid = a - q * (q.adjoint() * a);
  return max_abs(resid) <= abs_tol;
}

}  // namespace hq
