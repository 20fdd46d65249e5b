#pragma once

#include <cassert>
#include <vector>

#include "qlat/numeric.hpp"

namespace qlat {

// Small dense matrix, row major.  Sizes here are tiny (at most a few dozen
// rows of width 8), so everything is schoolbook.
template <class T>
struct Mat {
  int rows = 0, cols = 0;
  std::vector<T> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  T& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const T& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

using IMat = Mat<Int>;
using QMat = Mat<Rat>;

template <class T>
Mat<T> mat_mul(const Mat<T>& x, const Mat<T>& y) {
  assert(x.cols == y.rows);
  Mat<T> z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      if (x(i, k) == 0) continue;
      for (int j = 0; j < y.cols; ++j) z(i, j) += x(i, k) * y(k, j);
    }
  return z;
}

template <class T>
Mat<T> transpose(const Mat<T>& m) {
  Mat<T> t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
  return t;
}

QMat to_rational(const IMat& m);

// Hermite normal form of the row span, lower triangular convention:
// result H is square n x n with H[i][j] = 0 for j > i, H[i][i] > 0 and
// 0 <= H[i][j] < H[j][j] for j < i.  Throws if the rows do not have full
// column rank.
IMat hnf_lower(IMat m);

// rank of the row span (used by callers that tolerate deficiency)
int int_row_rank(IMat m);

// gcd of all entries (0 for the zero matrix)
Int content(const IMat& m);

// product of the diagonal
Int diag_product(const IMat& m);

// exact inverse of a nonsingular lower triangular integer matrix
QMat lower_tri_inverse(const IMat& m);

// exact inverse of a general small rational matrix (Gauss-Jordan)
QMat qmat_inverse(const QMat& m);

// canonical presentation of the row span of a rational matrix as
// (1/den) * rowspan(B) with B in lower HNF and gcd(content(B), den) = 1
std::pair<Int, IMat> canonical_hnf_den(const QMat& rows);

// is v in the integer row span of lower triangular B?  (v rational)
bool hnf_membership(const IMat& B, std::vector<Rat> v);

// ---- linear algebra mod a prime ----

// basis of { x : m x = 0 mod p }, each vector of length m.cols with
// entries in [0, p)
std::vector<std::vector<Int>> modp_kernel(const IMat& m, const Int& p);

// echelon basis of the row space mod p
std::vector<std::vector<Int>> modp_row_basis(const IMat& m, const Int& p);

int modp_rank(const IMat& m, const Int& p);

}  // namespace qlat
