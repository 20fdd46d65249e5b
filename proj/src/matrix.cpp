#include "qlat/matrix.hpp"

namespace qlat {

QMat to_rational(const IMat& m) {
  QMat q(m.rows, m.cols);
  for (size_t k = 0; k < m.a.size(); ++k) q.a[k] = Rat(m.a[k]);
  return q;
}

namespace {

void row_sub(IMat& m, int dst, int src, const Int& q) {
  if (q == 0) return;
  for (int j = 0; j < m.cols; ++j) m(dst, j) -= q * m(src, j);
}

void row_swap(IMat& m, int i, int k) {
  if (i == k) return;
  for (int j = 0; j < m.cols; ++j) std::swap(m(i, j), m(k, j));
}

void row_negate(IMat& m, int i) {
  for (int j = 0; j < m.cols; ++j) m(i, j) = -m(i, j);
}

// Reduce column `col` among rows [0, top) to a single nonzero entry by
// Euclidean row operations.  Returns the row index holding the gcd, or -1 if
// the column is zero there.
int gcd_sweep(IMat& m, int top, int col) {
  int piv = -1;
  for (;;) {
    piv = -1;
    int other = -1;
    for (int i = 0; i < top; ++i) {
      if (m(i, col) == 0) continue;
      if (piv == -1) {
        piv = i;
      } else {
        other = i;
        break;
      }
    }
    if (other == -1) return piv;
    // make |m(piv,col)| <= |m(other,col)| then reduce
    Int a = m(piv, col), b = m(other, col);
    if (cmp(abs(a), abs(b)) > 0) {
      std::swap(piv, other);
      std::swap(a, b);
    }
    Int q = fdiv(b, a);
    row_sub(m, other, piv, q);
  }
}

}  // namespace

IMat hnf_lower(IMat m) {
  const int n = m.cols;
  int bottom = m.rows;  // rows [bottom, m.rows) are placed pivots
  for (int col = n - 1; col >= 0; --col) {
    int piv = gcd_sweep(m, bottom, col);
    if (piv == -1) throw std::invalid_argument("hnf_lower: rows are not of full column rank");
    if (m(piv, col) < 0) row_negate(m, piv);
    --bottom;
    row_swap(m, piv, bottom);
  }
  IMat h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h(i, j) = m(bottom + i, j);
  // normalise entries below the diagonal
  for (int i = 0; i < n; ++i)
    for (int j = i - 1; j >= 0; --j) {
      Int q = fdiv(h(i, j), h(j, j));
      row_sub(h, i, j, q);
    }
  return h;
}

int int_row_rank(IMat m) {
  const int n = m.cols;
  int bottom = m.rows;
  int rank = 0;
  for (int col = n - 1; col >= 0; --col) {
    int piv = gcd_sweep(m, bottom, col);
    if (piv == -1) continue;
    ++rank;
    --bottom;
    row_swap(m, piv, bottom);
  }
  return rank;
}

Int content(const IMat& m) {
  Int g = 0;
  for (const auto& x : m.a) g = gcd(g, x);
  return g;
}

Int diag_product(const IMat& m) {
  assert(m.rows == m.cols);
  Int p = 1;
  for (int i = 0; i < m.rows; ++i) p *= m(i, i);
  return p;
}

QMat lower_tri_inverse(const IMat& m) {
  assert(m.rows == m.cols);
  const int n = m.rows;
  QMat inv(n, n);
  // solve m * x = e_k column by column; m lower triangular
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      Rat s = (i == k) ? Rat(1) : Rat(0);
      for (int j = 0; j < i; ++j) s -= Rat(m(i, j)) * inv(j, k);
      if (m(i, i) == 0) throw std::invalid_argument("lower_tri_inverse: singular");
      inv(i, k) = s / Rat(m(i, i));
    }
  }
  return inv;
}

std::pair<Int, IMat> canonical_hnf_den(const QMat& rows) {
  Int D = 1;
  for (const auto& x : rows.a) D = lcm(D, x.get_den());
  IMat M(rows.rows, rows.cols);
  for (size_t k = 0; k < rows.a.size(); ++k) {
    Rat v = rows.a[k] * Rat(D);
    M.a[k] = v.get_num();
  }
  IMat H = hnf_lower(M);
  Int c = content(H);
  for (auto& x : H.a) x /= c;
  Int g = gcd(c, D);
  Int num = c / g, den = D / g;
  if (num != 1)
    for (auto& x : H.a) x *= num;
  return {den, std::move(H)};
}

bool hnf_membership(const IMat& B, std::vector<Rat> v) {
  for (int i = B.rows - 1; i >= 0; --i) {
    Rat c = v[static_cast<size_t>(i)] / Rat(B(i, i));
    if (c.get_den() != 1) return false;
    if (c == 0) continue;
    for (int j = 0; j <= i; ++j) v[static_cast<size_t>(j)] -= c * Rat(B(i, j));
  }
  return true;
}

namespace {

Int mod_pos(const Int& x, const Int& p) {
  Int r = x % p;
  if (r < 0) r += p;
  return r;
}

Int inv_mod(const Int& x, const Int& p) {
  Int r;
  if (mpz_invert(r.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()) == 0)
    throw std::invalid_argument("inv_mod: not invertible");
  return r;
}

// reduce m mod p to row echelon form; returns pivot column of each surviving row
std::vector<int> modp_echelon(IMat& m, const Int& p) {
  for (auto& x : m.a) x = mod_pos(x, p);
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    int piv = -1;
    for (int i = row; i < m.rows; ++i)
      if (m(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    for (int j = 0; j < m.cols; ++j) std::swap(m(piv, j), m(row, j));
    Int inv = inv_mod(m(row, col), p);
    for (int j = 0; j < m.cols; ++j) m(row, j) = mod_pos(m(row, j) * inv, p);
    for (int i = 0; i < m.rows; ++i) {
      if (i == row || m(i, col) == 0) continue;
      Int f = m(i, col);
      for (int j = 0; j < m.cols; ++j) m(i, j) = mod_pos(m(i, j) - f * m(row, j), p);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::vector<std::vector<Int>> modp_kernel(const IMat& m, const Int& p) {
  IMat e = m;
  std::vector<int> pivots = modp_echelon(e, p);
  std::vector<bool> is_pivot(static_cast<size_t>(m.cols), false);
  for (int c : pivots) is_pivot[static_cast<size_t>(c)] = true;
  std::vector<std::vector<Int>> out;
  for (int free = 0; free < m.cols; ++free) {
    if (is_pivot[static_cast<size_t>(free)]) continue;
    std::vector<Int> v(static_cast<size_t>(m.cols), Int(0));
    v[static_cast<size_t>(free)] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) {
      // row r: x_{pivots[r]} + sum of free entries = 0
      v[static_cast<size_t>(pivots[r])] = mod_pos(-e(static_cast<int>(r), free), p);
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<std::vector<Int>> modp_row_basis(const IMat& m, const Int& p) {
  IMat e = m;
  std::vector<int> pivots = modp_echelon(e, p);
  std::vector<std::vector<Int>> out;
  for (size_t r = 0; r < pivots.size(); ++r) {
    std::vector<Int> v(static_cast<size_t>(m.cols));
    for (int j = 0; j < m.cols; ++j) v[static_cast<size_t>(j)] = e(static_cast<int>(r), j);
    out.push_back(std::move(v));
  }
  return out;
}

int modp_rank(const IMat& m, const Int& p) {
  IMat e = m;
  return static_cast<int>(modp_echelon(e, p).size());
}

QMat qmat_inverse(const QMat& m) {
  assert(m.rows == m.cols);
  const int n = m.rows;
  QMat a = m;
  QMat inv = QMat::identity(n);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int i = col; i < n; ++i)
      if (a(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv == -1) throw std::invalid_argument("qmat_inverse: singular");
    for (int j = 0; j < n; ++j) {
      std::swap(a(piv, j), a(col, j));
      std::swap(inv(piv, j), inv(col, j));
    }
    Rat d = a(col, col);
    for (int j = 0; j < n; ++j) {
      a(col, j) /= d;
      inv(col, j) /= d;
    }
    for (int i = 0; i < n; ++i) {
      if (i == col || a(i, col) == 0) continue;
      Rat f = a(i, col);
      for (int j = 0; j < n; ++j) {
        a(i, j) -= f * a(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

}  // namespace qlat
