#include <random>

#include "doctest.h"
#include "qlat/matrix.hpp"
#include "qlat/numeric.hpp"

using namespace qlat;

TEST_CASE("integer helpers") {
  CHECK(gcd(Int(12), Int(18)) == 6);
  CHECK(lcm(Int(4), Int(6)) == 12);
  CHECK(fdiv(Int(7), Int(2)) == 3);
  CHECK(fdiv(Int(-7), Int(2)) == -4);
  CHECK(fdiv(Int(7), Int(-2)) == -4);
  CHECK(rat_floor(Rat(7, 2)) == 3);
  CHECK(rat_floor(Rat(-7, 2)) == -4);
  CHECK(rat_ceil(Rat(7, 2)) == 4);
  CHECK(rat_ceil(Rat(-7, 2)) == -3);
  CHECK(isqrt(Int(99)) == 9);
  CHECK(isqrt(Int(100)) == 10);
  CHECK(is_perfect_square(Int(49)));
  CHECK(!is_perfect_square(Int(50)));
}

TEST_CASE("rational square roots") {
  CHECK(*sqrt_rat(Rat(49, 64)) == Rat(7, 8));
  CHECK(*sqrt_rat(Rat(0)) == 0);
  CHECK(!sqrt_rat(Rat(2)));
  CHECK(!sqrt_rat(Rat(3, 5)));
  CHECK(!sqrt_rat(Rat(-4)));
  std::mt19937 rng(7);
  for (int it = 0; it < 200; ++it) {
    Rat q(static_cast<long>(rng() % 2001) - 1000, static_cast<long>(rng() % 50) + 1);
    q.canonicalize();
    Rat s = *sqrt_rat(q * q);
    CHECK(s == abs(q));
  }
}

TEST_CASE("quadratic_int_range matches brute force") {
  std::mt19937 rng(11);
  for (int it = 0; it < 500; ++it) {
    Rat c(static_cast<long>(rng() % 241) - 120, static_cast<long>(rng() % 9) + 1);
    Rat bound(static_cast<long>(rng() % 900) - 30, static_cast<long>(rng() % 4) + 1);
    c.canonicalize();
    bound.canonicalize();
    std::vector<Int> hits;
    for (long x = -200; x <= 200; ++x) {
      Rat t = Rat(x) + c;
      if (t * t <= bound) hits.push_back(Int(x));
    }
    auto r = quadratic_int_range(c, bound);
    if (hits.empty()) {
      if (r) CHECK(r->first > r->second);
    } else {
      REQUIRE(r.has_value());
      CHECK(r->first == hits.front());
      CHECK(r->second == hits.back());
    }
  }
}

TEST_CASE("primality and factorisation") {
  CHECK(is_prime(Int(2)));
  CHECK(is_prime(Int(97)));
  CHECK(!is_prime(Int(1)));
  CHECK(!is_prime(Int(91)));
  auto f = factor_int(Int(360));
  REQUIRE(f.size() == 3);
  CHECK(f[0] == std::pair<Int, int>(Int(2), 3));
  CHECK(f[1] == std::pair<Int, int>(Int(3), 2));
  CHECK(f[2] == std::pair<Int, int>(Int(5), 1));
  CHECK(factor_int(Int(1)).empty());
  CHECK(sigma1(Int(1)) == 1);
  CHECK(sigma1(Int(6)) == 12);
  CHECK(sigma1(Int(12)) == 28);
  CHECK(sigma1(Int(97)) == 98);
}

TEST_CASE("rat_string") {
  CHECK(rat_string(Rat(5)) == "5");
  CHECK(rat_string(Rat(-3, 4)) == "-3/4");
  CHECK(rat_string(Rat(0)) == "0");
}

namespace {

// is v an integer combination of the rows of lower triangular H?
bool in_rowspan(const IMat& H, const std::vector<Int>& v) {
  std::vector<Int> w = v;
  for (int i = H.rows - 1; i >= 0; --i) {
    Int q = w[static_cast<size_t>(i)] / H(i, i);
    if (q * H(i, i) != w[static_cast<size_t>(i)]) return false;
    for (int j = 0; j <= i; ++j) w[static_cast<size_t>(j)] -= q * H(i, j);
  }
  return true;
}

// gcd of all n x n minors of an m x n matrix (covolume of the row lattice)
Int minor_gcd(const IMat& M) {
  int n = M.cols, m = M.rows;
  std::vector<int> idx(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
  Int g = 0;
  for (;;) {
    QMat sub(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) sub(i, j) = Rat(M(idx[static_cast<size_t>(i)], j));
    // determinant by fraction-free-ish Gaussian elimination on rationals
    Rat det = 1;
    bool sing = false;
    for (int c = 0; c < n && !sing; ++c) {
      int piv = -1;
      for (int r = c; r < n; ++r)
        if (sub(r, c) != 0) {
          piv = r;
          break;
        }
      if (piv < 0) {
        sing = true;
        break;
      }
      if (piv != c) {
        for (int j = 0; j < n; ++j) std::swap(sub(piv, j), sub(c, j));
        det = -det;
      }
      det *= sub(c, c);
      for (int r = c + 1; r < n; ++r) {
        Rat f = sub(r, c) / sub(c, c);
        for (int j = c; j < n; ++j) sub(r, j) -= f * sub(c, j);
      }
    }
    if (!sing) g = gcd(g, det.get_num());
    // next combination
    int k = n - 1;
    while (k >= 0 && idx[static_cast<size_t>(k)] == m - n + k) --k;
    if (k < 0) break;
    ++idx[static_cast<size_t>(k)];
    for (int j = k + 1; j < n; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
  }
  return g < 0 ? Int(-g) : g;
}

}  // namespace

TEST_CASE("hnf_lower hand cases") {
  IMat m(2, 2);
  m(0, 0) = 0;
  m(0, 1) = 1;
  m(1, 0) = 1;
  m(1, 1) = 0;
  CHECK(hnf_lower(m) == IMat::identity(2));

  IMat k(2, 2);
  k(0, 0) = 2;
  k(0, 1) = 0;
  k(1, 0) = 1;
  k(1, 1) = 1;
  IMat h = hnf_lower(k);
  CHECK(h == k);  // already canonical

  IMat r(3, 2);
  r(0, 0) = 4;
  r(0, 1) = 0;
  r(1, 0) = 6;
  r(1, 1) = 0;
  r(2, 0) = 5;
  r(2, 1) = 3;
  IMat hr = hnf_lower(r);
  CHECK(hr(0, 0) == 2);
  CHECK(hr(0, 1) == 0);
  CHECK(hr(1, 1) == 3);
  CHECK(hr(1, 0) >= 0);
  CHECK(hr(1, 0) < 2);
}

TEST_CASE("hnf_lower on random matrices: shape, span, covolume") {
  std::mt19937 rng(23);
  for (int it = 0; it < 120; ++it) {
    int n = 2 + static_cast<int>(rng() % 3);
    int m = n + static_cast<int>(rng() % 3);
    IMat M(m, n);
    for (auto& x : M.a) x = static_cast<long>(rng() % 21) - 10;
    if (int_row_rank(M) < n) continue;
    IMat H = hnf_lower(M);
    REQUIRE(H.rows == n);
    for (int i = 0; i < n; ++i) {
      CHECK(H(i, i) > 0);
      for (int j = i + 1; j < n; ++j) CHECK(H(i, j) == 0);
      for (int j = 0; j < i; ++j) {
        CHECK(H(i, j) >= 0);
        CHECK(H(i, j) < H(j, j));
      }
    }
    for (int i = 0; i < m; ++i) {
      std::vector<Int> v(static_cast<size_t>(n));
      for (int j = 0; j < n; ++j) v[static_cast<size_t>(j)] = M(i, j);
      CHECK(in_rowspan(H, v));
    }
    CHECK(diag_product(H) == minor_gcd(M));
  }
}

TEST_CASE("triangular and general inverses") {
  std::mt19937 rng(31);
  for (int it = 0; it < 60; ++it) {
    int n = 1 + static_cast<int>(rng() % 4);
    IMat L(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < i; ++j) L(i, j) = static_cast<long>(rng() % 9) - 4;
      L(i, i) = 1 + static_cast<long>(rng() % 5);
    }
    QMat inv = lower_tri_inverse(L);
    CHECK(mat_mul(to_rational(L), inv) == QMat::identity(n));
    QMat g(n, n);
    for (auto& x : g.a) {
      x = Rat(static_cast<long>(rng() % 13) - 6, 1 + static_cast<long>(rng() % 3));
      x.canonicalize();
    }
    bool sing = false;
    QMat gi;
    try {
      gi = qmat_inverse(g);
    } catch (const std::exception&) {
      sing = true;
    }
    if (!sing) CHECK(mat_mul(g, gi) == QMat::identity(n));
  }
}
