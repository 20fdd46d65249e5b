#include <random>

#include "doctest.h"
#include "qlat/enumerate.hpp"

using namespace qlat;

namespace {

QuatLattice hurwitz(const QuatAlgebra& H) {
  QuatElem h = Rat(1, 2) * (H.one() + H.i() + H.j() + H.ij());
  return lattice_from_generators(H, {H.one(), H.i(), H.j(), h});
}

Rat det_rat(QMat m) {
  Rat det = 1;
  for (int c = 0; c < m.cols; ++c) {
    int piv = -1;
    for (int r = c; r < m.rows; ++r)
      if (m(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv == -1) return Rat(0);
    if (piv != c) {
      for (int j = 0; j < m.cols; ++j) std::swap(m(piv, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (int r = c + 1; r < m.rows; ++r) {
      Rat f = m(r, c) / m(c, c);
      for (int j = c; j < m.cols; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return det;
}

// count sign classes by brute force when q(x) >= floor_scale * |x|^2
long brute_count(const TraceGram& g, const Rat& bound, long box) {
  const int n = g.G.rows;
  std::vector<Int> v(static_cast<size_t>(n), Int(0));
  long count = 0;
  auto rec = [&](auto&& self, int i) -> void {
    if (i < 0) {
      bool zero = true, first_sign_pos = false, seen = false;
      for (int k = n - 1; k >= 0; --k) {
        if (v[static_cast<size_t>(k)] != 0 && !seen) {
          seen = true;
          first_sign_pos = v[static_cast<size_t>(k)] > 0;
        }
        if (v[static_cast<size_t>(k)] != 0) zero = false;
      }
      if (!zero && first_sign_pos && gram_value(g, v) <= bound) ++count;
      return;
    }
    for (long t = -box; t <= box; ++t) {
      v[static_cast<size_t>(i)] = t;
      self(self, i - 1);
    }
  };
  rec(rec, n - 1);
  return count;
}

}  // namespace

TEST_CASE("trace inequality for totally positive integers") {
  NumberField K = NumberField::real_quadratic(15);
  std::mt19937 rng(11);
  int seen = 0;
  while (seen < 200) {
    FieldElem t = K.elem(Rat(static_cast<long>(rng() % 41) - 20),
                         Rat(static_cast<long>(rng() % 11) - 5));
    if (t.is_zero() || !totally_positive(t)) continue;
    ++seen;
    CHECK(trace(t) >= 2);
    if (trace(t) == 2) CHECK(t == K.one());
  }
  CHECK(trace(K.one()) == 2);
}

TEST_CASE("trace gram matrices") {
  NumberField Q = NumberField::rationals();
  QuatAlgebra H(Q, Q.one(), Q.one());
  QuatLattice L = lattice_from_generators(H, {H.one(), H.i(), H.j(), H.ij()});
  TraceGram gl = trace_gram(L, Q.one());
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(gl.G(i, j) == (i == j ? 1 : 0));

  TraceGram gm = trace_gram(hurwitz(H), Q.one());
  CHECK(det_rat(gm.G) == Rat(1, 4));

  CHECK_THROWS(trace_gram(L, Q.elem(-1)));

  // weighted version over a real quadratic field
  NumberField K = NumberField::real_quadratic(15);
  QuatAlgebra A(K, K.one(), K.one());
  QuatLattice M = lattice_from_generators(A, {A.one(), A.i(), A.j(), A.ij()});
  FieldElem eps = K.elem(4, 1);  // totally positive unit
  TraceGram gw = trace_gram(M, eps);
  CHECK(gw.G.rows == 8);
  CHECK(gw.G(0, 0) == trace(eps));
  CHECK(det_rat(gw.G) > 0);
}

TEST_CASE("short vectors") {
  TraceGram id4;
  id4.G = QMat(4, 4);
  for (int i = 0; i < 4; ++i) id4.G(i, i) = 1;
  CHECK(short_vectors(id4, 1).size() == 4);
  CHECK(short_vectors(id4, Rat(1, 2)).empty());
  CHECK(short_vectors(id4, 2).size() == 4 + 12);  // +-e_i and e_i +- e_j
  CHECK(gram_minimum(id4) == 1);

  NumberField Q = NumberField::rationals();
  QuatAlgebra H(Q, Q.one(), Q.one());
  TraceGram gm = trace_gram(hurwitz(H), Q.one());
  CHECK(short_vectors(gm, 1).size() == 12);  // the 24 unit quaternions up to sign
  CHECK(gram_minimum(gm) == 1);

  // diagonally dominant form: q(x) >= 3|x|^2, so a small box is exhaustive
  TraceGram dd;
  dd.G = QMat(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) dd.G(i, j) = (i == j) ? 4 : 1;
  for (Rat bound : {Rat(4), Rat(8), Rat(12)}) {
    auto sv = short_vectors(dd, bound);
    for (const auto& v : sv) CHECK(gram_value(dd, v) <= bound);
    CHECK(static_cast<long>(sv.size()) == brute_count(dd, bound, 2));
  }

  TraceGram bad;
  bad.G = QMat(2, 2);
  bad.G(0, 0) = 1;
  bad.G(1, 1) = -1;
  CHECK_THROWS(short_vectors(bad, 5));
}

TEST_CASE("principality of hurwitz ideals") {
  NumberField Q = NumberField::rationals();
  QuatAlgebra H(Q, Q.one(), Q.one());
  QuatLattice M = hurwitz(H);

  auto g0 = is_left_principal(M);
  REQUIRE(g0.has_value());
  CHECK(left_mul(*g0, M) == M);

  QuatLattice J = left_mul(H.one() + H.i(), M);
  auto g1 = is_left_principal(J);
  REQUIRE(g1.has_value());
  CHECK(left_mul(*g1, M) == J);
  CHECK(reduced_norm(*g1) == Q.elem(2));
}

TEST_CASE("principality detects the class number two split") {
  NumberField Q = NumberField::rationals();
  QuatAlgebra A(Q, Q.one(), Q.elem(11));
  QuatLattice M = maximal_order(A);

  // the three right ideals of norm (2): lines of M/2M
  FpQuotient q(M, lattice_scale(Rat(2), M), 2);
  std::vector<QuatLattice> lines;
  std::vector<Int> sel(4, Int(0));
  for (;;) {
    size_t pos = 0;
    while (pos < sel.size()) {
      sel[pos] += 1;
      if (sel[pos] < 2) break;
      sel[pos] = 0;
      ++pos;
    }
    if (pos == sel.size()) break;
    QuatLattice J = lattice_add(left_mul(q.lift(sel), M), lattice_scale(Rat(2), M));
    if (lattice_norm(J) != principal_ideal(Q.elem(2))) continue;
    bool fresh = true;
    for (const auto& seen : lines) fresh &= !(seen == J);
    if (fresh) lines.push_back(J);
  }
  REQUIRE(lines.size() == 3);

  int principal_count = 0;
  QuatLattice nonprincipal, principal_line;
  for (const auto& J : lines) {
    CHECK(right_order(J) == M);
    auto g = is_left_principal(J);
    if (g) {
      CHECK(left_mul(*g, M) == J);
      ++principal_count;
      principal_line = J;
    } else {
      nonprincipal = J;
    }
  }
  CHECK(principal_count >= 1);
  CHECK(principal_count <= 2);

  // left scaling preserves (non)principality
  QuatElem al = A.one() + A.i();
  CHECK(!is_left_principal(left_mul(al, nonprincipal)).has_value());
  CHECK(is_left_principal(left_mul(al, principal_line)).has_value());
}

TEST_CASE("unit groups of maximal orders") {
  NumberField Q = NumberField::rationals();
  QuatAlgebra H(Q, Q.one(), Q.one());
  QuatLattice M = hurwitz(H);
  UnitData u = unit_data(M);
  CHECK(u.norm_one_mod_pm1 == 12);
  CHECK(u.unit_index == 12);
  CHECK(u.x == 0);
  REQUIRE(u.norm_image_reps.size() == 1);
  CHECK(u.norm_image_reps[0] == Q.one());
  for (const auto& q : u.norm_one_reps) {
    CHECK(reduced_norm(q) == Q.one());
    CHECK(lattice_contains(M, q));
  }

  // conjugation invariance
  QuatElem be = H.one() + H.i() + H.j();
  QuatLattice Mc = left_mul(be, right_mul(M, inverse(be)));
  CHECK(is_order(Mc));
  UnitData uc = unit_data(Mc);
  CHECK(uc.norm_one_mod_pm1 == u.norm_one_mod_pm1);
  CHECK(uc.unit_index == u.unit_index);
  CHECK(uc.x == u.x);

  QuatAlgebra A11(Q, Q.one(), Q.elem(11));
  UnitData u11 = unit_data(maximal_order(A11));
  CHECK(u11.x == 0);
  bool small_group = u11.unit_index == 2 || u11.unit_index == 3;
  CHECK(small_group);
}

TEST_CASE("norm equations") {
  NumberField Q = NumberField::rationals();
  QuatAlgebra H(Q, Q.one(), Q.one());
  QuatLattice M = hurwitz(H);
  CHECK(solve_norm_equation(M, Q.one()) == H.one());
  QuatElem s2 = solve_norm_equation(M, Q.elem(2));
  CHECK(reduced_norm(s2) == Q.elem(2));
  QuatElem s7 = solve_norm_equation(M, Q.elem(7));
  CHECK(reduced_norm(s7) == Q.elem(7));
  CHECK_THROWS(solve_norm_equation(M, Q.elem(-3)));

  NumberField K = NumberField::real_quadratic(15);
  QuatAlgebra A(K, K.one(), K.one());
  QuatLattice M15 = maximal_order(A);
  FieldElem eps = K.elem(4, 1);
  QuatElem se = solve_norm_equation(M15, eps);
  CHECK(reduced_norm(se) == eps);
}
