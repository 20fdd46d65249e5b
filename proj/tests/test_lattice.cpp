#include <random>

#include "doctest.h"
#include "qlat/lattice.hpp"

using namespace qlat;

namespace {

QuatLattice lipschitz(const QuatAlgebra& H) {
  return lattice_from_generators(H, {H.one(), H.i(), H.j(), H.ij()});
}

QuatLattice hurwitz(const QuatAlgebra& H) {
  QuatElem h = Rat(1, 2) * (H.one() + H.i() + H.j() + H.ij());
  return lattice_from_generators(H, {H.one(), H.i(), H.j(), h});
}

QuatElem random_int_quat(const QuatAlgebra& A, std::mt19937& rng) {
  auto pick = [&] {
    return A.field().elem(Rat(static_cast<long>(rng() % 7) - 3),
                          A.field().degree() == 2 ? Rat(static_cast<long>(rng() % 5) - 2) : Rat(0));
  };
  return A.elem(pick(), pick(), pick(), pick());
}

}  // namespace

TEST_CASE("coordinate round trip") {
  NumberField K = NumberField::real_quadratic(15);
  QuatAlgebra A(K, K.one(), K.one());
  CHECK(quat_dim(A) == 8);
  QuatElem q = A.elem(K.elem(Rat(1, 2), Rat(3)), K.elem(-2, 5), K.elem(0, Rat(-7, 3)), K.elem(4));
  CHECK(quat_unvec(A, quat_vec(q)) == q);

  NumberField Q = NumberField::rationals();
  QuatAlgebra H(Q, Q.one(), Q.one());
  CHECK(quat_dim(H) == 4);
  QuatElem r = H.elem(Q.elem(Rat(5, 3)), Q.elem(-1), Q.elem(0), Q.elem(7));
  CHECK(quat_unvec(H, quat_vec(r)) == r);
}

TEST_CASE("lattice construction and membership") {
  NumberField Q = NumberField::rationals();
  QuatAlgebra H(Q, Q.one(), Q.one());
  QuatLattice L = lipschitz(H);
  CHECK(lattice_covolume(L) == 1);
  CHECK(lattice_contains(L, H.i() + H.ij()));
  CHECK(!lattice_contains(L, Rat(1, 2) * H.i()));

  QuatLattice M = hurwitz(H);
  CHECK(lattice_covolume(M) == Rat(1, 2));
  for (const auto& v : lattice_basis(L)) CHECK(lattice_contains(M, v));
  QuatElem h = Rat(1, 2) * (H.one() + H.i() + H.j() + H.ij());
  CHECK(lattice_contains(M, h));
  CHECK(!lattice_contains(L, h));

  // rank-deficient spans are rejected
  CHECK_THROWS(lattice_from_generators(H, {H.one(), H.i()}));
}

TEST_CASE("sum, intersection, covolume identity") {
  NumberField Q = NumberField::rationals();
  QuatAlgebra H(Q, Q.one(), Q.one());
  QuatLattice M = hurwitz(H);
  QuatLattice J1 = left_mul(H.one() + H.i(), M);
  QuatLattice J2 = lattice_scale(Rat(3), M);
  QuatLattice S = lattice_add(J1, J2);
  QuatLattice T = lattice_intersect(J1, J2);
  for (const auto& v : lattice_basis(T)) {
    CHECK(lattice_contains(J1, v));
    CHECK(lattice_contains(J2, v));
  }
  for (const auto& v : lattice_basis(J1)) CHECK(lattice_contains(S, v));
  for (const auto& v : lattice_basis(J2)) CHECK(lattice_contains(S, v));
  CHECK(lattice_covolume(S) * lattice_covolume(T) ==
        lattice_covolume(J1) * lattice_covolume(J2));
}

TEST_CASE("orders: lipschitz and hurwitz") {
  NumberField Q = NumberField::rationals();
  QuatAlgebra H(Q, Q.one(), Q.one());
  QuatLattice L = lipschitz(H);
  QuatLattice M = hurwitz(H);
  CHECK(is_order(L));
  CHECK(is_order(M));
  CHECK(lattice_mul(M, M) == M);

  CHECK(reduced_discriminant(L) == principal_ideal(Q.elem(4)));
  CHECK(reduced_discriminant(M) == principal_ideal(Q.elem(2)));

  CHECK(conj_lattice(M) == M);
  CHECK(lattice_norm(M) == unit_ideal(Q));
  CHECK(lattice_inverse(M) == M);
  CHECK(left_order(M) == M);
  CHECK(right_order(M) == M);
}

TEST_CASE("principal two sided ideal of the hurwitz order") {
  NumberField Q = NumberField::rationals();
  QuatAlgebra H(Q, Q.one(), Q.one());
  QuatLattice M = hurwitz(H);
  QuatElem u = H.one() + H.i();
  QuatLattice P2 = left_mul(u, M);
  CHECK(P2 == right_mul(M, u));  // (1+i) normalizes M
  CHECK(left_order(P2) == M);
  CHECK(right_order(P2) == M);
  CHECK(lattice_norm(P2) == principal_ideal(Q.elem(2)));
  CHECK(lattice_mul(P2, P2) == lattice_scale(Rat(2), M));
  CHECK(lattice_mul(P2, lattice_inverse(P2)) == M);
  CHECK(lattice_mul(lattice_inverse(P2), P2) == M);
}

TEST_CASE("right ideal arithmetic and inverses") {
  NumberField Q = NumberField::rationals();
  QuatAlgebra H(Q, Q.one(), Q.one());
  QuatLattice M = hurwitz(H);
  QuatElem al = H.elem(Q.elem(1), Q.elem(2), Q.elem(0), Q.elem(0));  // 1 + 2i, norm 5
  QuatLattice J = lattice_add(left_mul(al, M), lattice_scale(Rat(5), M));
  CHECK(right_order(J) == M);
  QuatLattice OL = left_order(J);
  CHECK(is_order(OL));
  CHECK(reduced_discriminant(OL) == principal_ideal(Q.elem(2)));
  CHECK(lattice_norm(J) == principal_ideal(Q.elem(5)));
  CHECK(lattice_norm(conj_lattice(J)) == lattice_norm(J));
  QuatLattice Jinv = lattice_inverse(J);
  CHECK(lattice_mul(J, Jinv) == OL);
  CHECK(lattice_mul(Jinv, J) == M);
  // norm is multiplicative under scaling
  QuatElem g = H.elem(Q.elem(1), Q.elem(1), Q.elem(1), Q.elem(0));
  CHECK(lattice_norm(left_mul(g, J)) ==
        ideal_mul(lattice_norm(J), reduced_norm(g)));
}

TEST_CASE("lattice product is associative") {
  NumberField Q = NumberField::rationals();
  QuatAlgebra H(Q, Q.one(), Q.one());
  QuatLattice M = hurwitz(H);
  std::mt19937 rng(77);
  for (int rep = 0; rep < 4; ++rep) {
    QuatElem x = random_int_quat(H, rng), y = random_int_quat(H, rng);
    if (x.is_zero() || y.is_zero()) continue;
    QuatLattice A1 = lattice_add(left_mul(x, M), lattice_scale(Rat(4), M));
    QuatLattice A2 = lattice_add(left_mul(y, M), lattice_scale(Rat(9), M));
    CHECK(lattice_mul(lattice_mul(A1, A2), A1) == lattice_mul(A1, lattice_mul(A2, A1)));
  }
}

TEST_CASE("maximal order over the rationals") {
  NumberField Q = NumberField::rationals();
  QuatAlgebra H(Q, Q.one(), Q.one());
  QuatLattice M = maximal_order(H);
  CHECK(M == hurwitz(H));
  CHECK(is_order(M));
  auto ram = ramified_primes(M);
  REQUIRE(ram.size() == 1);
  CHECK(ram[0].p == 2);

  // two sided maximal ideals
  QuatLattice P2 = two_sided_maximal_ideal(M, ram[0]);
  CHECK(P2 == left_mul(H.one() + H.i(), M));
  CHECK(P2 != lattice_scale(Rat(2), M));
  auto p3 = primes_above(Q, 3);
  REQUIRE(p3.size() == 1);
  CHECK(two_sided_maximal_ideal(M, p3[0]) == lattice_scale(Rat(3), M));
}

TEST_CASE("maximal order ramified at 11") {
  NumberField Q = NumberField::rationals();
  QuatAlgebra A(Q, Q.one(), Q.elem(11));
  QuatLattice M = maximal_order(A);
  CHECK(is_order(M));
  CHECK(reduced_discriminant(M) == principal_ideal(Q.elem(11)));
  CHECK(lattice_covolume(M) == Rat(1, 4));
  auto ram = ramified_primes(M);
  REQUIRE(ram.size() == 1);
  CHECK(ram[0].p == 11);
  QuatLattice R = two_sided_maximal_ideal(M, ram[0]);
  CHECK(R != lattice_scale(Rat(11), M));
  CHECK(lattice_mul(R, R) == lattice_scale(Rat(11), M));
  auto p2 = primes_above(Q, 2);
  CHECK(two_sided_maximal_ideal(M, p2[0]) == lattice_scale(Rat(2), M));
}

TEST_CASE("maximal order over a real quadratic field") {
  NumberField K = NumberField::real_quadratic(15);
  QuatAlgebra A(K, K.one(), K.one());
  QuatLattice M = maximal_order(A);
  CHECK(is_order(M));
  CHECK(reduced_discriminant(M) == unit_ideal(K));
  CHECK(ramified_primes(M).empty());
  CHECK(lattice_norm(M) == unit_ideal(K));
  CHECK(conj_lattice(M) == M);

  // everywhere unramified: the two sided ideal over any prime is p M
  for (long p : {2L, 3L, 5L, 7L}) {
    for (const auto& P : primes_above(K, Int(p)))
      CHECK(two_sided_maximal_ideal(M, P) == lattice_scale(P.P, M));
  }

  // scaling by a nontrivial ideal class keeps orders intact
  auto p3 = primes_above(K, 3);
  REQUIRE(p3.size() == 1);
  QuatLattice J = lattice_scale(p3[0].P, M);
  CHECK(left_order(J) == M);
  CHECK(right_order(J) == M);
  CHECK(lattice_norm(J) == ideal_mul(p3[0].P, p3[0].P));
}

TEST_CASE("non order examples") {
  NumberField K = NumberField::real_quadratic(15);
  QuatAlgebra A(K, K.one(), K.one());
  // Z-span of 1, i, j, ij with omega rows doubled: not an omega stable ring
  QMat rows(8, 8);
  for (int k = 0; k < 8; ++k) rows(k, k) = Rat(k % 2 == 0 ? 1 : 2);
  QuatLattice L = lattice_from_rows(A, rows);
  CHECK(!is_order(L));

  NumberField Q = NumberField::rationals();
  QuatAlgebra H(Q, Q.one(), Q.one());
  QuatLattice P2 = left_mul(H.one() + H.i(), hurwitz(H));
  CHECK(!is_order(P2));  // no identity
}

TEST_CASE("quotients mod p") {
  NumberField Q = NumberField::rationals();
  QuatAlgebra H(Q, Q.one(), Q.one());
  QuatLattice M = hurwitz(H);

  FpQuotient q(M, lattice_scale(Rat(2), M), 2);
  CHECK(q.dim() == 4);
  std::mt19937 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    QuatElem x = random_int_quat(H, rng), y = random_int_quat(H, rng);
    auto cx = q.coords(x), cy = q.coords(y);
    CHECK(q.coords(q.lift(cx)) == cx);
    CHECK(lattice_contains(M, q.lift(cx)));
    CHECK(q.coords(x + y) == q.add(cx, cy));
    CHECK(q.coords(x * y) == q.mul(cx, cy));
  }
  CHECK(q.is_zero(q.coords(H.one() + H.one())));

  // quotient by the ramified two sided ideal is a field with 4 elements
  QuatLattice P2 = left_mul(H.one() + H.i(), M);
  FpQuotient qf(M, P2, 2);
  CHECK(qf.dim() == 2);
  auto one = qf.coords(H.one());
  std::vector<std::vector<Int>> classes = {{0, 1}, {1, 0}, {1, 1}};
  for (const auto& v : classes) CHECK(qf.mul(v, qf.mul(v, v)) == one);
}
