#include "qlat/genus.hpp"

#include <algorithm>
#include <set>

#include "doctest.h"

using namespace qlat;

namespace {

const QuatAlgebra& hamilton() {
  static NumberField Q = NumberField::rationals();
  static QuatAlgebra A(Q, Q.elem(1), Q.elem(1));
  return A;
}

const QuatAlgebra& disc11() {
  static NumberField Q = NumberField::rationals();
  static QuatAlgebra A(Q, Q.elem(1), Q.elem(11));
  return A;
}

const QuatAlgebra& q15() {
  static NumberField K = NumberField::real_quadratic(15);
  static QuatAlgebra A(K, K.elem(1), K.elem(1));
  return A;
}

const GenusContext& q15_ctx() {
  static GenusContext ctx = genus_context(q15());
  return ctx;
}

// locate the unique order type with the given unit profile
int type_with(const GenusContext& ctx, int norm_one, int x) {
  int found = -1;
  for (int i = 0; i < ctx.cd.t; ++i) {
    if (ctx.type_units[i].norm_one_mod_pm1 != norm_one || ctx.type_units[i].x != x) continue;
    REQUIRE(found < 0);
    found = i;
  }
  REQUIRE(found >= 0);
  return found;
}

Rat genus_mass(const std::vector<GenusRep>& reps) {
  Rat m = 0;
  for (const auto& r : reps) m += Rat(1) / Rat(r.aut_plus_order);
  return m;
}

}  // namespace

TEST_CASE("siegel mass values") {
  CHECK(siegel_mass(hamilton()) == Rat(1, 576));
  CHECK(siegel_mass(disc11()) == Rat(25, 144));
  CHECK(siegel_mass(q15()) == Rat(1, 2));

  // sum over the narrow classes equals eichler_mass^2 h+ / h^2 2^{-1-s},
  // stated per class here since the mass does not depend on the class
  for (const QuatAlgebra* A : {&hamilton(), &disc11(), &q15()}) {
    QuatLattice M = maximal_order(*A);
    auto ram = ramified_primes(M);
    Rat e = eichler_mass(*A, ram);
    Rat h = Rat(A->field().class_data().h);
    Rat rhs = (e * e) / (h * h);
    for (size_t k = 0; k <= ram.size(); ++k) rhs /= 2;
    CHECK(siegel_mass(*A, ram) == rhs);
  }
}

TEST_CASE("maximal lattice certification") {
  const QuatAlgebra& A = hamilton();
  const NumberField& Q = A.field();
  QuatLattice M = maximal_order(A);
  CHECK(is_a_maximal(M, unit_ideal(Q)));
  QuatLattice M2 = lattice_scale(Q.elem(2), M);
  CHECK_FALSE(is_a_maximal(M2, unit_ideal(Q)));
  CHECK(is_a_maximal(M2, principal_ideal(Q.elem(4))));
  QuatElem opi = A.one() + A.i();
  CHECK(is_a_maximal(left_mul(opi, M), principal_ideal(Q.elem(2))));
}

TEST_CASE("hamilton genus has one class") {
  GenusContext ctx = genus_context(hamilton());
  const NumberField& Q = ctx.cd.A->field();
  auto reps = genus_representatives(ctx, unit_ideal(Q));
  REQUIRE(reps.size() == 1);
  CHECK(reps[0].aut_plus_order == 576);
  CHECK(reps[0].ideal == ctx.cd.M);
  CHECK(trace_lattice_minimum(reps[0]) == Rat(1));
  CHECK(proper_automorphism_order_brute(reps[0].ideal, ctx.cd.ramified) == 576);

  TypePairInvariants inv = type_pair_invariants(ctx, 0, 0);
  CHECK(inv.f_i == 1);
  CHECK(inv.f_ij == 1);
  CHECK(inv.x_i == 0);
  CHECK(inv.u == 0);
  CHECK(inv.z_ij == 0);
  CHECK(inv.y_ij == 1);

  // scaling the norm ideal by a totally positive scalar keeps the count
  auto scaled = genus_representatives(ctx, principal_ideal(Q.elem(2)));
  REQUIRE(scaled.size() == 1);
  CHECK(scaled[0].aut_plus_order == 576);
  CHECK(is_a_maximal(scaled[0].ideal, principal_ideal(Q.elem(2)), ctx.alg_disc));
  CHECK(trace_lattice_minimum(scaled[0]) == Rat(2));
}

TEST_CASE("discriminant eleven genus") {
  GenusContext ctx = genus_context(disc11());
  const NumberField& Q = ctx.cd.A->field();
  auto reps = genus_representatives(ctx, unit_ideal(Q));
  REQUIRE(reps.size() == 4);
  CHECK(genus_mass(reps) == Rat(25, 144));
  std::vector<Int> auts;
  for (const auto& r : reps) auts.push_back(r.aut_plus_order);
  std::sort(auts.begin(), auts.end());
  CHECK(auts == std::vector<Int>{16, 24, 24, 36});
  for (const auto& r : reps) {
    CHECK(is_a_maximal(r.ideal, unit_ideal(Q), ctx.alg_disc));
    CHECK(proper_automorphism_order_brute(r.ideal, ctx.cd.ramified) == r.aut_plus_order);
  }
}

TEST_CASE("q15 type pair invariants") {
  const GenusContext& ctx = q15_ctx();
  REQUIRE(ctx.cd.t == 8);
  int i1 = type_with(ctx, 4, 0);
  int i3 = type_with(ctx, 12, 0);
  int i4 = type_with(ctx, 1, 1);
  int i6 = type_with(ctx, 6, 0);
  int i8 = type_with(ctx, 3, 0);

  int twists = 0;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      TypePairInvariants inv = type_pair_invariants(ctx, i, j);
      CHECK(inv.f_i == 1);
      CHECK(inv.f_j == 1);
      CHECK(inv.f_ij == 1);
      CHECK(inv.u == 1);
      CHECK(inv.y_ij - inv.z_ij + inv.u == inv.f_ij + inv.x_i + inv.x_j);
      if (inv.z_ij == 1) {
        CHECK(inv.x_i == 0);
        CHECK(inv.x_j == 0);
      }
      twists += 1 << inv.z_ij;
    }
  }
  CHECK(twists == 72);

  auto z = [&](int i, int j) { return type_pair_invariants(ctx, i, j).z_ij; };
  CHECK(z(i1, i1) == 1);
  CHECK(z(i3, i3) == 1);
  CHECK(z(i1, i3) == 1);
  CHECK(z(i3, i1) == 1);
  CHECK(z(i6, i6) == 1);
  CHECK(z(i8, i8) == 1);
  CHECK(z(i6, i8) == 1);
  CHECK(z(i8, i6) == 1);
  CHECK(z(i1, i6) == 0);
  CHECK(z(i1, i8) == 0);
  CHECK(z(i3, i6) == 0);
  CHECK(z(i3, i8) == 0);
  CHECK(z(i4, i4) == 0);

  TypePairInvariants inv33 = type_pair_invariants(ctx, i3, i3);
  CHECK(inv33.y_ij == 1);
  CHECK(proper_automorphism_order(inv33, ctx.type_units[i3], ctx.type_units[i3]) == 576);
  TypePairInvariants inv44 = type_pair_invariants(ctx, i4, i4);
  CHECK(inv44.y_ij == 2);
  CHECK(proper_automorphism_order(inv44, ctx.type_units[i4], ctx.type_units[i4]) == 8);
  TypePairInvariants inv11 = type_pair_invariants(ctx, i1, i1);
  CHECK(inv11.y_ij == 1);
  CHECK(proper_automorphism_order(inv11, ctx.type_units[i1], ctx.type_units[i1]) == 64);
}

TEST_CASE("q15 genus enumeration") {
  const GenusContext& ctx = q15_ctx();
  const NumberField& K = ctx.cd.A->field();
  int i3 = type_with(ctx, 12, 0);

  PrimeIdeal p3 = factor_ideal(principal_ideal(K.elem(3)))[0].first;
  PrimeIdeal p5 = factor_ideal(principal_ideal(K.elem(5)))[0].first;
  FieldIdeal p15 = ideal_mul(p3.P, p5.P);

  // class sizes of the right ideal classes over one type, one per narrow class
  std::multiset<size_t> sizes;
  sizes.insert(build_S_i(ctx.cd, 0, unit_ideal(K)).size());
  sizes.insert(build_S_i(ctx.cd, 0, ideal_inverse(p3.P)).size());
  sizes.insert(build_S_i(ctx.cd, 0, ideal_inverse(p5.P)).size());
  sizes.insert(build_S_i(ctx.cd, 0, ideal_inverse(p15)).size());
  CHECK(sizes == std::multiset<size_t>{1, 2, 2, 3});

  auto g1 = genus_representatives(ctx, unit_ideal(K));
  CHECK(g1.size() == 22);
  CHECK(genus_mass(g1) == Rat(1, 2));
  CHECK(genus_representatives(ctx, ideal_inverse(p3.P)).size() == 18);
  CHECK(genus_representatives(ctx, ideal_inverse(p5.P)).size() == 18);

  int twisted = 0;
  for (const auto& r : g1)
    if (!(r.u == K.one())) ++twisted;
  CHECK(twisted == 4);

  // the two classes with both orders of the type with automorphism group of
  // order 24: the twisted one is the extremal trace form
  std::multiset<Rat> mins33;
  for (const auto& r : g1) {
    if (r.left_type != i3 || r.right_type != i3) continue;
    CHECK(r.aut_plus_order == 576);
    CHECK(proper_automorphism_order_brute(r.ideal, ctx.cd.ramified) == 576);
    mins33.insert(trace_lattice_minimum(r));
  }
  CHECK(mins33 == std::multiset<Rat>{Rat(2), Rat(6)});

  // the genus whose trace forms are even unimodular of rank 8
  auto g15 = genus_representatives(ctx, ideal_inverse(p15));
  CHECK(g15.size() == 14);
  CHECK(genus_mass(g15) == Rat(1, 2));
  for (const auto& r : g15) {
    CHECK(trace_lattice_minimum(r) == Rat(2));
    const QMat& G = r.gram.G;
    for (int row = 0; row < G.rows; ++row) {
      for (int col = 0; col < G.cols; ++col) CHECK(G(row, col).get_den() == 1);
      CHECK(G(row, row).get_num() % 2 == 0);
    }
  }
}

TEST_CASE("q15 extremal trace forms") {
  const GenusContext& ctx = q15_ctx();
  const NumberField& K = ctx.cd.A->field();
  int i3 = type_with(ctx, 12, 0);
  const QuatLattice& M3 = ctx.cd.type_reps[i3];
  CHECK(gram_minimum(trace_gram(M3, K.one())) == Rat(2));
  CHECK(gram_minimum(trace_gram(M3, K.elem(4, 1))) == Rat(6));
}

TEST_CASE("two sided connecting class counts") {
  GenusContext hc = genus_context(hamilton());
  CHECK(two_sided_connecting_classes(hc, 0, 0) == 1);

  GenusContext dc = genus_context(disc11());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(two_sided_connecting_classes(dc, i, j) == 1);

  const GenusContext& ctx = q15_ctx();
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) CHECK(two_sided_connecting_classes(ctx, i, j) == 1);
}
