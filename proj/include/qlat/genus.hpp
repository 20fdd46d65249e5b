#pragma once

#include "qlat/class_sets.hpp"

namespace qlat {

// 2^{1-2[K:Q]} zeta_K(-1)^2 prod (N(p_i)-1)^2 / 2 over the finitely
// ramified primes; the total mass of any genus of maximal lattices
Rat siegel_mass(const QuatAlgebra& A, const std::vector<PrimeIdeal>& ramified);
Rat siegel_mass(const QuatAlgebra& A);

// L is a full normal lattice of norm exactly a
bool is_a_maximal(const QuatLattice& L, const FieldIdeal& a, const FieldIdeal& alg_disc);
bool is_a_maximal(const QuatLattice& L, const FieldIdeal& a);

struct GenusContext {
  ClassData cd;
  std::vector<NormalizerData> nds;   // normalizer data per order type
  std::vector<UnitData> type_units;  // unit data per order type
  FieldIdeal alg_disc;
};

GenusContext genus_context(const QuatAlgebra& A);

struct SMember {
  QuatLattice ideal;
  int left_type = 0;
};

// the right ideal classes with right order type_reps[i], represented by the
// products I_j * type_reps[i], restricted to norms in the narrow class of a
std::vector<SMember> build_S_i(const ClassData& cd, int i, const FieldIdeal& a);

// orbit representatives under I -> (member left equivalent to I g^{-1}) for
// g over the normalizer cosets of the common right order
std::vector<SMember> normalizer_orbits(const std::vector<SMember>& S, const NormalizerData& nd);

// subgroup of the totally positive units modulo unit squares generated by
// the norms of units of both orders and by the unit classes attached to
// normalizer pairs whose norm ideals multiply to the square of a principal
// ideal; returned as a subset of tp_unit_reps containing 1
std::vector<FieldElem> compute_U(const NumberField& K, const NormalizerData& nd_left,
                                 const NormalizerData& nd_right, const UnitData& ud_left,
                                 const UnitData& ud_right);

struct TypePairInvariants {
  int i = 0, j = 0;
  int f_i = 0, f_j = 0, f_ij = 0;  // normalizer norm groups and their overlap
  int x_i = 0, x_j = 0;            // unit norm images
  int u = 0;                       // totally positive units modulo squares
  int z_ij = 0;                    // index of U in the totally positive units
  int y_ij = 0;                    // y - z + u = f_ij + x_i + x_j
  std::vector<FieldElem> U_J;
};

TypePairInvariants type_pair_invariants(const GenusContext& ctx, int i, int j);

// (1/2) |M_i^(1)| |M_j^(1)| 2^y for a connecting ideal between types i, j
Int proper_automorphism_order(const TypePairInvariants& inv, const UnitData& ud_left,
                              const UnitData& ud_right);

// direct count over unit and normalizer coset pairs (alpha, beta) of both
// orders of J with n(alpha)/n(beta) a square c^2 and alpha J (c beta)^{-1} = J
Int proper_automorphism_order_brute(const QuatLattice& J, const std::vector<PrimeIdeal>& ramified);

struct GenusRep {
  QuatLattice ideal;  // the represented lattice alpha_u x_J J
  QuatLattice base;   // the orbit representative J
  QuatElem x_J;       // norm a_J
  QuatElem alpha_u;   // norm u
  FieldElem u;        // unit coset label
  FieldElem a_J;      // totally positive generator of n(J)^{-1} a
  int left_type = 0;
  int right_type = 0;
  Int aut_plus_order = 0;
  TraceGram gram;  // trace form of (base, u a_J n), isometric to (ideal, n)
};

// representatives of the proper isometry classes of normal lattices of norm
// a, certified by exact agreement of sum 1/|Aut+| with the Siegel mass;
// den_cap bounds the denominator search in the norm equation solves
std::vector<GenusRep> genus_representatives(const GenusContext& ctx, const FieldIdeal& a,
                                            int den_cap = 32);
std::vector<GenusRep> genus_representatives(const QuatAlgebra& A, const FieldIdeal& a,
                                            int den_cap = 32);

// minimum of the integral trace form of a representative
Rat trace_lattice_minimum(const GenusRep& rep);

// number of two sided equivalence classes of normal ideals with left order
// of type i and right order type_reps[j], checked against
// h_K 2^{s - f_i - f_j + f_ij}
Int two_sided_connecting_classes(const GenusContext& ctx, int i, int j);

}  // namespace qlat
