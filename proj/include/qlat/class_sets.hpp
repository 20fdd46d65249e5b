#pragma once

#include "qlat/enumerate.hpp"

namespace qlat {

// 2^{1-[K:Q]} |zeta_K(-1)| h_K prod (N(p_i) - 1) over finitely ramified primes
Rat eichler_mass(const QuatAlgebra& A, const std::vector<PrimeIdeal>& ramified);
Rat eichler_mass(const QuatAlgebra& A);

// eichler mass split evenly over the narrow class group
Rat mass_per_narrow_class(const QuatAlgebra& A);

struct ClassData {
  const QuatAlgebra* A = nullptr;
  QuatLattice M;                   // base maximal order
  std::vector<PrimeIdeal> ramified;
  std::vector<QuatLattice> right_ideal_reps;  // right M-ideals, sorted canonically
  int h = 0;
  std::vector<QuatLattice> left_orders;  // O_l per representative
  std::vector<UnitData> left_units;
  std::vector<QuatLattice> type_reps;  // conjugacy class representatives
  int t = 0;
  std::vector<int> left_type;  // type index per representative
};

// complete set of left equivalence classes of right M-ideals, certified by
// exact mass equality; fills everything except the type fields
ClassData right_ideal_classes(const QuatAlgebra& A);

// bucket the left orders into conjugacy classes
void maximal_order_types(ClassData& cd);

// sum of 1/[O_l(I)^* : Z_K^*] over representatives whose norm lies in the
// given narrow ideal class
Rat mass_of_narrow_class(const ClassData& cd, int narrow_index);

// right ideals of O of norm exactly P (lines of O/PO)
std::vector<QuatLattice> norm_p_right_ideals(const QuatLattice& O, const PrimeIdeal& P);

// two sided O-ideals, one lattice per (subset of ramified primes, ideal
// class representative); every two sided ideal is equivalent to one of
// these up to principal field scalings
std::vector<QuatLattice> two_sided_candidates(const QuatLattice& O,
                                              const std::vector<PrimeIdeal>& ramified);

bool orders_conjugate(const QuatLattice& O1, const QuatLattice& O2,
                      const std::vector<PrimeIdeal>& ramified);

struct NormalizerData {
  std::vector<QuatElem> coset_reps;  // N(M) modulo K^* M^*
  std::vector<FieldElem> pi_reps;    // norms, pairwise in distinct square classes
  int f = 0;                         // |coset_reps| = 2^f
};

NormalizerData normalizer_data(const QuatLattice& M, const std::vector<PrimeIdeal>& ramified);

// number of two sided ideal classes, counted directly and checked against
// 2^{s-f} h_K
Int two_sided_class_number(const QuatLattice& M, const std::vector<PrimeIdeal>& ramified,
                           const NormalizerData& nd);

}  // namespace qlat
