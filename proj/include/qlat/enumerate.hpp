#pragma once

#include <optional>

#include "qlat/lattice.hpp"

namespace qlat {

// Gram matrix of x -> Tr_{K/Q}(w * n(x)) on the HNF basis of a lattice;
// positive definite whenever w is totally positive
struct TraceGram {
  QMat G;
};

TraceGram trace_gram(const QuatLattice& L, const FieldElem& w);

Rat gram_value(const TraceGram& g, const std::vector<Int>& v);

// all v != 0 with v^T G v <= bound, one representative per {v, -v} pair,
// in a fixed deterministic order; every output is verified exactly
std::vector<std::vector<Int>> short_vectors(const TraceGram& g, const Rat& bound);

// smallest nonzero form value
Rat gram_minimum(const TraceGram& g);

// generator alpha with J = alpha * right_order(J) when J is a normal ideal
// (right order maximal); nullopt when no generator exists
std::optional<QuatElem> is_left_principal(const QuatLattice& J);

struct UnitData {
  Int norm_one_mod_pm1 = 0;                // |M^(1) / {+-1}|
  Int unit_index = 0;                      // [M^* : Z_K^*]
  std::vector<FieldElem> norm_image_reps;  // n(M^*) modulo squares of units
  int x = 0;                               // 2^x = |norm_image_reps|
  std::vector<QuatElem> norm_one_reps;     // M^(1) up to sign
  std::vector<QuatElem> unit_reps;         // M^* modulo Z_K^*, up to sign
};

UnitData unit_data(const QuatLattice& M);

// some x with n(x) = a, searched over (1/m)M for m = 1..den_cap;
// throws search_cap_error past the cap (a solution always exists in Q)
QuatElem solve_norm_equation(const QuatLattice& M, const FieldElem& a, int den_cap = 32);

}  // namespace qlat
