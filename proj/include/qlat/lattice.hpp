#pragma once

#include "qlat/quat.hpp"

namespace qlat {

// Full Z_K-lattice in a quaternion algebra, stored as (1/den) * rowspan(B)
// over the Z-basis of the algebra (1, i, j, ij for K = Q, interleaved with
// the w-multiples for quadratic K).  B is 4n x 4n in lower HNF with
// gcd(content(B), den) = 1, so equality is structural.
struct QuatLattice {
  const QuatAlgebra* A = nullptr;
  Int den = 1;
  IMat B;

  bool operator==(const QuatLattice& o) const { return den == o.den && B == o.B; }
  bool operator!=(const QuatLattice& o) const { return !(*this == o); }
};

// dimension of the algebra as a Q-vector space (4 or 8)
int quat_dim(const QuatAlgebra& A);

// coordinates over the Z-basis and back
std::vector<Rat> quat_vec(const QuatElem& q);
QuatElem quat_unvec(const QuatAlgebra& A, const std::vector<Rat>& v);

QuatLattice lattice_from_rows(const QuatAlgebra& A, const QMat& rows);
// Z_K-module generated by the given elements
QuatLattice lattice_from_generators(const QuatAlgebra& A, const std::vector<QuatElem>& gens);

std::vector<QuatElem> lattice_basis(const QuatLattice& L);
bool lattice_contains(const QuatLattice& L, const QuatElem& q);
// covolume relative to the standard basis: det(B) / den^{4n}
Rat lattice_covolume(const QuatLattice& L);

QuatLattice lattice_add(const QuatLattice& x, const QuatLattice& y);
QuatLattice lattice_intersect(const QuatLattice& x, const QuatLattice& y);
// Z-span of all pairwise products (the product of lattices)
QuatLattice lattice_mul(const QuatLattice& x, const QuatLattice& y);
QuatLattice left_mul(const QuatElem& q, const QuatLattice& L);   // q L
QuatLattice right_mul(const QuatLattice& L, const QuatElem& q);  // L q
QuatLattice lattice_scale(const FieldElem& c, const QuatLattice& L);
QuatLattice lattice_scale(const Rat& c, const QuatLattice& L);
QuatLattice lattice_scale(const FieldIdeal& a, const QuatLattice& L);
QuatLattice conj_lattice(const QuatLattice& L);

QuatLattice left_order(const QuatLattice& L);   // { q : q L in L }
QuatLattice right_order(const QuatLattice& L);  // { q : L q in L }
bool is_order(const QuatLattice& L);

// Z_K-ideal generated by the reduced norms of all lattice elements
FieldIdeal lattice_norm(const QuatLattice& L);

// reduced discriminant of an order: the square root of the Z_K-ideal
// generated by the 4x4 trace form determinants
FieldIdeal reduced_discriminant(const QuatLattice& O);

// inverse of a lattice with respect to multiplication:
// conj(L) scaled by norm(L)^{-1}; satisfies L * inv = left order,
// inv * L = right order when L is locally principal
QuatLattice lattice_inverse(const QuatLattice& L);

// a maximal order, deterministic for a given algebra
QuatLattice maximal_order(const QuatAlgebra& A);

// finite places where the algebra ramifies: prime divisors of the reduced
// discriminant of a maximal order
std::vector<PrimeIdeal> ramified_primes(const QuatLattice& max_order);

// preimage in O of the Jacobson radical of O/pO (p the rational prime of P,
// conditions taken at the place P); 4f-dimensional machinery over F_p
QuatLattice radical_preimage(const QuatLattice& O, const PrimeIdeal& P);

// the unique two sided maximal ideal of a maximal order above P:
// P M itself at split places, the radical preimage at ramified ones
QuatLattice two_sided_maximal_ideal(const QuatLattice& M, const PrimeIdeal& P);

// canonical sort key / comparison for deterministic orderings
int lattice_cmp(const QuatLattice& x, const QuatLattice& y);
std::string lattice_key(const QuatLattice& x);

// Quotient big/small as an F_p vector space, for p * big in small in big.
// Induced multiplication is available when small is a two sided ideal of
// big under the lattice product.
class FpQuotient {
 public:
  FpQuotient(QuatLattice big, QuatLattice small, Int p);

  const QuatLattice& big() const { return big_; }
  const QuatLattice& small() const { return small_; }
  const Int& p() const { return p_; }
  int dim() const { return static_cast<int>(free_pos_.size()); }

  // coordinates in [0, p) of the class of q (q must lie in big)
  std::vector<Int> coords(const QuatElem& q) const;
  // canonical representative
  QuatElem lift(const std::vector<Int>& c) const;
  std::vector<Int> mul(const std::vector<Int>& u, const std::vector<Int>& v) const;
  std::vector<Int> add(const std::vector<Int>& u, const std::vector<Int>& v) const;
  std::vector<Int> smul(const Int& c, const std::vector<Int>& u) const;
  bool is_zero(const std::vector<Int>& u) const;

 private:
  QuatLattice big_, small_;
  Int p_;
  IMat H_;        // small in big coordinates, lower HNF, diagonal 1 or p
  QMat big_inv_;  // inverse of the basis matrix of big
  std::vector<int> free_pos_;
};

}  // namespace qlat
