#pragma once

#include "qlat/field.hpp"

namespace qlat {

class QuatAlgebra;

// quaternion t + x i + y j + z ij over the base field
struct QuatElem {
  const QuatAlgebra* A = nullptr;
  FieldElem t, x, y, z;

  bool is_zero() const { return t.is_zero() && x.is_zero() && y.is_zero() && z.is_zero(); }
};

// Totally definite quaternion algebra over a totally real field: basis
// (1, i, j, ij) with i^2 = -a, j^2 = -b, ij = -ji, where a and b are totally
// positive.  The reduced norm is then positive definite at every real place.
class QuatAlgebra {
 public:
  QuatAlgebra(const NumberField& K, const FieldElem& a, const FieldElem& b);

  const NumberField& field() const { return *K_; }
  const FieldElem& a() const { return a_; }
  const FieldElem& b() const { return b_; }

  QuatElem elem(FieldElem t, FieldElem x, FieldElem y, FieldElem z) const;
  QuatElem scalar(const FieldElem& t) const;
  QuatElem zero() const;
  QuatElem one() const;
  QuatElem i() const;
  QuatElem j() const;
  QuatElem ij() const;
  // coordinate k of the basis (1, i, j, ij)
  QuatElem basis_elem(int k) const;

  bool operator==(const QuatAlgebra& o) const {
    return *K_ == *o.K_ && a_ == o.a_ && b_ == o.b_;
  }

 private:
  const NumberField* K_;
  FieldElem a_, b_;
};

QuatElem operator+(const QuatElem& p, const QuatElem& q);
QuatElem operator-(const QuatElem& p, const QuatElem& q);
QuatElem operator-(const QuatElem& p);
QuatElem operator*(const QuatElem& p, const QuatElem& q);
QuatElem operator*(const FieldElem& c, const QuatElem& q);
QuatElem operator*(const Rat& c, const QuatElem& q);
bool operator==(const QuatElem& p, const QuatElem& q);
inline bool operator!=(const QuatElem& p, const QuatElem& q) { return !(p == q); }

// standard involution: t + xi + yj + zij -> t - xi - yj - zij
QuatElem conj(const QuatElem& q);

FieldElem reduced_norm(const QuatElem& q);   // q * conj(q), a scalar
FieldElem reduced_trace(const QuatElem& q);  // q + conj(q), a scalar
QuatElem inverse(const QuatElem& q);

// polarisation of the reduced norm: (n(p+q) - n(p) - n(q)) / 2
FieldElem norm_bilinear(const QuatElem& p, const QuatElem& q);

bool quat_is_integral(const QuatElem& q);  // all coordinates in Z_K

std::string to_string(const QuatElem& q);

// coordinate ordering (1, i, j, ij) for matrix plumbing
std::vector<FieldElem> quat_coords(const QuatElem& q);
QuatElem quat_from_coords(const QuatAlgebra& A, const std::vector<FieldElem>& c);

}  // namespace qlat
