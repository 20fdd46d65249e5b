#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qlat/matrix.hpp"
#include "qlat/numeric.hpp"

namespace qlat {

class NumberField;

// Element a + b*w of the field, coordinates over the integral basis (1, w).
// For the rationals b is identically 0.
struct FieldElem {
  const NumberField* K = nullptr;
  Rat a, b;

  bool is_zero() const { return a == 0 && b == 0; }
};

// Fractional ideal (or more generally a full rank Z_K-lattice in K), stored
// as (1/den) * rowspan(B) over the integral basis, B in lower HNF with
// gcd(content(B), den) = 1.  This form is unique, so equality is structural.
struct FieldIdeal {
  const NumberField* K = nullptr;
  Int den = 1;
  IMat B;

  bool operator==(const FieldIdeal& o) const { return den == o.den && B == o.B; }
  bool operator!=(const FieldIdeal& o) const { return !(*this == o); }
};

struct ClassGroupData {
  Int h = 1;                            // class number
  std::vector<FieldIdeal> reps;         // pairwise inequivalent, reps[0] trivial
  Int h_plus = 1;                       // narrow class number
  std::vector<FieldIdeal> narrow_reps;  // narrow_reps[0] trivial
  int u = 0;                            // h_plus = h * 2^u
  std::vector<FieldElem> tp_unit_reps;  // totally positive units modulo squares of units
};

// Q or a real quadratic field Q(sqrt d), d squarefree > 1.  Integral basis
// (1, w) with w = sqrt(d) for d = 2,3 mod 4 and w = (1+sqrt d)/2 for
// d = 1 mod 4.
class NumberField {
 public:
  static NumberField rationals();
  static NumberField real_quadratic(const Int& d);

  int degree() const { return deg_; }
  bool is_rationals() const { return deg_ == 1; }
  const Int& d() const { return d_; }
  bool half_basis() const { return half_; }  // w = (1 + sqrt d)/2 ?
  const Int& discriminant() const { return disc_; }

  FieldElem zero() const { return elem(0, 0); }
  FieldElem one() const { return elem(1, 0); }
  FieldElem omega() const;
  FieldElem elem(Rat a, Rat b = Rat(0)) const;
  FieldElem from_rational(const Rat& q) const { return elem(q, 0); }

  // value of w*w expressed over (1, w)
  FieldElem omega_squared() const;

  // trace and norm of w (integers)
  Int omega_trace() const;
  Int omega_norm() const;

  FieldElem fundamental_unit() const;  // degree 2 only
  const ClassGroupData& class_data() const;
  Rat zeta_minus_one() const;

  bool operator==(const NumberField& o) const { return deg_ == o.deg_ && d_ == o.d_; }

 private:
  NumberField() = default;
  int deg_ = 1;
  Int d_ = 0;
  bool half_ = false;
  Int disc_ = 1;

  struct Cache;
  std::shared_ptr<Cache> cache_;
};

// ---- element operations ----

FieldElem operator+(const FieldElem& x, const FieldElem& y);
FieldElem operator-(const FieldElem& x, const FieldElem& y);
FieldElem operator-(const FieldElem& x);
FieldElem operator*(const FieldElem& x, const FieldElem& y);
FieldElem operator*(const Rat& c, const FieldElem& x);
FieldElem operator/(const FieldElem& x, const FieldElem& y);
bool operator==(const FieldElem& x, const FieldElem& y);
inline bool operator!=(const FieldElem& x, const FieldElem& y) { return !(x == y); }

FieldElem conj(const FieldElem& x);   // Galois conjugate (identity on Q)
Rat norm(const FieldElem& x);
Rat trace(const FieldElem& x);
FieldElem inverse(const FieldElem& x);
bool is_integral(const FieldElem& x);
bool is_unit(const FieldElem& x);

// sign of the image under the k-th real embedding (k = 0 sends w to the
// positive root); returns -1, 0 or 1
int sign_at(const FieldElem& x, int k);
bool totally_positive(const FieldElem& x);

// exact square root in the field, if one exists
std::optional<FieldElem> field_sqrt(const FieldElem& x);

FieldElem pow(const FieldElem& x, long e);

std::string to_string(const FieldElem& x);  // "a+b*w" syntax
std::optional<FieldElem> parse_elem(const NumberField& K, const std::string& s);

// total order on elements of a common field (coordinate-wise), for canonical keys
int elem_cmp(const FieldElem& x, const FieldElem& y);

// ---- ideal operations ----

FieldIdeal ideal_from_rows(const NumberField& K, const QMat& rows);
FieldIdeal ideal_from_generators(const NumberField& K, const std::vector<FieldElem>& gens);
FieldIdeal principal_ideal(const FieldElem& g);
FieldIdeal unit_ideal(const NumberField& K);

FieldIdeal ideal_mul(const FieldIdeal& x, const FieldIdeal& y);
FieldIdeal ideal_mul(const FieldIdeal& x, const FieldElem& g);
FieldIdeal ideal_inverse(const FieldIdeal& x);
FieldIdeal ideal_pow(const FieldIdeal& x, long e);
Rat ideal_norm(const FieldIdeal& x);
bool ideal_contains(const FieldIdeal& x, const FieldElem& g);
bool ideal_is_integral(const FieldIdeal& x);
std::vector<FieldElem> ideal_basis(const FieldIdeal& x);  // Z-basis, degree() elements

// canonical comparison for deterministic ordering
int ideal_cmp(const FieldIdeal& x, const FieldIdeal& y);
std::string ideal_key(const FieldIdeal& x);

// prime ideals over a rational prime, sorted canonically; each entry carries
// its residue degree f
struct PrimeIdeal {
  FieldIdeal P;
  Int p;
  int f = 1;
  int e = 1;  // ramification index
};
std::vector<PrimeIdeal> primes_above(const NumberField& K, const Int& p);

// factorisation over prime ideals (exponents may be negative for fractional
// ideals); primes sorted canonically
std::vector<std::pair<PrimeIdeal, int>> factor_ideal(const FieldIdeal& x);
int valuation(const FieldIdeal& x, const PrimeIdeal& P);

// coordinates of integral x in the residue field Z_K/P over a fixed F_p
// basis (length P.f); all zero exactly when x lies in P
std::vector<Int> residue_coords(const PrimeIdeal& P, const FieldElem& x);

// generator of x if principal
std::optional<FieldElem> is_principal(const FieldIdeal& x);
// totally positive generator if one exists
std::optional<FieldElem> totally_positive_generator(const FieldIdeal& x);

bool narrowly_equivalent(const FieldIdeal& x, const FieldIdeal& y);
// index into class_data().narrow_reps
int narrow_class_index(const FieldIdeal& x);

// square class of a principal ideal: (x) and (y) agree modulo squares of
// principal ideals iff x/y = c^2 * eta for some c in K and unit eta
bool same_principal_square_class(const FieldElem& x, const FieldElem& y);

}  // namespace qlat
