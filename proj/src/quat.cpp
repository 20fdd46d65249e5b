#include "qlat/quat.hpp"

namespace qlat {

QuatAlgebra::QuatAlgebra(const NumberField& K, const FieldElem& a, const FieldElem& b)
    : K_(&K), a_(a), b_(b) {
  if (!(*a.K == K) || !(*b.K == K)) throw std::invalid_argument("parameters from wrong field");
  if (!totally_positive(a) || !totally_positive(b))
    throw std::invalid_argument("algebra is not totally definite: parameters must be totally positive");
}

QuatElem QuatAlgebra::elem(FieldElem t, FieldElem x, FieldElem y, FieldElem z) const {
  QuatElem q;
  q.A = this;
  q.t = std::move(t);
  q.x = std::move(x);
  q.y = std::move(y);
  q.z = std::move(z);
  return q;
}

QuatElem QuatAlgebra::scalar(const FieldElem& t) const {
  return elem(t, K_->zero(), K_->zero(), K_->zero());
}

QuatElem QuatAlgebra::zero() const { return scalar(K_->zero()); }
QuatElem QuatAlgebra::one() const { return scalar(K_->one()); }
QuatElem QuatAlgebra::i() const { return elem(K_->zero(), K_->one(), K_->zero(), K_->zero()); }
QuatElem QuatAlgebra::j() const { return elem(K_->zero(), K_->zero(), K_->one(), K_->zero()); }
QuatElem QuatAlgebra::ij() const { return elem(K_->zero(), K_->zero(), K_->zero(), K_->one()); }

QuatElem QuatAlgebra::basis_elem(int k) const {
  switch (k) {
    case 0: return one();
    case 1: return i();
    case 2: return j();
    case 3: return ij();
    default: throw std::invalid_argument("basis_elem: index out of range");
  }
}

namespace {

const QuatAlgebra* common_algebra(const QuatElem& p, const QuatElem& q) {
  if (!(*p.A == *q.A)) throw std::invalid_argument("elements from different algebras");
  return p.A;
}

}  // namespace

QuatElem operator+(const QuatElem& p, const QuatElem& q) {
  const QuatAlgebra* A = common_algebra(p, q);
  return A->elem(p.t + q.t, p.x + q.x, p.y + q.y, p.z + q.z);
}

QuatElem operator-(const QuatElem& p, const QuatElem& q) {
  const QuatAlgebra* A = common_algebra(p, q);
  return A->elem(p.t - q.t, p.x - q.x, p.y - q.y, p.z - q.z);
}

QuatElem operator-(const QuatElem& p) { return p.A->elem(-p.t, -p.x, -p.y, -p.z); }

QuatElem operator*(const QuatElem& p, const QuatElem& q) {
  const QuatAlgebra* A = common_algebra(p, q);
  const FieldElem& a = A->a();
  const FieldElem& b = A->b();
  FieldElem ab = a * b;
  return A->elem(p.t * q.t - a * (p.x * q.x) - b * (p.y * q.y) - ab * (p.z * q.z),
                 p.t * q.x + p.x * q.t + b * (p.y * q.z - p.z * q.y),
                 p.t * q.y + p.y * q.t + a * (p.z * q.x - p.x * q.z),
                 p.t * q.z + p.z * q.t + p.x * q.y - p.y * q.x);
}

QuatElem operator*(const FieldElem& c, const QuatElem& q) {
  return q.A->elem(c * q.t, c * q.x, c * q.y, c * q.z);
}

QuatElem operator*(const Rat& c, const QuatElem& q) { return q.A->field().from_rational(c) * q; }

bool operator==(const QuatElem& p, const QuatElem& q) {
  common_algebra(p, q);
  return p.t == q.t && p.x == q.x && p.y == q.y && p.z == q.z;
}

QuatElem conj(const QuatElem& q) { return q.A->elem(q.t, -q.x, -q.y, -q.z); }

FieldElem reduced_norm(const QuatElem& q) {
  const FieldElem& a = q.A->a();
  const FieldElem& b = q.A->b();
  return q.t * q.t + a * (q.x * q.x) + b * (q.y * q.y) + a * b * (q.z * q.z);
}

FieldElem reduced_trace(const QuatElem& q) { return q.t + q.t; }

QuatElem inverse(const QuatElem& q) {
  if (q.is_zero()) throw std::invalid_argument("inverse of zero quaternion");
  FieldElem n = reduced_norm(q);
  return inverse(n) * conj(q);
}

FieldElem norm_bilinear(const QuatElem& p, const QuatElem& q) {
  const FieldElem& a = p.A->a();
  const FieldElem& b = p.A->b();
  return p.t * q.t + a * (p.x * q.x) + b * (p.y * q.y) + a * b * (p.z * q.z);
}

bool quat_is_integral(const QuatElem& q) {
  return is_integral(q.t) && is_integral(q.x) && is_integral(q.y) && is_integral(q.z);
}

std::string to_string(const QuatElem& q) {
  std::string s = "(" + to_string(q.t) + ", " + to_string(q.x) + ", " + to_string(q.y) + ", " +
                  to_string(q.z) + ")";
  return s;
}

std::vector<FieldElem> quat_coords(const QuatElem& q) { return {q.t, q.x, q.y, q.z}; }

QuatElem quat_from_coords(const QuatAlgebra& A, const std::vector<FieldElem>& c) {
  if (c.size() != 4) throw std::invalid_argument("quat_from_coords: need 4 coordinates");
  return A.elem(c[0], c[1], c[2], c[3]);
}

}  // namespace qlat
