#include "qlat/field.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <mutex>

namespace qlat {

struct NumberField::Cache {
  std::once_flag unit_once;
  Rat eps_a, eps_b;
  std::once_flag class_once;
  std::unique_ptr<ClassGroupData> cls;
  std::once_flag zeta_once;
  Rat zeta;
};

NumberField NumberField::rationals() {
  NumberField K;
  K.deg_ = 1;
  K.d_ = 0;
  K.half_ = false;
  K.disc_ = 1;
  K.cache_ = std::make_shared<Cache>();
  return K;
}

NumberField NumberField::real_quadratic(const Int& d) {
  if (d <= 1) throw std::invalid_argument("real_quadratic: d must be > 1");
  for (const auto& [p, e] : factor_int(d))
    if (e >= 2) throw std::invalid_argument("real_quadratic: d must be squarefree");
  NumberField K;
  K.deg_ = 2;
  K.d_ = d;
  K.half_ = (d % 4 == 1);
  K.disc_ = K.half_ ? d : 4 * d;
  K.cache_ = std::make_shared<Cache>();
  return K;
}

FieldElem NumberField::elem(Rat a, Rat b) const {
  if (deg_ == 1 && b != 0) throw std::invalid_argument("rational field has no w component");
  FieldElem e;
  e.K = this;
  e.a = std::move(a);
  e.b = std::move(b);
  return e;
}

FieldElem NumberField::omega() const {
  if (deg_ == 1) throw std::invalid_argument("omega: field is Q");
  return elem(0, 1);
}

FieldElem NumberField::omega_squared() const {
  // w^2 = d           when w = sqrt(d)
  // w^2 = w + (d-1)/4 when w = (1+sqrt(d))/2
  if (half_) return elem(Rat((d_ - 1) / 4), 1);
  return elem(Rat(d_), 0);
}

Int NumberField::omega_trace() const { return half_ ? 1 : 0; }

Int NumberField::omega_norm() const { return half_ ? Int((1 - d_) / 4) : Int(-d_); }

// ---- element arithmetic ----

namespace {

const NumberField* common_field(const FieldElem& x, const FieldElem& y) {
  if (!(*x.K == *y.K)) throw std::invalid_argument("elements from different fields");
  return x.K;
}

}  // namespace

FieldElem operator+(const FieldElem& x, const FieldElem& y) {
  const NumberField* K = common_field(x, y);
  return K->elem(x.a + y.a, x.b + y.b);
}

FieldElem operator-(const FieldElem& x, const FieldElem& y) {
  const NumberField* K = common_field(x, y);
  return K->elem(x.a - y.a, x.b - y.b);
}

FieldElem operator-(const FieldElem& x) { return x.K->elem(-x.a, -x.b); }

FieldElem operator*(const FieldElem& x, const FieldElem& y) {
  const NumberField* K = common_field(x, y);
  if (K->degree() == 1) return K->elem(x.a * y.a, 0);
  // (a1 + b1 w)(a2 + b2 w) with w^2 = s + t*w
  FieldElem w2 = K->omega_squared();
  Rat cross = x.a * y.b + x.b * y.a;
  Rat ww = x.b * y.b;
  return K->elem(x.a * y.a + ww * w2.a, cross + ww * w2.b);
}

FieldElem operator*(const Rat& c, const FieldElem& x) { return x.K->elem(c * x.a, c * x.b); }

FieldElem conj(const FieldElem& x) {
  if (x.K->degree() == 1) return x;
  // wbar = -w, or 1 - w for the half basis
  if (x.K->half_basis()) return x.K->elem(x.a + x.b, -x.b);
  return x.K->elem(x.a, -x.b);
}

Rat norm(const FieldElem& x) {
  if (x.K->degree() == 1) return x.a;
  FieldElem p = x * conj(x);
  if (p.b != 0) throw consistency_error("norm: x * conj(x) not rational");
  return p.a;
}

Rat trace(const FieldElem& x) {
  if (x.K->degree() == 1) return x.a;
  return 2 * x.a + Rat(x.K->omega_trace()) * x.b;
}

FieldElem inverse(const FieldElem& x) {
  if (x.is_zero()) throw std::invalid_argument("inverse of zero");
  if (x.K->degree() == 1) return x.K->elem(1 / x.a, 0);
  Rat n = norm(x);
  return (1 / n) * conj(x);
}

FieldElem operator/(const FieldElem& x, const FieldElem& y) { return x * inverse(y); }

bool operator==(const FieldElem& x, const FieldElem& y) {
  common_field(x, y);
  return x.a == y.a && x.b == y.b;
}

bool is_integral(const FieldElem& x) { return x.a.get_den() == 1 && x.b.get_den() == 1; }

bool is_unit(const FieldElem& x) {
  if (!is_integral(x)) return false;
  Rat n = norm(x);
  return n == 1 || n == -1;
}

namespace {

// sign of p + q*sqrt(d), exact
int sign_plus_sqrt(const Rat& p, const Rat& q, const Int& d) {
  int sp = sgn(p), sq = sgn(q);
  if (sq == 0) return sp;
  if (sp == 0) return sq;
  if (sp == sq) return sp;
  // opposite signs: compare p^2 with d q^2
  Rat lhs = p * p, rhs = Rat(d) * q * q;
  int c = cmp(lhs, rhs);
  if (c == 0) return 0;  // cannot happen for squarefree d > 1, q != 0
  return (c > 0) ? sp : sq;
}

}  // namespace

int sign_at(const FieldElem& x, int k) {
  if (x.K->degree() == 1) return sgn(x.a);
  Rat p, q;
  if (x.K->half_basis()) {
    // a + b(1 +- sqrt d)/2 = ((2a + b) +- b sqrt d)/2
    p = 2 * x.a + x.b;
    q = x.b;
  } else {
    p = x.a;
    q = x.b;
  }
  if (k == 1) q = -q;
  return sign_plus_sqrt(p, q, x.K->d());
}

bool totally_positive(const FieldElem& x) {
  for (int k = 0; k < x.K->degree(); ++k)
    if (sign_at(x, k) <= 0) return false;
  return true;
}

std::optional<FieldElem> field_sqrt(const FieldElem& x) {
  const NumberField* K = x.K;
  if (x.is_zero()) return K->zero();
  if (K->degree() == 1) {
    auto r = sqrt_rat(x.a);
    if (!r) return std::nullopt;
    return K->elem(*r, 0);
  }
  if (sign_at(x, 0) < 0 || sign_at(x, 1) < 0) return std::nullopt;
  const Int& d = K->d();
  if (x.b == 0) {
    if (auto r = sqrt_rat(x.a)) return K->elem(*r, 0);
    // (t sqrt d)^2 = t^2 d
    if (auto t = sqrt_rat(x.a / Rat(d))) {
      if (K->half_basis()) return K->elem(-*t, 2 * *t);  // sqrt d = 2w - 1
      return K->elem(0, *t);
    }
    return std::nullopt;
  }
  auto s = sqrt_rat(norm(x));
  if (!s) return std::nullopt;
  // candidates for q^2 from the quartic resolvent of (p + q w)^2 = x
  std::vector<Rat> q2s;
  if (K->half_basis()) {
    q2s = {(x.b + 2 * x.a + 2 * *s) / Rat(d), (x.b + 2 * x.a - 2 * *s) / Rat(d)};
  } else {
    q2s = {(x.a + *s) / (2 * Rat(d)), (x.a - *s) / (2 * Rat(d))};
  }
  for (const Rat& q2 : q2s) {
    if (q2 < 0) continue;
    auto q = sqrt_rat(q2);
    if (!q || *q == 0) continue;
    Rat p = K->half_basis() ? Rat((x.b / *q - *q) / 2) : Rat(x.b / (2 * *q));
    FieldElem c = K->elem(p, *q);
    if (c * c == x) return c;
    c = K->elem(-p, -*q);
    if (c * c == x) return c;
  }
  return std::nullopt;
}

FieldElem pow(const FieldElem& x, long e) {
  FieldElem base = (e < 0) ? inverse(x) : x;
  unsigned long n = (e < 0) ? -static_cast<unsigned long>(e) : e;
  FieldElem acc = x.K->one();
  while (n) {
    if (n & 1) acc = acc * base;
    base = base * base;
    n >>= 1;
  }
  return acc;
}

std::string to_string(const FieldElem& x) {
  if (x.K->degree() == 1 || x.b == 0) return rat_string(x.a);
  std::string out = rat_string(x.a);
  out += (x.b < 0) ? "-" : "+";
  out += rat_string(abs(x.b)) + "*w";
  return out;
}

std::optional<FieldElem> parse_elem(const NumberField& K, const std::string& s) {
  std::string t;
  for (char c : s)
    if (!isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) return std::nullopt;
  auto parse_rat = [](std::string u) -> std::optional<Rat> {
    if (u.size() >= 2 && u[0] == '+' && isdigit(static_cast<unsigned char>(u[1]))) u = u.substr(1);
    if (u.empty()) return std::nullopt;
    Rat r;
    if (mpq_set_str(r.get_mpq_t(), u.c_str(), 10) != 0) return std::nullopt;
    if (r.get_den() == 0) return std::nullopt;
    r.canonicalize();
    return r;
  };
  size_t wp = t.find('w');
  if (wp == std::string::npos) {
    auto a = parse_rat(t);
    if (!a) return std::nullopt;
    return K.elem(*a, 0);
  }
  if (K.degree() == 1) return std::nullopt;
  if (wp != t.size() - 1) return std::nullopt;
  std::string head = t.substr(0, wp);  // "<a><sign><coef>*" or "<coef>*" or "", "-", "+"
  // split off the w coefficient: scan back to the last top-level + or - (not at position 0)
  size_t cut = 0;
  for (size_t i = head.size(); i-- > 1;) {
    if ((head[i] == '+' || head[i] == '-') && head[i - 1] != '/' && head[i - 1] != '+' &&
        head[i - 1] != '-') {
      cut = i;
      break;
    }
  }
  std::string a_part = head.substr(0, cut);
  std::string b_part = head.substr(cut);
  if (!b_part.empty() && b_part.back() == '*') b_part.pop_back();
  Rat bval;
  if (b_part.empty() || b_part == "+")
    bval = 1;
  else if (b_part == "-")
    bval = -1;
  else {
    auto b = parse_rat(b_part);
    if (!b) return std::nullopt;
    bval = *b;
  }
  Rat aval = 0;
  if (!a_part.empty()) {
    auto a = parse_rat(a_part);
    if (!a) return std::nullopt;
    aval = *a;
  }
  return K.elem(aval, bval);
}

int elem_cmp(const FieldElem& x, const FieldElem& y) {
  int c = cmp(x.a, y.a);
  if (c) return c;
  return cmp(x.b, y.b);
}

// ---- ideals ----

namespace {

void put_row(QMat& m, int r, const FieldElem& x) {
  m(r, 0) = x.a;
  if (m.cols > 1) m(r, 1) = x.b;
}

FieldElem row_elem(const NumberField& K, const IMat& B, const Int& den, int r) {
  if (K.degree() == 1) return K.elem(Rat(B(r, 0)) / Rat(den));
  return K.elem(Rat(B(r, 0)) / Rat(den), Rat(B(r, 1)) / Rat(den));
}

}  // namespace

FieldIdeal ideal_from_rows(const NumberField& K, const QMat& rows) {
  auto [den, H] = canonical_hnf_den(rows);
  FieldIdeal I;
  I.K = &K;
  I.den = std::move(den);
  I.B = std::move(H);
  return I;
}

FieldIdeal ideal_from_generators(const NumberField& K, const std::vector<FieldElem>& gens) {
  const int n = K.degree();
  std::vector<FieldElem> all;
  for (const auto& g : gens) {
    if (g.is_zero()) continue;
    all.push_back(g);
    if (n == 2) all.push_back(g * K.omega());
  }
  if (all.empty()) throw std::invalid_argument("ideal_from_generators: all generators zero");
  QMat rows(static_cast<int>(all.size()), n);
  for (size_t i = 0; i < all.size(); ++i) put_row(rows, static_cast<int>(i), all[i]);
  return ideal_from_rows(K, rows);
}

FieldIdeal principal_ideal(const FieldElem& g) { return ideal_from_generators(*g.K, {g}); }

FieldIdeal unit_ideal(const NumberField& K) { return principal_ideal(K.one()); }

std::vector<FieldElem> ideal_basis(const FieldIdeal& x) {
  std::vector<FieldElem> out;
  for (int i = 0; i < x.B.rows; ++i) out.push_back(row_elem(*x.K, x.B, x.den, i));
  return out;
}

FieldIdeal ideal_mul(const FieldIdeal& x, const FieldIdeal& y) {
  if (!(*x.K == *y.K)) throw std::invalid_argument("ideal_mul: different fields");
  const int n = x.K->degree();
  auto bx = ideal_basis(x), by = ideal_basis(y);
  QMat rows(n * n, n);
  int r = 0;
  for (const auto& u : bx)
    for (const auto& v : by) put_row(rows, r++, u * v);
  return ideal_from_rows(*x.K, rows);
}

FieldIdeal ideal_mul(const FieldIdeal& x, const FieldElem& g) {
  if (g.is_zero()) throw std::invalid_argument("ideal_mul: zero scalar");
  const int n = x.K->degree();
  auto bx = ideal_basis(x);
  QMat rows(n, n);
  for (int i = 0; i < n; ++i) put_row(rows, i, bx[static_cast<size_t>(i)] * g);
  return ideal_from_rows(*x.K, rows);
}

Rat ideal_norm(const FieldIdeal& x) {
  Rat num(diag_product(x.B));
  Rat den(x.den);
  for (int i = 1; i < x.K->degree(); ++i) den *= Rat(x.den);
  return num / den;
}

FieldIdeal ideal_inverse(const FieldIdeal& x) {
  const int n = x.K->degree();
  if (n == 1) {
    Rat g = Rat(x.B(0, 0)) / Rat(x.den);
    return principal_ideal(x.K->elem(1 / g));
  }
  // degree 2: x * conj(x) = norm(x) Z_K
  auto bx = ideal_basis(x);
  QMat rows(n, n);
  for (int i = 0; i < n; ++i) put_row(rows, i, conj(bx[static_cast<size_t>(i)]));
  FieldIdeal cj = ideal_from_rows(*x.K, rows);
  Rat nm = ideal_norm(x);
  return ideal_mul(cj, x.K->elem(1 / nm, 0));
}

FieldIdeal ideal_pow(const FieldIdeal& x, long e) {
  FieldIdeal base = (e < 0) ? ideal_inverse(x) : x;
  unsigned long k = (e < 0) ? -static_cast<unsigned long>(e) : e;
  FieldIdeal acc = unit_ideal(*x.K);
  while (k) {
    if (k & 1) acc = ideal_mul(acc, base);
    base = ideal_mul(base, base);
    k >>= 1;
  }
  return acc;
}

bool ideal_contains(const FieldIdeal& x, const FieldElem& g) {
  const int n = x.K->degree();
  std::vector<Rat> v(static_cast<size_t>(n));
  v[0] = g.a * Rat(x.den);
  if (n == 2) v[1] = g.b * Rat(x.den);
  return hnf_membership(x.B, std::move(v));
}

bool ideal_is_integral(const FieldIdeal& x) { return x.den == 1; }

int ideal_cmp(const FieldIdeal& x, const FieldIdeal& y) {
  int c = cmp(x.den, y.den);
  if (c) return c;
  for (size_t k = 0; k < x.B.a.size(); ++k) {
    c = cmp(x.B.a[k], y.B.a[k]);
    if (c) return c;
  }
  return 0;
}

std::string ideal_key(const FieldIdeal& x) {
  std::string s = x.den.get_str() + ":";
  for (const auto& e : x.B.a) s += e.get_str() + ",";
  return s;
}

std::vector<PrimeIdeal> primes_above(const NumberField& K, const Int& p) {
  if (!is_prime(p)) throw std::invalid_argument("primes_above: p not prime");
  std::vector<PrimeIdeal> out;
  if (K.degree() == 1) {
    PrimeIdeal P;
    P.P = principal_ideal(K.elem(Rat(p)));
    P.p = p;
    P.f = 1;
    P.e = 1;
    out.push_back(P);
    return out;
  }
  // minimal polynomial of w mod p: t^2 - tr(w) t + nm(w)
  Int tr = K.omega_trace(), nm = K.omega_norm();
  std::vector<Int> roots;
  for (Int r = 0; r < p; ++r) {
    if (((r * r - tr * r + nm) % p) == 0) roots.push_back(r);
  }
  if (roots.empty()) {
    PrimeIdeal P;
    P.P = principal_ideal(K.elem(Rat(p)));
    P.p = p;
    P.f = 2;
    P.e = 1;
    out.push_back(P);
    return out;
  }
  bool ramified = (K.discriminant() % p == 0);
  for (const Int& r : roots) {
    PrimeIdeal P;
    P.P = ideal_from_generators(K, {K.elem(Rat(p)), K.elem(Rat(-r), 1)});
    P.p = p;
    P.f = 1;
    P.e = ramified ? 2 : 1;
    out.push_back(P);
  }
  if (ramified && out.size() != 1)
    throw consistency_error("primes_above: ramified prime with two roots");
  if (!ramified && out.size() == 1)
    throw consistency_error("primes_above: split prime with one root");
  std::sort(out.begin(), out.end(),
            [](const PrimeIdeal& a, const PrimeIdeal& b) { return ideal_cmp(a.P, b.P) < 0; });
  return out;
}

namespace {

// valuation of an integral ideal at P, by repeated division
int integral_valuation(FieldIdeal I, const PrimeIdeal& P) {
  FieldIdeal Pinv = ideal_inverse(P.P);
  int v = 0;
  for (;;) {
    FieldIdeal J = ideal_mul(I, Pinv);
    if (!ideal_is_integral(J)) return v;
    I = std::move(J);
    ++v;
    if (v > 4096) throw consistency_error("integral_valuation: runaway");
  }
}

}  // namespace

int valuation(const FieldIdeal& x, const PrimeIdeal& P) {
  FieldIdeal I = ideal_mul(x, x.K->elem(Rat(x.den)));  // integral now
  int v = integral_valuation(I, P);
  if (x.den == 1) return v;
  FieldIdeal dend = principal_ideal(x.K->elem(Rat(x.den)));
  return v - integral_valuation(dend, P);
}

std::vector<std::pair<PrimeIdeal, int>> factor_ideal(const FieldIdeal& x) {
  FieldIdeal I = ideal_mul(x, x.K->elem(Rat(x.den)));
  Rat nm = ideal_norm(I);
  if (nm.get_den() != 1) throw consistency_error("factor_ideal: integral scaling failed");
  std::vector<Int> ps;
  for (const auto& [p, e] : factor_int(nm.get_num())) ps.push_back(p);
  for (const auto& [p, e] : factor_int(x.den))
    if (std::find(ps.begin(), ps.end(), p) == ps.end()) ps.push_back(p);
  std::sort(ps.begin(), ps.end());
  std::vector<std::pair<PrimeIdeal, int>> out;
  for (const Int& p : ps) {
    for (const auto& P : primes_above(*x.K, p)) {
      int v = valuation(x, P);
      if (v != 0) out.emplace_back(P, v);
    }
  }
  return out;
}

namespace {

Int mod_pos_int(const Int& x, const Int& p) {
  Int r = x % p;
  if (r < 0) r += p;
  return r;
}

}  // namespace

std::vector<Int> residue_coords(const PrimeIdeal& P, const FieldElem& x) {
  if (!is_integral(x)) throw std::invalid_argument("residue_coords: x not integral");
  const Int& p = P.p;
  if (x.K->degree() == 1) return {mod_pos_int(x.a.get_num(), p)};
  if (P.f == 2) return {mod_pos_int(x.a.get_num(), p), mod_pos_int(x.b.get_num(), p)};
  // P = (p, w - r): row (s, 1) of the HNF means s + w in P, so w = -s
  Int s = P.P.B(1, 0);
  return {mod_pos_int(x.a.get_num() - s * x.b.get_num(), p)};
}

// ---- units ----

namespace {

// fundamental unit of Z[w] from the continued fraction of w.
// State alpha_n = (P_n + sqrt d)/Q_n; on the first state repeat the
// stabiliser M_n M_k^{-1} of alpha_0 in GL_2(Z) yields the unit C w + D.
FieldElem fundamental_unit_cf(const NumberField& K) {
  const Int& d = K.d();
  Int s = isqrt(d);
  Int P = K.half_basis() ? Int(1) : Int(0);
  Int Q = K.half_basis() ? Int(2) : Int(1);
  auto cf_floor = [&](const Int& Pn, const Int& Qn) {
    if (Qn > 0) return fdiv(Pn + s, Qn);
    return fdiv(Pn + s + 1, Qn);
  };
  // convergent matrix M_n = [[p_{n-1}, p_{n-2}], [q_{n-1}, q_{n-2}]]
  Int p1 = 1, p2 = 0, q1 = 0, q2 = 1;
  std::map<std::pair<Int, Int>, std::array<Int, 4>> seen;
  for (int n = 0; n < 100000; ++n) {
    auto key = std::make_pair(P, Q);
    auto it = seen.find(key);
    if (it != seen.end()) {
      const auto& Mk = it->second;  // [[a,b],[c,e]]
      // stab = M_n * M_k^{-1}
      Int det = Mk[0] * Mk[3] - Mk[1] * Mk[2];
      if (det != 1 && det != -1) throw consistency_error("fundamental_unit: bad convergent det");
      Int ia = Mk[3] * det, ib = -Mk[1] * det, ic = -Mk[2] * det, ie = Mk[0] * det;
      Int C = q1 * ia + q2 * ic;
      Int D = q1 * ib + q2 * ie;
      FieldElem eps = K.elem(Rat(D), Rat(C));
      if (sign_at(eps, 0) < 0) eps = -eps;
      Rat nm = norm(eps);
      if (nm != 1 && nm != -1) throw consistency_error("fundamental_unit: not a unit");
      // ensure eps > 1 under the first embedding
      FieldElem em1 = eps - K.one();
      if (sign_at(em1, 0) < 0) {
        eps = conj(eps);
        if (norm(eps) == -1) eps = -eps;
        if (sign_at(eps, 0) < 0) eps = -eps;
      }
      if (sign_at(eps - K.one(), 0) <= 0) throw consistency_error("fundamental_unit: not > 1");
      return eps;
    }
    seen.emplace(key, std::array<Int, 4>{p1, p2, q1, q2});
    Int a = cf_floor(P, Q);
    Int Pn = a * Q - P;
    Int Qn = (d - Pn * Pn) / Q;
    if (Qn == 0) throw consistency_error("fundamental_unit: degenerate step");
    Int p0 = a * p1 + p2, q0 = a * q1 + q2;
    p2 = p1;
    p1 = p0;
    q2 = q1;
    q1 = q0;
    P = Pn;
    Q = Qn;
  }
  throw search_cap_error("fundamental_unit: period not found");
}

}  // namespace

FieldElem NumberField::fundamental_unit() const {
  if (deg_ == 1) throw std::invalid_argument("fundamental_unit: field is Q");
  std::call_once(cache_->unit_once, [&] {
    FieldElem e = fundamental_unit_cf(*this);
    cache_->eps_a = e.a;
    cache_->eps_b = e.b;
  });
  return elem(cache_->eps_a, cache_->eps_b);
}

// ---- principality ----

namespace {

// rational upper bound for |sigma_0(x)| and |sigma_1(x)|
Rat embedding_bound(const FieldElem& x) {
  Rat sq_up(isqrt(x.K->d()) + 1);
  Rat w_up = x.K->half_basis() ? (1 + sq_up) / 2 : sq_up;
  return abs(x.a) + abs(x.b) * w_up;
}

// generator of an integral ideal by exhausting the coefficient box that a
// unit-normalised generator must occupy
std::optional<FieldElem> integral_is_principal(const FieldIdeal& I) {
  const NumberField& K = *I.K;
  if (K.degree() == 1) return K.elem(Rat(I.B(0, 0)) / Rat(I.den));
  Rat N = ideal_norm(I);
  if (N.get_den() != 1) throw std::invalid_argument("integral_is_principal: fractional input");
  const FieldElem& eps = K.fundamental_unit();
  Rat R = Rat(isqrt(N.get_num()) + 1) * embedding_bound(eps);
  // coordinates of candidates over the HNF basis rows r0 = (A,0), r1 = (c,C)
  Rat A(I.B(0, 0)), c0(I.B(1, 0)), C(I.B(1, 1));
  Rat den(I.den);
  Rat sq_lo(isqrt(K.d()));  // sqrt(d) > sq_lo >= 1
  Int Y = rat_floor(2 * R * den / (C * sq_lo)) + 1;
  Rat X = 2 * R * den + 1;
  for (Int t = -Y; t <= Y; ++t) {
    // x-coordinate s*A + t*c0 must lie in [-X, X]
    Int s_lo = rat_ceil((-X - Rat(t) * c0) / A);
    Int s_hi = rat_floor((X - Rat(t) * c0) / A);
    for (Int s = s_lo; s <= s_hi; ++s) {
      if (s == 0 && t == 0) continue;
      FieldElem g = K.elem((Rat(s) * A + Rat(t) * c0) / den, Rat(t) * C / den);
      if (abs(norm(g)) == N) return g;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<FieldElem> is_principal(const FieldIdeal& x) {
  FieldIdeal I = ideal_mul(x, x.K->elem(Rat(x.den)));
  auto g = integral_is_principal(I);
  if (!g) return std::nullopt;
  return (Rat(1) / Rat(x.den)) * *g;
}

std::optional<FieldElem> totally_positive_generator(const FieldIdeal& x) {
  auto g = is_principal(x);
  if (!g) return std::nullopt;
  std::vector<FieldElem> etas = {x.K->one(), -x.K->one()};
  if (x.K->degree() == 2) {
    const FieldElem& eps = x.K->fundamental_unit();
    etas.push_back(eps);
    etas.push_back(-eps);
  }
  for (const auto& eta : etas) {
    FieldElem cand = eta * *g;
    if (totally_positive(cand)) return cand;
  }
  return std::nullopt;
}

bool narrowly_equivalent(const FieldIdeal& x, const FieldIdeal& y) {
  return totally_positive_generator(ideal_mul(x, ideal_inverse(y))).has_value();
}

int narrow_class_index(const FieldIdeal& x) {
  const auto& cd = x.K->class_data();
  for (size_t i = 0; i < cd.narrow_reps.size(); ++i)
    if (narrowly_equivalent(x, cd.narrow_reps[i])) return static_cast<int>(i);
  throw consistency_error("narrow_class_index: no matching class");
}

bool same_principal_square_class(const FieldElem& x, const FieldElem& y) {
  if (x.is_zero() || y.is_zero()) throw std::invalid_argument("square class of zero");
  std::vector<FieldElem> etas = {x.K->one(), -x.K->one()};
  if (x.K->degree() == 2) {
    const FieldElem& eps = x.K->fundamental_unit();
    etas.push_back(eps);
    etas.push_back(-eps);
  }
  for (const auto& eta : etas)
    if (field_sqrt((x * eta) / y)) return true;
  return false;
}

// ---- class group ----

namespace {

std::unique_ptr<ClassGroupData> build_class_data(const NumberField& K) {
  auto cd = std::make_unique<ClassGroupData>();
  cd->reps = {unit_ideal(K)};
  cd->narrow_reps = {unit_ideal(K)};
  cd->tp_unit_reps = {K.one()};
  if (K.degree() == 1) return cd;

  const FieldElem& eps = K.fundamental_unit();
  cd->u = totally_positive(eps) ? 1 : 0;
  if (cd->u == 1) cd->tp_unit_reps.push_back(eps);

  // generators: primes of norm up to the Minkowski bound sqrt(disc)/2
  Int bound = isqrt(K.discriminant()) / 2 + 1;
  std::vector<FieldIdeal> gens;
  for (Int p = 2; p <= bound; ++p) {
    if (!is_prime(p)) continue;
    for (const auto& P : primes_above(K, p)) {
      Rat nm = ideal_norm(P.P);
      if (nm <= Rat(bound)) gens.push_back(P.P);
    }
  }

  auto closure = [&](std::vector<FieldIdeal>& reps, const std::vector<FieldIdeal>& gen_list,
                     auto&& equivalent) {
    size_t head = 0;
    while (head < reps.size()) {
      FieldIdeal base = reps[head++];
      for (const auto& g : gen_list) {
        FieldIdeal cand = ideal_mul(base, g);
        bool known = false;
        for (const auto& r : reps)
          if (equivalent(cand, r)) {
            known = true;
            break;
          }
        if (!known) reps.push_back(cand);
        if (reps.size() > 4096) throw search_cap_error("class group closure runaway");
      }
    }
  };

  closure(cd->reps, gens, [](const FieldIdeal& a, const FieldIdeal& b) {
    return is_principal(ideal_mul(a, ideal_inverse(b))).has_value();
  });
  cd->h = static_cast<long>(cd->reps.size());

  std::vector<FieldIdeal> ngens = gens;
  if (cd->u == 1) ngens.push_back(principal_ideal(K.omega()));  // mixed-sign principal class
  closure(cd->narrow_reps, ngens, narrowly_equivalent);
  cd->h_plus = static_cast<long>(cd->narrow_reps.size());

  Int expect = cd->h;
  for (int i = 0; i < cd->u; ++i) expect *= 2;
  check(cd->h_plus == expect, "class group: narrow count does not match h * 2^u");
  return cd;
}

}  // namespace

const ClassGroupData& NumberField::class_data() const {
  std::call_once(cache_->class_once, [&] { cache_->cls = build_class_data(*this); });
  return *cache_->cls;
}

Rat NumberField::zeta_minus_one() const {
  std::call_once(cache_->zeta_once, [&] {
    if (deg_ == 1) {
      cache_->zeta = Rat(-1, 12);
      return;
    }
    // (1/60) * sum over b^2 < D, b^2 = D mod 4, of sigma1((D - b^2)/4)
    const Int& D = disc_;
    Int total = 0;
    for (Int b = (D % 4 == 0) ? 0 : 1; b * b < D; b += 2) {
      Int s = sigma1((D - b * b) / 4);
      total += (b == 0) ? s : 2 * s;
    }
    cache_->zeta = Rat(total, Int(60));
    cache_->zeta.canonicalize();
  });
  return cache_->zeta;
}

}  // namespace qlat
