#include "qlat/lattice.hpp"

#include <algorithm>

namespace qlat {

int quat_dim(const QuatAlgebra& A) { return 4 * A.field().degree(); }

std::vector<Rat> quat_vec(const QuatElem& q) {
  if (q.A->field().degree() == 1) return {q.t.a, q.x.a, q.y.a, q.z.a};
  return {q.t.a, q.t.b, q.x.a, q.x.b, q.y.a, q.y.b, q.z.a, q.z.b};
}

QuatElem quat_unvec(const QuatAlgebra& A, const std::vector<Rat>& v) {
  const NumberField& K = A.field();
  if (K.degree() == 1) {
    if (v.size() != 4) throw std::invalid_argument("quat_unvec: wrong length");
    return A.elem(K.elem(v[0]), K.elem(v[1]), K.elem(v[2]), K.elem(v[3]));
  }
  if (v.size() != 8) throw std::invalid_argument("quat_unvec: wrong length");
  return A.elem(K.elem(v[0], v[1]), K.elem(v[2], v[3]), K.elem(v[4], v[5]), K.elem(v[6], v[7]));
}

QuatLattice lattice_from_rows(const QuatAlgebra& A, const QMat& rows) {
  auto [den, H] = canonical_hnf_den(rows);
  QuatLattice L;
  L.A = &A;
  L.den = std::move(den);
  L.B = std::move(H);
  return L;
}

namespace {

void put_quat_row(QMat& m, int r, const QuatElem& q) {
  std::vector<Rat> v = quat_vec(q);
  for (int j = 0; j < m.cols; ++j) m(r, j) = v[static_cast<size_t>(j)];
}

QMat basis_rows(const QuatLattice& L) {
  const int n = L.B.rows;
  QMat rows(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rows(i, j) = Rat(L.B(i, j)) / Rat(L.den);
  return rows;
}

std::vector<Rat> vec_mat_mul(const std::vector<Rat>& v, const QMat& m) {
  std::vector<Rat> out(static_cast<size_t>(m.cols), Rat(0));
  for (int i = 0; i < m.rows; ++i) {
    if (v[static_cast<size_t>(i)] == 0) continue;
    for (int j = 0; j < m.cols; ++j) out[static_cast<size_t>(j)] += v[static_cast<size_t>(i)] * m(i, j);
  }
  return out;
}

// dual with respect to the standard dot product on coordinates (only used
// en route to intersections, where the double dual restores everything)
QuatLattice dual_std(const QuatLattice& L) {
  QMat inv = lower_tri_inverse(L.B);
  QMat rows = transpose(inv);
  for (auto& e : rows.a) e *= Rat(L.den);
  return lattice_from_rows(*L.A, rows);
}

const QuatAlgebra* common_algebra(const QuatLattice& x, const QuatLattice& y) {
  if (!(*x.A == *y.A)) throw std::invalid_argument("lattices over different algebras");
  return x.A;
}

}  // namespace

QuatLattice lattice_from_generators(const QuatAlgebra& A, const std::vector<QuatElem>& gens) {
  const int n = quat_dim(A);
  std::vector<QuatElem> all;
  for (const auto& g : gens) {
    if (g.is_zero()) continue;
    all.push_back(g);
    if (A.field().degree() == 2) all.push_back(A.field().omega() * g);
  }
  if (all.empty()) throw std::invalid_argument("lattice_from_generators: all generators zero");
  QMat rows(static_cast<int>(all.size()), n);
  for (size_t i = 0; i < all.size(); ++i) put_quat_row(rows, static_cast<int>(i), all[i]);
  return lattice_from_rows(A, rows);
}

std::vector<QuatElem> lattice_basis(const QuatLattice& L) {
  const int n = L.B.rows;
  std::vector<QuatElem> out;
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<Rat> v(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) v[static_cast<size_t>(j)] = Rat(L.B(i, j)) / Rat(L.den);
    out.push_back(quat_unvec(*L.A, v));
  }
  return out;
}

bool lattice_contains(const QuatLattice& L, const QuatElem& q) {
  std::vector<Rat> v = quat_vec(q);
  for (auto& e : v) e *= Rat(L.den);
  return hnf_membership(L.B, std::move(v));
}

Rat lattice_covolume(const QuatLattice& L) {
  Rat num(diag_product(L.B));
  Rat den = 1;
  for (int i = 0; i < L.B.rows; ++i) den *= Rat(L.den);
  Rat out = num / den;
  return out;
}

QuatLattice lattice_add(const QuatLattice& x, const QuatLattice& y) {
  const QuatAlgebra* A = common_algebra(x, y);
  const int n = x.B.rows;
  QMat rows(2 * n, n);
  QMat bx = basis_rows(x), by = basis_rows(y);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      rows(i, j) = bx(i, j);
      rows(n + i, j) = by(i, j);
    }
  return lattice_from_rows(*A, rows);
}

QuatLattice lattice_intersect(const QuatLattice& x, const QuatLattice& y) {
  common_algebra(x, y);
  return dual_std(lattice_add(dual_std(x), dual_std(y)));
}

QuatLattice lattice_mul(const QuatLattice& x, const QuatLattice& y) {
  const QuatAlgebra* A = common_algebra(x, y);
  auto bx = lattice_basis(x), by = lattice_basis(y);
  const int n = x.B.rows;
  QMat rows(n * n, n);
  int r = 0;
  for (const auto& u : bx)
    for (const auto& v : by) put_quat_row(rows, r++, u * v);
  return lattice_from_rows(*A, rows);
}

QuatLattice left_mul(const QuatElem& q, const QuatLattice& L) {
  if (q.is_zero()) throw std::invalid_argument("left_mul: zero multiplier");
  auto b = lattice_basis(L);
  QMat rows(L.B.rows, L.B.rows);
  for (int i = 0; i < L.B.rows; ++i) put_quat_row(rows, i, q * b[static_cast<size_t>(i)]);
  return lattice_from_rows(*L.A, rows);
}

QuatLattice right_mul(const QuatLattice& L, const QuatElem& q) {
  if (q.is_zero()) throw std::invalid_argument("right_mul: zero multiplier");
  auto b = lattice_basis(L);
  QMat rows(L.B.rows, L.B.rows);
  for (int i = 0; i < L.B.rows; ++i) put_quat_row(rows, i, b[static_cast<size_t>(i)] * q);
  return lattice_from_rows(*L.A, rows);
}

QuatLattice lattice_scale(const FieldElem& c, const QuatLattice& L) {
  return left_mul(L.A->scalar(c), L);
}

QuatLattice lattice_scale(const Rat& c, const QuatLattice& L) {
  return lattice_scale(L.A->field().from_rational(c), L);
}

QuatLattice lattice_scale(const FieldIdeal& a, const QuatLattice& L) {
  auto ba = ideal_basis(a);
  auto bl = lattice_basis(L);
  const int n = L.B.rows;
  QMat rows(static_cast<int>(ba.size()) * n, n);
  int r = 0;
  for (const auto& c : ba)
    for (const auto& v : bl) put_quat_row(rows, r++, c * v);
  return lattice_from_rows(*L.A, rows);
}

QuatLattice conj_lattice(const QuatLattice& L) {
  auto b = lattice_basis(L);
  QMat rows(L.B.rows, L.B.rows);
  for (int i = 0; i < L.B.rows; ++i) put_quat_row(rows, i, conj(b[static_cast<size_t>(i)]));
  return lattice_from_rows(*L.A, rows);
}

QuatLattice left_order(const QuatLattice& L) {
  auto b = lattice_basis(L);
  QuatLattice O = right_mul(L, inverse(b[0]));
  for (size_t k = 1; k < b.size(); ++k)
    O = lattice_intersect(O, right_mul(L, inverse(b[k])));
  return O;
}

QuatLattice right_order(const QuatLattice& L) {
  auto b = lattice_basis(L);
  QuatLattice O = left_mul(inverse(b[0]), L);
  for (size_t k = 1; k < b.size(); ++k)
    O = lattice_intersect(O, left_mul(inverse(b[k]), L));
  return O;
}

bool is_order(const QuatLattice& L) {
  const NumberField& K = L.A->field();
  if (!lattice_contains(L, L.A->one())) return false;
  if (K.degree() == 2) {
    for (const auto& v : lattice_basis(L))
      if (!lattice_contains(L, K.omega() * v)) return false;
  }
  return lattice_mul(L, L) == L;
}

FieldIdeal lattice_norm(const QuatLattice& L) {
  const NumberField& K = L.A->field();
  auto b = lattice_basis(L);
  std::vector<FieldElem> gens;
  for (size_t i = 0; i < b.size(); ++i) {
    gens.push_back(reduced_norm(b[i]));
    for (size_t j = i + 1; j < b.size(); ++j) gens.push_back(reduced_norm(b[i] + b[j]));
  }
  return ideal_from_generators(K, gens);
}

namespace {

FieldElem det_small(const NumberField& K, std::vector<std::vector<FieldElem>> m) {
  const size_t n = m.size();
  if (n == 1) return m[0][0];
  FieldElem acc = K.zero();
  int sign = 1;
  for (size_t k = 0; k < n; ++k) {
    std::vector<std::vector<FieldElem>> minor;
    for (size_t i = 1; i < n; ++i) {
      std::vector<FieldElem> row;
      for (size_t j = 0; j < n; ++j)
        if (j != k) row.push_back(m[i][j]);
      minor.push_back(std::move(row));
    }
    FieldElem term = m[0][k] * det_small(K, std::move(minor));
    acc = (sign > 0) ? acc + term : acc - term;
    sign = -sign;
  }
  return acc;
}

}  // namespace

FieldIdeal reduced_discriminant(const QuatLattice& O) {
  const NumberField& K = O.A->field();
  auto b = lattice_basis(O);
  const int n = static_cast<int>(b.size());
  // Gram matrix of the trace form
  std::vector<std::vector<FieldElem>> G(static_cast<size_t>(n),
                                        std::vector<FieldElem>(static_cast<size_t>(n), K.zero()));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      G[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          reduced_trace(b[static_cast<size_t>(i)] * b[static_cast<size_t>(j)]);
  // ideal generated by all 4x4 minors on matching row/column quadruples
  std::vector<FieldElem> dets;
  std::vector<int> idx = {0, 1, 2, 3};
  for (;;) {
    std::vector<std::vector<FieldElem>> sub(4, std::vector<FieldElem>(4, K.zero()));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        sub[static_cast<size_t>(i)][static_cast<size_t>(j)] =
            G[static_cast<size_t>(idx[static_cast<size_t>(i)])]
             [static_cast<size_t>(idx[static_cast<size_t>(j)])];
    dets.push_back(det_small(K, std::move(sub)));
    int k = 3;
    while (k >= 0 && idx[static_cast<size_t>(k)] == n - 4 + k) --k;
    if (k < 0) break;
    ++idx[static_cast<size_t>(k)];
    for (int j = k + 1; j < 4; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
  }
  FieldIdeal disc = ideal_from_generators(K, dets);
  // disc is the square of the reduced discriminant
  auto fac = factor_ideal(disc);
  FieldIdeal root = unit_ideal(K);
  for (const auto& [P, e] : fac) {
    check(e > 0 && e % 2 == 0, "reduced_discriminant: discriminant is not a square");
    root = ideal_mul(root, ideal_pow(P.P, e / 2));
  }
  check(ideal_mul(root, root) == disc, "reduced_discriminant: square root check failed");
  return root;
}

QuatLattice lattice_inverse(const QuatLattice& L) {
  return lattice_scale(ideal_inverse(lattice_norm(L)), conj_lattice(L));
}

// ---- quotients mod p ----

FpQuotient::FpQuotient(QuatLattice big, QuatLattice small, Int p)
    : big_(std::move(big)), small_(std::move(small)), p_(std::move(p)) {
  common_algebra(big_, small_);
  const int n = big_.B.rows;
  QMat binv = lower_tri_inverse(big_.B);
  for (auto& e : binv.a) e *= Rat(big_.den);
  big_inv_ = std::move(binv);
  // rows of small over the basis of big
  QMat c_rat = mat_mul(basis_rows(small_), big_inv_);
  IMat C(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (c_rat(i, j).get_den() != 1)
        throw std::invalid_argument("FpQuotient: small is not a sublattice of big");
      C(i, j) = c_rat(i, j).get_num();
    }
  H_ = hnf_lower(C);
  for (int i = 0; i < n; ++i) {
    if (H_(i, i) == 1) continue;
    if (H_(i, i) == p_) {
      free_pos_.push_back(i);
      continue;
    }
    throw std::invalid_argument("FpQuotient: quotient is not elementary abelian");
  }
}

std::vector<Int> FpQuotient::coords(const QuatElem& q) const {
  const int n = big_.B.rows;
  std::vector<Rat> v = vec_mat_mul(quat_vec(q), big_inv_);
  std::vector<Int> c(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    if (v[static_cast<size_t>(j)].get_den() != 1)
      throw std::invalid_argument("FpQuotient::coords: element not in big");
    c[static_cast<size_t>(j)] = v[static_cast<size_t>(j)].get_num();
  }
  for (int i = n - 1; i >= 0; --i) {
    Int qq = fdiv(c[static_cast<size_t>(i)], H_(i, i));
    if (qq == 0) continue;
    for (int j = 0; j <= i; ++j) c[static_cast<size_t>(j)] -= qq * H_(i, j);
  }
  std::vector<Int> out;
  out.reserve(free_pos_.size());
  for (int i : free_pos_) out.push_back(c[static_cast<size_t>(i)]);
  return out;
}

QuatElem FpQuotient::lift(const std::vector<Int>& c) const {
  if (c.size() != free_pos_.size()) throw std::invalid_argument("FpQuotient::lift: wrong length");
  const int n = big_.B.rows;
  std::vector<Rat> v(static_cast<size_t>(n), Rat(0));
  for (size_t k = 0; k < c.size(); ++k) {
    int i = free_pos_[k];
    for (int j = 0; j < n; ++j)
      v[static_cast<size_t>(j)] += Rat(c[k]) * Rat(big_.B(i, j)) / Rat(big_.den);
  }
  return quat_unvec(*big_.A, v);
}

std::vector<Int> FpQuotient::mul(const std::vector<Int>& u, const std::vector<Int>& v) const {
  return coords(lift(u) * lift(v));
}

std::vector<Int> FpQuotient::add(const std::vector<Int>& u, const std::vector<Int>& v) const {
  std::vector<Int> out(u.size());
  for (size_t k = 0; k < u.size(); ++k) {
    out[k] = (u[k] + v[k]) % p_;
    if (out[k] < 0) out[k] += p_;
  }
  return out;
}

std::vector<Int> FpQuotient::smul(const Int& c, const std::vector<Int>& u) const {
  std::vector<Int> out(u.size());
  for (size_t k = 0; k < u.size(); ++k) {
    out[k] = (c * u[k]) % p_;
    if (out[k] < 0) out[k] += p_;
  }
  return out;
}

bool FpQuotient::is_zero(const std::vector<Int>& u) const {
  for (const auto& x : u)
    if (x != 0) return false;
  return true;
}

// ---- radical and maximal orders ----

QuatLattice radical_preimage(const QuatLattice& O, const PrimeIdeal& P) {
  const QuatAlgebra& A = *O.A;
  const Int& p = P.p;
  QuatLattice small = lattice_scale(P.P, O);
  FpQuotient q(O, small, p);
  const int k = q.dim();
  check(k == 4 * P.f, "radical_preimage: unexpected quotient dimension");

  // basis lifts
  std::vector<QuatElem> lifts;
  for (int l = 0; l < k; ++l) {
    std::vector<Int> e(static_cast<size_t>(k), Int(0));
    e[static_cast<size_t>(l)] = 1;
    lifts.push_back(q.lift(e));
  }

  // S = { x : reduced trace of x * b_l lies in P for every l }
  IMat T(k * P.f, k);
  for (int l = 0; l < k; ++l)
    for (int m = 0; m < k; ++m) {
      FieldElem val = reduced_trace(lifts[static_cast<size_t>(m)] * lifts[static_cast<size_t>(l)]);
      auto rc = residue_coords(P, val);
      for (int c = 0; c < P.f; ++c) T(l * P.f + c, m) = rc[static_cast<size_t>(c)];
    }
  auto S = modp_kernel(T, p);

  // filter S by vanishing reduced norm, then span
  Int count = 1;
  for (size_t i = 0; i < S.size(); ++i) {
    count *= p;
    if (count > 1000000) throw search_cap_error("radical_preimage: radical candidate space too big");
  }
  std::vector<std::vector<Int>> kept;
  std::vector<Int> sel(S.size(), Int(0));
  for (;;) {
    std::vector<Int> x(static_cast<size_t>(k), Int(0));
    for (size_t i = 0; i < S.size(); ++i)
      if (sel[i] != 0) x = q.add(x, q.smul(sel[i], S[i]));
    FieldElem nx = reduced_norm(q.lift(x));
    bool in_p = true;
    for (const auto& rc : residue_coords(P, nx))
      if (rc != 0) in_p = false;
    if (in_p && !q.is_zero(x)) kept.push_back(x);
    // odometer
    size_t pos = 0;
    while (pos < sel.size()) {
      sel[pos] += 1;
      if (sel[pos] < p) break;
      sel[pos] = 0;
      ++pos;
    }
    if (pos == sel.size()) break;
  }

  const int n = O.B.rows;
  if (kept.empty()) return small;
  IMat KM(static_cast<int>(kept.size()), k);
  for (size_t i = 0; i < kept.size(); ++i)
    for (int j = 0; j < k; ++j) KM(static_cast<int>(i), j) = kept[i][static_cast<size_t>(j)];
  auto rad_basis = modp_row_basis(KM, p);

  QMat rows(static_cast<int>(rad_basis.size()) + n, n);
  int r = 0;
  for (const auto& v : rad_basis) put_quat_row(rows, r++, q.lift(v));
  QMat sm = basis_rows(small);
  for (int i = 0; i < n; ++i, ++r)
    for (int j = 0; j < n; ++j) rows(r, j) = sm(i, j);
  return lattice_from_rows(A, rows);
}

namespace {

QuatLattice initial_order(const QuatAlgebra& A) {
  const NumberField& K = A.field();
  Int ca = lcm(A.a().a.get_den(), A.a().b.get_den());
  Int cb = lcm(A.b().a.get_den(), A.b().b.get_den());
  FieldElem fa = K.from_rational(Rat(ca));
  FieldElem fb = K.from_rational(Rat(cb));
  std::vector<QuatElem> gens = {A.one(), fa * A.i(), fb * A.j(), (fa * fb) * A.ij()};
  QuatLattice O = lattice_from_generators(A, gens);
  check(is_order(O), "initial_order: multiplication table is not integral");
  return O;
}

// one enlargement step at P; returns O itself when stable
QuatLattice enlarge_at(const QuatLattice& O, const PrimeIdeal& P) {
  QuatLattice R = radical_preimage(O, P);
  QuatLattice O1 = left_order(R);
  if (O1 != O) return O1;
  O1 = right_order(R);
  if (O1 != O) return O1;

  // radical idealizer is stable: look for a nontrivial idempotent of O/R
  FpQuotient q(O, R, P.p);
  const int k = q.dim();
  std::vector<Int> one = q.coords(O.A->one());
  Int count = 1;
  for (int i = 0; i < k; ++i) {
    count *= P.p;
    if (count > 1000000) throw search_cap_error("enlarge_at: quotient too big for idempotent scan");
  }
  std::vector<Int> sel(static_cast<size_t>(k), Int(0));
  for (;;) {
    if (!q.is_zero(sel) && sel != one && q.mul(sel, sel) == sel) {
      QuatLattice I = lattice_add(right_mul(O, q.lift(sel)), R);
      QuatLattice O2 = left_order(I);
      if (O2 != O) return O2;
    }
    size_t pos = 0;
    while (pos < sel.size()) {
      sel[pos] += 1;
      if (sel[pos] < P.p) break;
      sel[pos] = 0;
      ++pos;
    }
    if (pos == sel.size()) break;
  }
  return O;
}

}  // namespace

QuatLattice maximal_order(const QuatAlgebra& A) {
  QuatLattice O = initial_order(A);
  for (;;) {
    FieldIdeal D = reduced_discriminant(O);
    auto fac = factor_ideal(D);
    std::stable_sort(fac.begin(), fac.end(), [](const auto& x, const auto& y) {
      return ideal_norm(x.first.P) < ideal_norm(y.first.P);
    });
    bool progress = false;
    for (const auto& [P, e] : fac) {
      QuatLattice O2 = enlarge_at(O, P);
      if (O2 != O) {
        check(lattice_contains(O2, A.one()) && lattice_covolume(O2) < lattice_covolume(O),
              "maximal_order: enlargement did not grow the order");
        O = std::move(O2);
        progress = true;
        break;
      }
    }
    if (!progress) break;
  }
  check(is_order(O), "maximal_order: result is not an order");
  FieldIdeal D = reduced_discriminant(O);
  auto fac = factor_ideal(D);
  for (const auto& [P, e] : fac)
    check(e == 1, "maximal_order: reduced discriminant is not squarefree");
  check((static_cast<int>(fac.size()) + A.field().degree()) % 2 == 0,
        "maximal_order: ramification parity violated");
  return O;
}

std::vector<PrimeIdeal> ramified_primes(const QuatLattice& max_order) {
  FieldIdeal D = reduced_discriminant(max_order);
  auto fac = factor_ideal(D);
  std::vector<PrimeIdeal> out;
  for (const auto& [P, e] : fac) {
    check(e == 1, "ramified_primes: order is not maximal");
    out.push_back(P);
  }
  return out;
}

QuatLattice two_sided_maximal_ideal(const QuatLattice& M, const PrimeIdeal& P) {
  QuatLattice pM = lattice_scale(P.P, M);
  QuatLattice R = radical_preimage(M, P);
  if (R == pM) return pM;  // split place
  check(lattice_mul(R, R) == pM, "two_sided_maximal_ideal: square is not P M");
  check(lattice_norm(R) == P.P, "two_sided_maximal_ideal: norm is not P");
  return R;
}

int lattice_cmp(const QuatLattice& x, const QuatLattice& y) {
  int c = cmp(x.den, y.den);
  if (c) return c;
  for (size_t k = 0; k < x.B.a.size(); ++k) {
    c = cmp(x.B.a[k], y.B.a[k]);
    if (c) return c;
  }
  return 0;
}

std::string lattice_key(const QuatLattice& x) {
  std::string s = x.den.get_str() + ":";
  for (const auto& e : x.B.a) s += e.get_str() + ",";
  return s;
}

}  // namespace qlat
