#include "qlat/enumerate.hpp"

#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <string>

#include "qlat/class_sets.hpp"

namespace qlat {

TraceGram trace_gram(const QuatLattice& L, const FieldElem& w) {
  if (!totally_positive(w)) throw std::invalid_argument("trace_gram: weight not totally positive");
  auto b = lattice_basis(L);
  const int n = static_cast<int>(b.size());
  TraceGram g;
  g.G = QMat(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = k; l < n; ++l) {
      Rat v = trace(w * norm_bilinear(b[static_cast<size_t>(k)], b[static_cast<size_t>(l)]));
      g.G(k, l) = v;
      g.G(l, k) = v;
    }
  return g;
}

Rat gram_value(const TraceGram& g, const std::vector<Int>& v) {
  const int n = g.G.rows;
  Rat acc = 0;
  for (int k = 0; k < n; ++k) {
    if (v[static_cast<size_t>(k)] == 0) continue;
    for (int l = 0; l < n; ++l)
      acc += Rat(v[static_cast<size_t>(k)] * v[static_cast<size_t>(l)]) * g.G(k, l);
  }
  return acc;
}

namespace {

// G = U^T D U with U unit upper triangular; throws when not positive definite
void decompose(const QMat& G, std::vector<Rat>& D, QMat& U) {
  const int n = G.rows;
  QMat M = G;
  D.assign(static_cast<size_t>(n), Rat(0));
  U = QMat(n, n);
  for (int i = 0; i < n; ++i) U(i, i) = 1;
  for (int i = 0; i < n; ++i) {
    check(M(i, i) > 0, "short_vectors: form is not positive definite");
    D[static_cast<size_t>(i)] = M(i, i);
    for (int j = i + 1; j < n; ++j) U(i, j) = M(i, j) / M(i, i);
    for (int j = i + 1; j < n; ++j)
      for (int k = j; k < n; ++k) {
        Rat upd = M(j, k) - M(i, j) * M(i, k) / M(i, i);
        M(j, k) = upd;
        M(k, j) = upd;
      }
  }
}

Int round_nearest(const Rat& x) {
  Rat y = x + Rat(1, 2);
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
  return q;
}

// exact gram space LLL; reduces G in place and returns the unimodular
// transform T whose rows express the reduced basis in the original one,
// so that the reduced gram is T G T^T
IMat lll_gram(QMat& G) {
  const int n = G.rows;
  IMat T = IMat::identity(n);
  if (n <= 1) {
    if (n == 1) check(G(0, 0) > 0, "short_vectors: form is not positive definite");
    return T;
  }
  std::vector<Rat> B(static_cast<size_t>(n));
  QMat mu(n, n);
  auto refresh = [&]() {
    for (int i = 0; i < n; ++i) {
      Rat b = G(i, i);
      for (int k = 0; k < i; ++k) {
        Rat m = G(i, k);
        for (int l = 0; l < k; ++l) m -= mu(i, l) * mu(k, l) * B[static_cast<size_t>(l)];
        check(B[static_cast<size_t>(k)] > 0, "short_vectors: form is not positive definite");
        mu(i, k) = m / B[static_cast<size_t>(k)];
        b -= mu(i, k) * mu(i, k) * B[static_cast<size_t>(k)];
      }
      check(b > 0, "short_vectors: form is not positive definite");
      B[static_cast<size_t>(i)] = b;
    }
  };
  auto row_sub = [&](int i, int j, const Int& q) {
    for (int c = 0; c < n; ++c) {
      G(i, c) -= Rat(q) * G(j, c);
      T(i, c) -= q * T(j, c);
    }
    for (int r = 0; r < n; ++r) G(r, i) -= Rat(q) * G(r, j);
  };
  auto row_swap = [&](int i, int j) {
    for (int c = 0; c < n; ++c) {
      std::swap(G(i, c), G(j, c));
      std::swap(T(i, c), T(j, c));
    }
    for (int r = 0; r < n; ++r) std::swap(G(r, i), G(r, j));
  };
  const Rat delta(99, 100);
  refresh();
  int k = 1;
  while (k < n) {
    for (int j = k - 1; j >= 0; --j) {
      Int q = round_nearest(mu(k, j));
      if (q != 0) {
        row_sub(k, j, q);
        refresh();
      }
    }
    Rat lhs = B[static_cast<size_t>(k)];
    Rat rhs = (delta - mu(k, k - 1) * mu(k, k - 1)) * B[static_cast<size_t>(k - 1)];
    if (lhs >= rhs) {
      ++k;
    } else {
      row_swap(k, k - 1);
      refresh();
      k = std::max(k - 1, 1);
    }
  }
  return T;
}

}  // namespace

std::vector<std::vector<Int>> short_vectors(const TraceGram& g, const Rat& bound) {
  const int n = g.G.rows;
  QMat RG = g.G;
  IMat T = lll_gram(RG);
  std::vector<Rat> D;
  QMat U;
  decompose(RG, D, U);
  std::vector<std::vector<Int>> out;
  if (bound < 0) return out;

  // x holds coordinates in the reduced basis; emit maps them back
  std::vector<Int> x(static_cast<size_t>(n), Int(0));
  auto emit = [&]() {
    std::vector<Int> v(static_cast<size_t>(n), Int(0));
    for (int i = 0; i < n; ++i) {
      if (x[static_cast<size_t>(i)] == 0) continue;
      for (int j = 0; j < n; ++j) v[static_cast<size_t>(j)] += x[static_cast<size_t>(i)] * T(i, j);
    }
    for (int j = 0; j < n; ++j) {
      if (v[static_cast<size_t>(j)] == 0) continue;
      if (v[static_cast<size_t>(j)] < 0)
        for (int l = 0; l < n; ++l) v[static_cast<size_t>(l)] = -v[static_cast<size_t>(l)];
      break;
    }
    out.push_back(std::move(v));
  };
  // walk levels from the last coordinate down; rem = budget left at this level
  auto rec = [&](auto&& self, int i, const Rat& rem, bool zero_above) -> void {
    if (i < 0) {
      if (!zero_above) emit();
      return;
    }
    Rat c = 0;
    for (int j = i + 1; j < n; ++j) c += U(i, j) * Rat(x[static_cast<size_t>(j)]);
    auto range = quadratic_int_range(c, rem / D[static_cast<size_t>(i)]);
    if (!range) return;
    Int lo = range->first, hi = range->second;
    if (zero_above && lo < 0) lo = 0;  // sign normalization: topmost nonzero entry positive
    for (Int v = lo; v <= hi; ++v) {
      x[static_cast<size_t>(i)] = v;
      Rat t = Rat(v) + c;
      self(self, i - 1, rem - D[static_cast<size_t>(i)] * t * t, zero_above && v == 0);
    }
    x[static_cast<size_t>(i)] = 0;
  };
  rec(rec, n - 1, bound, true);
  for (const auto& v : out)
    check(gram_value(g, v) <= bound, "short_vectors: exact acceptance failed");
  return out;
}

Rat gram_minimum(const TraceGram& g) {
  Rat diag = g.G(0, 0);
  for (int i = 1; i < g.G.rows; ++i) diag = std::min(diag, g.G(i, i));
  // grow the bound so the search tree stays near the minimum even when the
  // smallest diagonal entry is far above it
  Rat bound = std::min(Rat(1), diag);
  for (;;) {
    auto sv = short_vectors(g, bound);
    if (!sv.empty()) {
      Rat best = gram_value(g, sv[0]);
      for (const auto& v : sv) best = std::min(best, gram_value(g, v));
      return best;
    }
    check(bound < diag, "gram_minimum: no vectors at the diagonal bound");
    bound = std::min(Rat(bound * 2), diag);
  }
}

namespace {

QuatElem from_coeffs(const std::vector<QuatElem>& basis, const std::vector<Int>& v) {
  QuatElem acc = basis[0].A->zero();
  for (size_t k = 0; k < basis.size(); ++k) {
    if (v[k] == 0) continue;
    acc = acc + Rat(v[k]) * basis[k];
  }
  return acc;
}

}  // namespace

std::optional<QuatElem> is_left_principal(const QuatLattice& J) {
  const NumberField& K = J.A->field();
  const int deg = K.degree();
  auto w = totally_positive_generator(ideal_inverse(lattice_norm(J)));
  if (!w) return std::nullopt;
  auto basis = lattice_basis(J);
  for (const auto& u : K.class_data().tp_unit_reps) {
    FieldElem weight = u * *w;
    TraceGram g = trace_gram(J, weight);
    for (const auto& v : short_vectors(g, Rat(deg))) {
      QuatElem cand = from_coeffs(basis, v);
      if (weight * reduced_norm(cand) == K.one()) return cand;
    }
  }
  return std::nullopt;
}

UnitData unit_data(const QuatLattice& M) {
  const NumberField& K = M.A->field();
  const int deg = K.degree();
  auto basis = lattice_basis(M);
  UnitData out;
  for (const auto& u : K.class_data().tp_unit_reps) {
    FieldElem weight = inverse(u);
    std::vector<QuatElem> found;
    for (const auto& v : short_vectors(trace_gram(M, weight), Rat(deg))) {
      QuatElem cand = from_coeffs(basis, v);
      if (reduced_norm(cand) == u) found.push_back(cand);
    }
    if (u == K.one()) {
      out.norm_one_reps = found;
      out.norm_one_mod_pm1 = Int(static_cast<long>(found.size()));
      check(out.norm_one_mod_pm1 > 0, "unit_data: missing identity");
    } else {
      check(found.empty() || Int(static_cast<long>(found.size())) == out.norm_one_mod_pm1,
            "unit_data: norm fiber is not a torsor");
    }
    if (!found.empty()) {
      out.norm_image_reps.push_back(u);
      for (const auto& q : found) out.unit_reps.push_back(q);
    }
  }
  size_t img = out.norm_image_reps.size();
  out.x = 0;
  while ((size_t{1} << out.x) < img) ++out.x;
  check((size_t{1} << out.x) == img, "unit_data: norm image size is not a power of two");
  out.unit_index = out.norm_one_mod_pm1 * Int(1 << out.x);
  check(Int(static_cast<long>(out.unit_reps.size())) == out.unit_index,
        "unit_data: coset count mismatch");
  return out;
}

namespace {

// the walks revisit the same few right orders, so cache their norm-P lines
using LineCache = std::map<std::string, std::vector<QuatLattice>>;

const std::vector<QuatLattice>& cached_lines(LineCache& cache, const QuatLattice& O,
                                             const PrimeIdeal& P) {
  std::string key = ideal_key(P.P) + "|" + lattice_key(O);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(std::move(key), norm_p_right_ideals(O, P)).first;
  return it->second;
}

std::optional<QuatElem> search_exact_norm(const QuatLattice& X, const FieldElem& a) {
  auto basis = lattice_basis(X);
  for (const auto& v : short_vectors(trace_gram(X, inverse(a)), Rat(a.K->degree()))) {
    QuatElem cand = from_coeffs(basis, v);
    if (reduced_norm(cand) == a) return cand;
  }
  return std::nullopt;
}

// depth-first walk over the right ideals of norm exactly (a) reachable from M
// by one prime step per valuation; any x with n(x) = a spans such an ideal
// unless its local type needs an excursion away from the minimal-distance
// walks.  The walk stays on integral lattices (small HNF entries) and applies
// the accumulated denominator ideal only at the leaves; each finished leaf is
// searched at once so a hit prunes the rest of the tree.
std::optional<QuatElem> walk_norm_ideals(const QuatLattice& M, const FieldElem& a,
                                         LineCache& cache, std::vector<QuatLattice>& leaves) {
  const NumberField& K = M.A->field();
  std::vector<PrimeIdeal> steps;
  FieldIdeal denom = unit_ideal(K);
  bool scale = false;
  for (const auto& [P, e] : factor_ideal(principal_ideal(a))) {
    for (int s = 0; s < (e < 0 ? -e : e); ++s) steps.push_back(P);
    if (e < 0) {
      scale = true;
      for (int s = 0; s < -e; ++s) denom = ideal_mul(denom, ideal_inverse(P.P));
    }
  }
  std::vector<std::set<std::string>> seen(steps.size() + 1);
  std::optional<QuatElem> found;
  auto rec = [&](auto&& self, const QuatLattice& W, size_t d) -> bool {
    if (!seen[d].insert(lattice_key(W)).second) return false;
    if (d == steps.size()) {
      QuatLattice X = scale ? lattice_scale(denom, W) : W;
      if (auto hit = search_exact_norm(X, a)) {
        found = std::move(*hit);
        return true;
      }
      leaves.push_back(std::move(X));
      return false;
    }
    for (const auto& Z : cached_lines(cache, right_order(W), steps[d]))
      if (self(self, lattice_mul(W, conj_lattice(Z)), d + 1)) return true;
    return false;
  };
  rec(rec, M, 0);
  return found;
}

}  // namespace

QuatElem solve_norm_equation(const QuatLattice& M, const FieldElem& a, int den_cap) {
  const NumberField& K = M.A->field();
  if (!totally_positive(a))
    throw std::invalid_argument("solve_norm_equation: target not totally positive");
  const bool dbg = std::getenv("QLAT_DEBUG_NORM") != nullptr;
  LineCache cache;
  std::vector<QuatLattice> leaves;
  if (auto hit = walk_norm_ideals(M, a, cache, leaves)) return *hit;
  if (dbg)
    std::fprintf(stderr, "norm_eq a=%s missed %zu direct ideals\n", to_string(a).c_str(),
                 leaves.size());
  // retry with one round trip at a small prime grafted onto each walk; this
  // reaches the unit classes the minimal-distance ideals miss
  for (int p : {2, 3, 5, 7, 11, 13}) {
    for (const auto& P : primes_above(K, p)) {
      std::set<std::string> seen;
      try {
        for (const auto& X : leaves) {
          for (const auto& Z1 : cached_lines(cache, right_order(X), P)) {
            QuatLattice X1 = lattice_mul(X, conj_lattice(Z1));
            for (const auto& Z2 : cached_lines(cache, right_order(X1), P)) {
              QuatLattice Y =
                  lattice_scale(ideal_inverse(P.P), lattice_mul(X1, conj_lattice(Z2)));
              if (!seen.insert(lattice_key(Y)).second) continue;
              if (auto hit = search_exact_norm(Y, a)) return *hit;
            }
          }
        }
      } catch (const search_cap_error&) {
        continue;
      }
    }
  }
  FieldElem weight = inverse(a);
  for (int m = 1; m <= den_cap; ++m) {
    QuatLattice L = lattice_scale(Rat(1, m), M);
    auto basis = lattice_basis(L);
    auto sv = short_vectors(trace_gram(L, weight), Rat(K.degree()));
    if (dbg)
      std::fprintf(stderr, "norm_eq a=%s m=%d sv=%zu\n", to_string(a).c_str(), m, sv.size());
    for (const auto& v : sv) {
      QuatElem cand = from_coeffs(basis, v);
      if (reduced_norm(cand) == a) return cand;
    }
  }
  throw search_cap_error("solve_norm_equation: denominator cap exceeded");
}

}  // namespace qlat
