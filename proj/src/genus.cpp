#include "qlat/genus.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>

namespace qlat {

Rat siegel_mass(const QuatAlgebra& A, const std::vector<PrimeIdeal>& ramified) {
  const NumberField& K = A.field();
  Rat z = K.zeta_minus_one();
  Rat m = z * z;
  for (int k = 0; k < 2 * K.degree() - 1; ++k) m /= 2;
  for (const auto& P : ramified) {
    Rat q1 = Rat(ideal_norm(P.P)) - 1;
    m *= q1 * q1;
    m /= 2;
  }
  return m;
}

Rat siegel_mass(const QuatAlgebra& A) {
  return siegel_mass(A, ramified_primes(maximal_order(A)));
}

bool is_a_maximal(const QuatLattice& L, const FieldIdeal& a, const FieldIdeal& alg_disc) {
  if (lattice_norm(L) != a) return false;
  if (reduced_discriminant(left_order(L)) != alg_disc) return false;
  return reduced_discriminant(right_order(L)) == alg_disc;
}

bool is_a_maximal(const QuatLattice& L, const FieldIdeal& a) {
  return is_a_maximal(L, a, reduced_discriminant(maximal_order(*L.A)));
}

GenusContext genus_context(const QuatAlgebra& A) {
  GenusContext ctx;
  ctx.cd = right_ideal_classes(A);
  maximal_order_types(ctx.cd);
  for (int i = 0; i < ctx.cd.t; ++i) {
    ctx.nds.push_back(normalizer_data(ctx.cd.type_reps[i], ctx.cd.ramified));
    ctx.type_units.push_back(unit_data(ctx.cd.type_reps[i]));
  }
  ctx.alg_disc = reduced_discriminant(ctx.cd.M);
  return ctx;
}

std::vector<SMember> build_S_i(const ClassData& cd, int i, const FieldIdeal& a) {
  int target = narrow_class_index(a);
  std::vector<SMember> out;
  for (int j = 0; j < cd.h; ++j) {
    QuatLattice P = lattice_mul(cd.right_ideal_reps[j], cd.type_reps[i]);
    if (narrow_class_index(lattice_norm(P)) != target) continue;
    if (right_order(P) != cd.type_reps[i])
      throw consistency_error("build_S_i: product lost its right order");
    if (left_order(P) != cd.left_orders[j])
      throw consistency_error("build_S_i: product lost its left order");
    out.push_back(SMember{P, cd.left_type[j]});
  }
  std::sort(out.begin(), out.end(),
            [](const SMember& x, const SMember& y) { return lattice_cmp(x.ideal, y.ideal) < 0; });
  return out;
}

std::vector<SMember> normalizer_orbits(const std::vector<SMember>& S, const NormalizerData& nd) {
  const int n = static_cast<int>(S.size());
  std::vector<QuatLattice> inverses;
  inverses.reserve(n);
  for (const auto& m : S) inverses.push_back(lattice_inverse(m.ideal));
  std::vector<int> orbit_of(n, -1);
  std::vector<SMember> reps;
  for (int s = 0; s < n; ++s) {
    if (orbit_of[s] >= 0) continue;
    std::vector<int> orbit = {s};
    orbit_of[s] = s;
    for (size_t qi = 0; qi < orbit.size(); ++qi) {
      for (const QuatElem& g : nd.coset_reps) {
        QuatLattice Y = right_mul(S[orbit[qi]].ideal, inverse(g));
        int match = -1;
        for (int m = 0; m < n; ++m) {
          bool hit =
              Y == S[m].ideal || is_left_principal(lattice_mul(Y, inverses[m])).has_value();
          if (!hit) continue;
          if (match >= 0) throw consistency_error("normalizer_orbits: ambiguous match");
          match = m;
        }
        if (match < 0) throw consistency_error("normalizer_orbits: image not in S");
        if (orbit_of[match] < 0) {
          orbit_of[match] = s;
          orbit.push_back(match);
        } else if (orbit_of[match] != s) {
          throw consistency_error("normalizer_orbits: orbits not disjoint");
        }
      }
    }
    int best = orbit[0];
    for (int idx : orbit)
      if (lattice_cmp(S[idx].ideal, S[best].ideal) < 0) best = idx;
    reps.push_back(S[best]);
  }
  std::sort(reps.begin(), reps.end(),
            [](const SMember& x, const SMember& y) { return lattice_cmp(x.ideal, y.ideal) < 0; });
  return reps;
}

namespace {

int log2_exact(size_t n, const char* what) {
  if (n == 0) throw consistency_error(what);
  int e = 0;
  while (n > 1) {
    if (n % 2) throw consistency_error(what);
    n >>= 1;
    ++e;
  }
  return e;
}

// index into tp_unit_reps of the square class of a totally positive unit
int tp_unit_label(const NumberField& K, const FieldElem& cls) {
  const auto& reps = K.class_data().tp_unit_reps;
  int found = -1;
  for (size_t k = 0; k < reps.size(); ++k) {
    if (!field_sqrt(cls / reps[k])) continue;
    if (found >= 0) throw consistency_error("tp_unit_label: ambiguous square class");
    found = static_cast<int>(k);
  }
  if (found < 0) throw consistency_error("tp_unit_label: not a unit square class");
  return found;
}

// scale a totally positive element by even powers of the fundamental unit
// until its trace is minimal; keeps the ideal and the square class, balances
// the real embeddings so later short vector searches stay small
FieldElem balance_tp(const FieldElem& a) {
  const NumberField& K = *a.K;
  if (K.degree() == 1) return a;
  const FieldElem& eps = K.fundamental_unit();
  FieldElem s = eps * eps;
  FieldElem cur = a;
  for (;;) {
    FieldElem down = cur / s;
    if (trace(down) < trace(cur)) {
      cur = down;
      continue;
    }
    FieldElem up = cur * s;
    if (trace(up) < trace(cur)) {
      cur = up;
      continue;
    }
    return cur;
  }
}

// some generator of a principal ideal, not necessarily totally positive
std::optional<FieldElem> principal_generator(const NumberField& K, const FieldIdeal& I) {
  if (auto g = totally_positive_generator(I)) return g;
  if (K.degree() == 2) {
    // twist by the square root of the field discriminant, whose ideal
    // represents the other narrow class of principal ideals
    FieldElem m = K.omega_trace() == 0 ? K.omega() : K.elem(-1, 2);
    if (auto g = totally_positive_generator(ideal_mul(I, principal_ideal(m)))) {
      FieldElem r = *g / m;
      if (principal_ideal(r) == I) return r;
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<FieldElem> compute_U(const NumberField& K, const NormalizerData& nd_left,
                                 const NormalizerData& nd_right, const UnitData& ud_left,
                                 const UnitData& ud_right) {
  const auto& reps = K.class_data().tp_unit_reps;
  std::set<int> gens;
  for (const auto& c : ud_left.norm_image_reps) gens.insert(tp_unit_label(K, c));
  for (const auto& c : ud_right.norm_image_reps) gens.insert(tp_unit_label(K, c));
  for (const auto& pl : nd_left.pi_reps) {
    for (const auto& pr : nd_right.pi_reps) {
      FieldIdeal prod = ideal_mul(principal_ideal(pl), principal_ideal(pr));
      auto fac = factor_ideal(prod);
      bool square = true;
      for (const auto& pe : fac)
        if (pe.second % 2) square = false;
      if (!square) continue;
      FieldIdeal root = unit_ideal(K);
      for (const auto& pe : fac) root = ideal_mul(root, ideal_pow(pe.first.P, pe.second / 2));
      auto c = principal_generator(K, root);
      if (!c) continue;
      gens.insert(tp_unit_label(K, (pl * pr) / (*c * *c)));
    }
  }
  std::set<int> U = {tp_unit_label(K, K.one())};
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<int> cur(U.begin(), U.end());
    for (int a : cur)
      for (int g : gens)
        if (U.insert(tp_unit_label(K, reps[a] * reps[g])).second) grew = true;
  }
  std::vector<FieldElem> out;
  for (int k : U) out.push_back(reps[k]);
  return out;
}

TypePairInvariants type_pair_invariants(const GenusContext& ctx, int i, int j) {
  const NumberField& K = ctx.cd.A->field();
  TypePairInvariants inv;
  inv.i = i;
  inv.j = j;
  inv.f_i = ctx.nds[i].f;
  inv.f_j = ctx.nds[j].f;
  int overlap = 0;
  for (const auto& p : ctx.nds[i].pi_reps) {
    for (const auto& q : ctx.nds[j].pi_reps) {
      if (same_principal_square_class(p, q)) {
        ++overlap;
        break;
      }
    }
  }
  inv.f_ij = log2_exact(overlap, "type_pair_invariants: norm group overlap");
  inv.x_i = ctx.type_units[i].x;
  inv.x_j = ctx.type_units[j].x;
  inv.u = K.class_data().u;
  inv.U_J = compute_U(K, ctx.nds[i], ctx.nds[j], ctx.type_units[i], ctx.type_units[j]);
  inv.z_ij = inv.u - log2_exact(inv.U_J.size(), "type_pair_invariants: U size");
  inv.y_ij = inv.f_ij + inv.x_i + inv.x_j - inv.u + inv.z_ij;
  if (inv.z_ij < 0 || inv.y_ij < 0)
    throw consistency_error("type_pair_invariants: negative exponent");
  return inv;
}

Int proper_automorphism_order(const TypePairInvariants& inv, const UnitData& ud_left,
                              const UnitData& ud_right) {
  Int n = 2 * ud_left.norm_one_mod_pm1 * ud_right.norm_one_mod_pm1;
  return n << inv.y_ij;
}

Int proper_automorphism_order_brute(const QuatLattice& J, const std::vector<PrimeIdeal>& ramified) {
  QuatLattice Ol = left_order(J);
  QuatLattice Or = right_order(J);
  UnitData udl = unit_data(Ol);
  UnitData udr = unit_data(Or);
  NormalizerData ndl = normalizer_data(Ol, ramified);
  NormalizerData ndr = normalizer_data(Or, ramified);
  std::vector<QuatElem> alphas, betas;
  for (const auto& w : udl.unit_reps)
    for (const auto& g : ndl.coset_reps) alphas.push_back(w * g);
  for (const auto& w : udr.unit_reps)
    for (const auto& g : ndr.coset_reps) betas.push_back(w * g);
  Int count = 0;
  for (const auto& a : alphas) {
    FieldElem na = reduced_norm(a);
    QuatLattice aJ = left_mul(a, J);
    for (const auto& b : betas) {
      auto c = field_sqrt(na / reduced_norm(b));
      if (!c) continue;
      if (right_mul(aJ, inverse(*c * b)) == J) ++count;
    }
  }
  return 2 * count;
}

std::vector<GenusRep> genus_representatives(const GenusContext& ctx, const FieldIdeal& a,
                                            int den_cap) {
  const QuatAlgebra& A = *ctx.cd.A;
  const NumberField& K = A.field();
  const auto& tp_units = K.class_data().tp_unit_reps;
  std::map<std::pair<int, int>, TypePairInvariants> inv_cache;
  std::map<std::string, QuatElem> au_cache;
  std::vector<GenusRep> out;
  for (int i = 0; i < ctx.cd.t; ++i) {
    std::vector<SMember> T = normalizer_orbits(build_S_i(ctx.cd, i, a), ctx.nds[i]);
    for (const SMember& mem : T) {
      FieldIdeal nJ = lattice_norm(mem.ideal);
      if (!narrowly_equivalent(nJ, a))
        throw consistency_error("genus_representatives: norm class drift");
      auto gen = totally_positive_generator(ideal_mul(ideal_inverse(nJ), a));
      if (!gen) throw consistency_error("genus_representatives: scaling generator missing");
      FieldElem aJ = balance_tp(*gen);
      QuatElem xJ = aJ == K.one() ? A.one() : solve_norm_equation(ctx.cd.M, aJ, den_cap);
      auto key = std::make_pair(mem.left_type, i);
      auto it = inv_cache.find(key);
      if (it == inv_cache.end())
        it = inv_cache.emplace(key, type_pair_invariants(ctx, mem.left_type, i)).first;
      const TypePairInvariants& inv = it->second;
      std::vector<FieldElem> cosets;
      for (const auto& t : tp_units) {
        bool seen = false;
        for (const auto& c : cosets) {
          for (const auto& v : inv.U_J) {
            if (field_sqrt(t / (c * v))) {
              seen = true;
              break;
            }
          }
          if (seen) break;
        }
        if (!seen) cosets.push_back(t);
      }
      if (cosets.size() != size_t{1} << inv.z_ij)
        throw consistency_error("genus_representatives: unit coset count");
      Int aut = proper_automorphism_order(inv, ctx.type_units[mem.left_type], ctx.type_units[i]);
      for (const auto& u : cosets) {
        QuatElem au = A.one();
        if (!(u == K.one())) {
          auto [slot, fresh] = au_cache.try_emplace(to_string(u), A.one());
          if (fresh) slot->second = solve_norm_equation(ctx.cd.M, u, den_cap);
          au = slot->second;
        }
        GenusRep r;
        r.ideal = left_mul(au * xJ, mem.ideal);
        r.base = mem.ideal;
        r.x_J = xJ;
        r.alpha_u = au;
        r.u = u;
        r.a_J = aJ;
        r.left_type = mem.left_type;
        r.right_type = i;
        r.aut_plus_order = aut;
        r.gram = trace_gram(mem.ideal, balance_tp(u * aJ));
        if (!is_a_maximal(r.ideal, a, ctx.alg_disc))
          throw consistency_error("genus_representatives: representative not maximal");
        out.push_back(std::move(r));
      }
    }
  }
  Rat mass = 0;
  for (const auto& r : out) mass += Rat(1) / Rat(r.aut_plus_order);
  if (mass != siegel_mass(A, ctx.cd.ramified))
    throw consistency_error("genus_representatives: mass closure failed");
  return out;
}

std::vector<GenusRep> genus_representatives(const QuatAlgebra& A, const FieldIdeal& a,
                                            int den_cap) {
  return genus_representatives(genus_context(A), a, den_cap);
}

Rat trace_lattice_minimum(const GenusRep& rep) { return gram_minimum(rep.gram); }

Int two_sided_connecting_classes(const GenusContext& ctx, int i, int j) {
  std::vector<SMember> S;
  for (int k = 0; k < ctx.cd.h; ++k) {
    if (ctx.cd.left_type[k] != i) continue;
    QuatLattice P = lattice_mul(ctx.cd.right_ideal_reps[k], ctx.cd.type_reps[j]);
    if (right_order(P) != ctx.cd.type_reps[j])
      throw consistency_error("two_sided_connecting_classes: right order drift");
    S.push_back(SMember{P, i});
  }
  std::sort(S.begin(), S.end(),
            [](const SMember& x, const SMember& y) { return lattice_cmp(x.ideal, y.ideal) < 0; });
  Int count = normalizer_orbits(S, ctx.nds[j]).size();
  TypePairInvariants inv = type_pair_invariants(ctx, i, j);
  int e = static_cast<int>(ctx.cd.ramified.size()) - inv.f_i - inv.f_j + inv.f_ij;
  Rat expected = Rat(ctx.cd.A->field().class_data().h);
  if (e >= 0)
    expected *= Rat(Int(1) << e);
  else
    expected /= Rat(Int(1) << -e);
  if (Rat(count) != expected)
    throw consistency_error("two_sided_connecting_classes: count mismatch");
  return count;
}

}  // namespace qlat
