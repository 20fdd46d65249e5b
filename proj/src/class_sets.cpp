#include "qlat/class_sets.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace qlat {

Rat eichler_mass(const QuatAlgebra& A, const std::vector<PrimeIdeal>& ramified) {
  const NumberField& K = A.field();
  Rat z = K.zeta_minus_one();
  if (z < 0) z = -z;
  Rat m = z * Rat(K.class_data().h);
  for (int k = 1; k < K.degree(); ++k) m /= 2;
  for (const auto& P : ramified) m *= Rat(ideal_norm(P.P) - 1);
  return m;
}

Rat eichler_mass(const QuatAlgebra& A) {
  QuatLattice M = maximal_order(A);
  return eichler_mass(A, ramified_primes(M));
}

Rat mass_per_narrow_class(const QuatAlgebra& A) {
  return Rat(eichler_mass(A) / Rat(A.field().class_data().h_plus));
}

std::vector<QuatLattice> norm_p_right_ideals(const QuatLattice& O, const PrimeIdeal& P) {
  QuatLattice PO = lattice_scale(P.P, O);
  FpQuotient q(O, PO, P.p);
  Int total = 1;
  for (int k = 0; k < q.dim(); ++k) {
    total *= P.p;
    if (total > 1000000) throw search_cap_error("norm_p_right_ideals: residue space too large");
  }
  std::vector<QuatLattice> out;
  std::set<std::string> seen;
  std::vector<Int> c(q.dim(), 0);
  for (Int idx = 1; idx < total; ++idx) {
    int pos = 0;
    while (true) {
      c[pos] += 1;
      if (c[pos] < P.p) break;
      c[pos] = 0;
      ++pos;
    }
    QuatElem x = q.lift(c);
    QuatLattice J = lattice_add(left_mul(x, O), PO);
    if (lattice_norm(J) == P.P && seen.insert(lattice_key(J)).second) out.push_back(J);
  }
  std::sort(out.begin(), out.end(),
            [](const QuatLattice& a, const QuatLattice& b) { return lattice_cmp(a, b) < 0; });
  return out;
}

std::vector<QuatLattice> two_sided_candidates(const QuatLattice& O,
                                              const std::vector<PrimeIdeal>& ramified) {
  std::vector<QuatLattice> rs;
  for (const auto& P : ramified) rs.push_back(two_sided_maximal_ideal(O, P));
  const auto& cls = O.A->field().class_data().reps;
  std::vector<QuatLattice> out;
  for (size_t mask = 0; mask < (size_t(1) << rs.size()); ++mask) {
    QuatLattice base = O;
    for (size_t k = 0; k < rs.size(); ++k)
      if (mask & (size_t(1) << k)) base = lattice_mul(base, rs[k]);
    for (const auto& b : cls) out.push_back(lattice_scale(b, base));
  }
  return out;
}

bool orders_conjugate(const QuatLattice& O1, const QuatLattice& O2,
                      const std::vector<PrimeIdeal>& ramified) {
  if (O1 == O2) return true;
  QuatLattice C = lattice_mul(O1, O2);
  for (const auto& T : two_sided_candidates(O2, ramified))
    if (is_left_principal(lattice_mul(C, T)).has_value()) return true;
  return false;
}

namespace {

// class invariant of a right ideal: theta coefficients of the left order's
// trace form together with the narrow class of the norm
std::string ideal_class_key(const QuatLattice& OL, const QuatLattice& I) {
  const NumberField& K = I.A->field();
  TraceGram g = trace_gram(OL, K.one());
  std::map<Rat, long> counts;
  for (const auto& v : short_vectors(g, Rat(2 * K.degree()))) counts[gram_value(g, v)] += 1;
  std::string s;
  for (const auto& vc : counts)
    s += rat_string(vc.first) + "^" + std::to_string(vc.second) + ";";
  s += "|" + std::to_string(narrow_class_index(lattice_norm(I)));
  return s;
}

}  // namespace

ClassData right_ideal_classes(const QuatAlgebra& A) {
  ClassData cd;
  cd.A = &A;
  cd.M = maximal_order(A);
  cd.ramified = ramified_primes(cd.M);
  const NumberField& K = A.field();
  Rat target = eichler_mass(A, cd.ramified);

  struct Entry {
    QuatLattice I;
    QuatLattice OL;
    UnitData ud;
    std::string key;
  };
  std::vector<Entry> reps;
  std::set<std::string> seen;
  Rat mass = 0;

  auto add_class = [&](const QuatLattice& I) {
    if (!seen.insert(lattice_key(I)).second) return;
    QuatLattice OL = left_order(I);
    std::string key = ideal_class_key(OL, I);
    for (const auto& e : reps) {
      if (e.key != key) continue;
      if (is_left_principal(lattice_mul(I, lattice_inverse(e.I))).has_value()) return;
    }
    UnitData ud = unit_data(OL);
    mass += Rat(1) / Rat(ud.unit_index);
    check(mass <= target, "right_ideal_classes: mass exceeds the Eichler mass");
    reps.push_back(Entry{I, OL, std::move(ud), std::move(key)});
  };

  add_class(cd.M);

  std::set<std::string> ram_keys;
  for (const auto& P : cd.ramified) ram_keys.insert(ideal_key(P.P));
  std::vector<PrimeIdeal> nb_primes;
  std::vector<size_t> done(1, 0);  // neighbor primes already expanded per rep
  long p_cursor = 1;

  while (mass != target) {
    bool worked = false;
    for (size_t k = 0; k < reps.size() && mass != target; ++k) {
      if (done.size() < reps.size()) done.resize(reps.size(), 0);
      while (done[k] < nb_primes.size() && mass != target) {
        const PrimeIdeal& P = nb_primes[done[k]++];
        worked = true;
        auto lines = norm_p_right_ideals(reps[k].OL, P);
        check(Rat(Int(lines.size())) == Rat(ideal_norm(P.P) + 1),
              "right_ideal_classes: wrong neighbor count at an unramified prime");
        for (const auto& J : lines) {
          add_class(lattice_mul(J, reps[k].I));
          if (mass == target) break;
        }
      }
    }
    if (mass == target) break;
    if (!worked) {
      // current prime set exhausted without closing the mass: widen it
      size_t before = nb_primes.size();
      while (nb_primes.size() == before) {
        p_cursor += 1;
        if (!is_prime(Int(p_cursor))) continue;
        for (const auto& P : primes_above(K, Int(p_cursor)))
          if (!ram_keys.count(ideal_key(P.P))) nb_primes.push_back(P);
      }
    }
  }

  std::vector<size_t> order(reps.size());
  for (size_t k = 0; k < reps.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return lattice_cmp(reps[a].I, reps[b].I) < 0;
  });
  for (size_t k : order) {
    cd.right_ideal_reps.push_back(reps[k].I);
    cd.left_orders.push_back(reps[k].OL);
    cd.left_units.push_back(reps[k].ud);
  }
  cd.h = static_cast<int>(cd.right_ideal_reps.size());
  return cd;
}

void maximal_order_types(ClassData& cd) {
  cd.type_reps.clear();
  cd.left_type.assign(cd.left_orders.size(), -1);
  std::vector<std::vector<size_t>> members;
  for (size_t k = 0; k < cd.left_orders.size(); ++k) {
    size_t tk = cd.type_reps.size();
    for (size_t j = 0; j < cd.type_reps.size(); ++j) {
      if (orders_conjugate(cd.left_orders[k], cd.type_reps[j], cd.ramified)) {
        tk = j;
        break;
      }
    }
    if (tk == cd.type_reps.size()) {
      cd.type_reps.push_back(cd.left_orders[k]);
      members.push_back({});
    }
    members[tk].push_back(k);
    // unit data is a conjugation invariant
    check(cd.left_units[k].unit_index == cd.left_units[members[tk][0]].unit_index &&
              cd.left_units[k].norm_one_mod_pm1 == cd.left_units[members[tk][0]].norm_one_mod_pm1,
          "maximal_order_types: unit data differs within a conjugacy class");
  }
  std::vector<size_t> order(cd.type_reps.size());
  for (size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return lattice_cmp(cd.type_reps[a], cd.type_reps[b]) < 0;
  });
  std::vector<QuatLattice> sorted;
  for (size_t j = 0; j < order.size(); ++j) {
    sorted.push_back(cd.type_reps[order[j]]);
    for (size_t k : members[order[j]]) cd.left_type[k] = static_cast<int>(j);
  }
  cd.type_reps = std::move(sorted);
  cd.t = static_cast<int>(cd.type_reps.size());
}

Rat mass_of_narrow_class(const ClassData& cd, int narrow_index) {
  Rat m = 0;
  for (int k = 0; k < cd.h; ++k)
    if (narrow_class_index(lattice_norm(cd.right_ideal_reps[k])) == narrow_index)
      m += Rat(1) / Rat(cd.left_units[k].unit_index);
  return m;
}

NormalizerData normalizer_data(const QuatLattice& M, const std::vector<PrimeIdeal>& ramified) {
  NormalizerData nd;
  for (const auto& T : two_sided_candidates(M, ramified)) {
    auto g = is_left_principal(T);
    if (!g.has_value()) continue;
    check(left_mul(*g, M) == right_mul(M, *g), "normalizer_data: generator does not normalize");
    FieldElem ng = reduced_norm(*g);
    for (const auto& prev : nd.pi_reps)
      check(!same_principal_square_class(ng, prev),
            "normalizer_data: distinct cosets share a norm square class");
    nd.coset_reps.push_back(*g);
    nd.pi_reps.push_back(ng);
  }
  size_t n = nd.coset_reps.size();
  nd.f = 0;
  while ((size_t(1) << nd.f) < n) ++nd.f;
  check((size_t(1) << nd.f) == n, "normalizer_data: coset count is not a power of two");
  return nd;
}

Int two_sided_class_number(const QuatLattice& M, const std::vector<PrimeIdeal>& ramified,
                           const NormalizerData& nd) {
  auto cands = two_sided_candidates(M, ramified);
  std::vector<int> orbit(cands.size(), -1);
  int orbits = 0;
  for (size_t i = 0; i < cands.size(); ++i) {
    if (orbit[i] >= 0) continue;
    orbit[i] = orbits;
    for (size_t j = i + 1; j < cands.size(); ++j) {
      if (orbit[j] >= 0) continue;
      if (is_left_principal(lattice_mul(cands[i], lattice_inverse(cands[j]))).has_value())
        orbit[j] = orbits;
    }
    ++orbits;
  }
  Int expected = M.A->field().class_data().h;
  for (size_t k = 0; k < ramified.size(); ++k) expected *= 2;
  for (int k = 0; k < nd.f; ++k) {
    check(expected % 2 == 0, "two_sided_class_number: 2^f does not divide 2^s h");
    expected /= 2;
  }
  check(Int(orbits) == expected, "two_sided_class_number: direct count disagrees with formula");
  return Int(orbits);
}

}  // namespace qlat
