#include "qlat/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace qlat {

namespace {

// ---------------------------------------------------------------- json tree

// Deterministic pretty printer: object keys keep insertion order, arrays of
// scalars print inline, everything else opens a block with 2 space indent.
// Numbers are emitted as arbitrary precision decimal literals; rationals are
// quoted "n/d" strings so consumers never lose exactness.
struct JNode {
  enum Kind { j_null, j_num, j_str, j_arr, j_obj };
  Kind kind = j_null;
  std::string lit;
  std::vector<JNode> arr;
  std::vector<std::pair<std::string, JNode>> obj;
};

JNode jnull() { return JNode{}; }

JNode jnum(const Int& n) {
  JNode v;
  v.kind = JNode::j_num;
  v.lit = n.get_str();
  return v;
}

JNode jnum(long n) { return jnum(Int(n)); }

JNode jstr(std::string s) {
  JNode v;
  v.kind = JNode::j_str;
  v.lit = std::move(s);
  return v;
}

JNode jrat(const Rat& x) { return jstr(rat_string(x)); }

JNode jarr() {
  JNode v;
  v.kind = JNode::j_arr;
  return v;
}

JNode jobj() {
  JNode v;
  v.kind = JNode::j_obj;
  return v;
}

void put(JNode& o, const char* k, JNode v) { o.obj.emplace_back(k, std::move(v)); }

std::string json_escape(const std::string& s) {
  std::string r;
  for (char c : s) {
    switch (c) {
      case '"': r += "\\\""; break;
      case '\\': r += "\\\\"; break;
      case '\n': r += "\\n"; break;
      case '\t': r += "\\t"; break;
      case '\r': r += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned char>(c));
          r += buf;
        } else {
          r += c;
        }
    }
  }
  return r;
}

bool is_scalar(const JNode& v) { return v.kind != JNode::j_arr && v.kind != JNode::j_obj; }

void dump(const JNode& v, std::string& out, int depth) {
  switch (v.kind) {
    case JNode::j_null:
      out += "null";
      return;
    case JNode::j_num:
      out += v.lit;
      return;
    case JNode::j_str:
      out += '"';
      out += json_escape(v.lit);
      out += '"';
      return;
    case JNode::j_arr: {
      if (v.arr.empty()) {
        out += "[]";
        return;
      }
      bool flat = std::all_of(v.arr.begin(), v.arr.end(), is_scalar);
      if (flat) {
        out += '[';
        for (size_t k = 0; k < v.arr.size(); ++k) {
          if (k) out += ", ";
          dump(v.arr[k], out, depth);
        }
        out += ']';
        return;
      }
      const std::string pad(2 * (depth + 1), ' ');
      out += "[\n";
      for (size_t k = 0; k < v.arr.size(); ++k) {
        if (k) out += ",\n";
        out += pad;
        dump(v.arr[k], out, depth + 1);
      }
      out += '\n';
      out += std::string(2 * depth, ' ');
      out += ']';
      return;
    }
    case JNode::j_obj: {
      if (v.obj.empty()) {
        out += "{}";
        return;
      }
      const std::string pad(2 * (depth + 1), ' ');
      out += "{\n";
      for (size_t k = 0; k < v.obj.size(); ++k) {
        if (k) out += ",\n";
        out += pad;
        out += '"';
        out += json_escape(v.obj[k].first);
        out += "\": ";
        dump(v.obj[k].second, out, depth + 1);
      }
      out += '\n';
      out += std::string(2 * depth, ' ');
      out += '}';
      return;
    }
  }
}

// ------------------------------------------------------------- text helpers

std::string imat_rows(const IMat& B) {
  std::string s = "[";
  for (int r = 0; r < B.rows; ++r) {
    if (r) s += "; ";
    for (int c = 0; c < B.cols; ++c) {
      if (c) s += ",";
      s += B(r, c).get_str();
    }
  }
  s += "]";
  return s;
}

std::string lattice_text(const QuatLattice& L) {
  if (L.den == 1) return imat_rows(L.B);
  return "(1/" + L.den.get_str() + ")" + imat_rows(L.B);
}

JNode imat_node(const IMat& B) {
  JNode rows = jarr();
  for (int r = 0; r < B.rows; ++r) {
    JNode row = jarr();
    for (int c = 0; c < B.cols; ++c) row.arr.push_back(jnum(B(r, c)));
    rows.arr.push_back(std::move(row));
  }
  return rows;
}

JNode lattice_node(const QuatLattice& L) {
  JNode o = jobj();
  put(o, "denominator", jnum(L.den));
  put(o, "basis", imat_node(L.B));
  return o;
}

// clear the rational gram to integers via the lcm of the entry denominators
std::pair<Int, IMat> gram_scaled(const TraceGram& g) {
  Int den = 1;
  for (const Rat& e : g.G.a) den = lcm(den, Int(e.get_den()));
  IMat M(g.G.rows, g.G.cols);
  for (size_t k = 0; k < g.G.a.size(); ++k)
    M.a[k] = Int(g.G.a[k].get_num() * (den / g.G.a[k].get_den()));
  return {den, M};
}

// ------------------------------------------------------------ job handling

const char* const usage_text =
    "usage: qgenus <target> [options]\n"
    "targets:\n"
    "  genus          proper isometry classes of normal lattices of norm --ideal\n"
    "  ideal-classes  left equivalence classes of right ideals of a maximal order\n"
    "  orders         conjugacy types of maximal orders with their unit invariants\n"
    "  mass           eichler and siegel masses of the algebra\n"
    "  verify         run every applicable cross check suite (exit 2 on failure)\n"
    "options:\n"
    "  --field rationals|real_quadratic   base field (default rationals)\n"
    "  --d N                              squarefree N > 1, with --field real_quadratic\n"
    "  --a ELT, --b ELT                   totally positive parameters, i^2 = -a,\n"
    "                                     j^2 = -b; elements are written p+q*w\n"
    "  --ideal SPEC                       unit | prime:p^e[*p^e...] | narrow class\n"
    "                                     index (default unit)\n"
    "  --output json|table                report format (default table)\n"
    "  --denominator-cap N                norm equation search bound (default 32)\n"
    "  --threads N                        accepted for compatibility, single threaded\n"
    "  --seed N                           reserved, no effect on results\n";

bool parse_int_str(const std::string& s, Int& out) {
  size_t k = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (k == s.size()) return false;
  for (size_t i = k; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  out = Int(s);
  return true;
}

bool parse_long_str(const std::string& s, long& out) {
  Int v;
  if (!parse_int_str(s, v)) return false;
  if (!v.fits_slong_p()) return false;
  out = v.get_si();
  return true;
}

// "p^e*p^e*..." with positive prime bases and nonzero integer exponents;
// merged and sorted so the rendering is canonical
bool parse_prime_powers(const std::string& body, std::map<Int, long>& out, std::string& err) {
  if (body.empty()) {
    err = "empty prime list in --ideal";
    return false;
  }
  size_t pos = 0;
  while (pos <= body.size()) {
    size_t stop = body.find('*', pos);
    if (stop == std::string::npos) stop = body.size();
    std::string tok = body.substr(pos, stop - pos);
    pos = stop + 1;
    size_t caret = tok.find('^');
    std::string base = caret == std::string::npos ? tok : tok.substr(0, caret);
    long e = 1;
    if (caret != std::string::npos && !parse_long_str(tok.substr(caret + 1), e)) {
      err = "bad exponent in --ideal factor '" + tok + "'";
      return false;
    }
    Int p;
    if (!parse_int_str(base, p) || p < 2) {
      err = "bad prime in --ideal factor '" + tok + "'";
      return false;
    }
    if (!is_prime(p)) {
      err = "--ideal factor " + p.get_str() + " is not prime";
      return false;
    }
    out[p] += e;
    if (pos > body.size()) break;
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second == 0 ? out.erase(it) : std::next(it);
  return true;
}

std::string render_prime_powers(const std::map<Int, long>& f) {
  if (f.empty()) return "unit";
  std::string s = "prime:";
  bool first = true;
  for (const auto& [p, e] : f) {
    if (!first) s += "*";
    first = false;
    s += p.get_str();
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s;
}

struct Report {
  JNode results = jobj();
  JNode checks = jarr();
  std::vector<std::string> lines;
  bool ok = true;
};

void add_check(Report& rep, const std::string& name, bool pass) {
  JNode c = jobj();
  put(c, "name", jstr(name));
  put(c, "status", jstr(pass ? "PASS" : "FAIL"));
  rep.checks.arr.push_back(std::move(c));
  rep.lines.push_back("check " + name + ": " + (pass ? "PASS" : "FAIL"));
  if (!pass) rep.ok = false;
}

// ----------------------------------------------------------------- targets

// h 2^{s-f_i} can be a half integer power below h when normalizer norms hit
// nonprincipal classes, so the comparison runs over rationals
bool two_sided_counts_match(const GenusContext& ctx, const Int& h, int s) {
  for (int i = 0; i < ctx.cd.t; ++i) {
    int e = s - ctx.nds[i].f;
    Rat expected(h);
    if (e >= 0)
      expected *= Rat(Int(Int(1) << e));
    else
      expected /= Rat(Int(Int(1) << -e));
    try {
      if (Rat(two_sided_class_number(ctx.cd.type_reps[i], ctx.cd.ramified, ctx.nds[i])) !=
          expected)
        return false;
    } catch (const consistency_error&) {
      return false;
    }
  }
  return true;
}

void cmd_mass(const QuatAlgebra& A, Report& rep) {
  const NumberField& K = A.field();
  const ClassGroupData& cdk = K.class_data();
  std::vector<PrimeIdeal> ram = ramified_primes(maximal_order(A));
  int s = static_cast<int>(ram.size());
  Rat em = eichler_mass(A, ram);
  Rat per = mass_per_narrow_class(A);
  Rat sm = siegel_mass(A, ram);

  put(rep.results, "eichler_mass", jrat(em));
  put(rep.results, "mass_per_narrow_class", jrat(per));
  put(rep.results, "siegel_mass", jrat(sm));
  JNode narrow = jarr();
  for (size_t k = 0; k < cdk.narrow_reps.size(); ++k) {
    JNode c = jobj();
    put(c, "index", jnum(static_cast<long>(k)));
    put(c, "ideal", jstr(ideal_string(cdk.narrow_reps[k])));
    narrow.arr.push_back(std::move(c));
  }
  put(rep.results, "narrow_classes", std::move(narrow));

  rep.lines.push_back("eichler mass: " + rat_string(em));
  rep.lines.push_back("mass per narrow class: " + rat_string(per));
  rep.lines.push_back("siegel mass: " + rat_string(sm));
  for (size_t k = 0; k < cdk.narrow_reps.size(); ++k)
    rep.lines.push_back("narrow class " + std::to_string(k) + ": " +
                        ideal_string(cdk.narrow_reps[k]));

  Rat rhs = em * em / Rat(Int(cdk.h * cdk.h));
  rhs /= Rat(Int(Int(1) << (1 + s)));
  add_check(rep, "siegel_from_eichler", sm == rhs);
  add_check(rep, "eichler_narrow_split", em == Rat(per * Rat(cdk.h_plus)));
}

void cmd_ideal_classes(const QuatAlgebra& A, Report& rep) {
  ClassData cd = right_ideal_classes(A);
  maximal_order_types(cd);

  put(rep.results, "h", jnum(static_cast<long>(cd.h)));
  put(rep.results, "type_count", jnum(static_cast<long>(cd.t)));
  rep.lines.push_back("classes: " + std::to_string(cd.h) +
                      "  order types: " + std::to_string(cd.t));
  JNode classes = jarr();
  for (int k = 0; k < cd.h; ++k) {
    const QuatLattice& I = cd.right_ideal_reps[k];
    FieldIdeal nI = lattice_norm(I);
    int narrow = narrow_class_index(nI);
    JNode c = jobj();
    put(c, "index", jnum(static_cast<long>(k)));
    put(c, "left_type", jnum(static_cast<long>(cd.left_type[k])));
    put(c, "norm", jstr(ideal_string(nI)));
    put(c, "narrow_class", jnum(static_cast<long>(narrow)));
    put(c, "lattice", lattice_node(I));
    classes.arr.push_back(std::move(c));
    rep.lines.push_back("class " + std::to_string(k) + ": left type " +
                        std::to_string(cd.left_type[k]) + "  norm " + ideal_string(nI) +
                        "  narrow " + std::to_string(narrow));
    rep.lines.push_back("  basis: " + lattice_text(I));
  }
  put(rep.results, "classes", std::move(classes));

  Rat msum = 0;
  for (int k = 0; k < cd.h; ++k) msum += Rat(1) / Rat(cd.left_units[k].unit_index);
  add_check(rep, "eichler_mass_closure", msum == eichler_mass(A, cd.ramified));
  const ClassGroupData& cdk = A.field().class_data();
  bool split_ok = true;
  for (size_t k = 0; k < cdk.narrow_reps.size(); ++k)
    split_ok = split_ok &&
               mass_of_narrow_class(cd, static_cast<int>(k)) == mass_per_narrow_class(A);
  add_check(rep, "narrow_class_mass_split", split_ok);
}

void cmd_orders(const QuatAlgebra& A, Report& rep) {
  GenusContext ctx = genus_context(A);
  int s = static_cast<int>(ctx.cd.ramified.size());

  put(rep.results, "type_count", jnum(static_cast<long>(ctx.cd.t)));
  rep.lines.push_back("order types: " + std::to_string(ctx.cd.t));
  JNode types = jarr();
  for (int i = 0; i < ctx.cd.t; ++i) {
    const UnitData& ud = ctx.type_units[i];
    JNode c = jobj();
    put(c, "index", jnum(static_cast<long>(i)));
    put(c, "norm_one_mod_pm1", jnum(ud.norm_one_mod_pm1));
    put(c, "unit_index", jnum(ud.unit_index));
    JNode img = jarr();
    std::string img_text;
    for (const FieldElem& v : ud.norm_image_reps) {
      img.arr.push_back(jstr(to_string(v)));
      if (!img_text.empty()) img_text += ", ";
      img_text += to_string(v);
    }
    put(c, "norm_image", std::move(img));
    put(c, "normalizer_rank", jnum(static_cast<long>(ctx.nds[i].f)));
    put(c, "order", lattice_node(ctx.cd.type_reps[i]));
    types.arr.push_back(std::move(c));
    rep.lines.push_back("type " + std::to_string(i) + ": |O^1/<-1>| " +
                        ud.norm_one_mod_pm1.get_str() + "  [O*:ZK*] " +
                        ud.unit_index.get_str() + "  norm image {" + img_text + "}  f " +
                        std::to_string(ctx.nds[i].f));
    rep.lines.push_back("  order: " + lattice_text(ctx.cd.type_reps[i]));
  }
  put(rep.results, "types", std::move(types));

  add_check(rep, "two_sided_class_numbers",
            two_sided_counts_match(ctx, A.field().class_data().h, s));
}

void cmd_genus(const QuatAlgebra& A, const FieldIdeal& a, const std::string& ideal_spec,
               int den_cap, Report& rep) {
  GenusContext ctx = genus_context(A);
  std::vector<GenusRep> reps = genus_representatives(ctx, a, den_cap);
  Rat sm = siegel_mass(A, ctx.cd.ramified);
  int narrow = narrow_class_index(a);

  put(rep.results, "ideal_spec", jstr(ideal_spec));
  put(rep.results, "ideal", jstr(ideal_string(a)));
  put(rep.results, "narrow_class", jnum(static_cast<long>(narrow)));
  put(rep.results, "class_count", jnum(static_cast<long>(reps.size())));
  put(rep.results, "siegel_mass", jrat(sm));
  rep.lines.push_back("norm ideal: " + ideal_string(a) + "  narrow class " +
                      std::to_string(narrow));
  rep.lines.push_back("classes: " + std::to_string(reps.size()) +
                      "  siegel mass: " + rat_string(sm));

  JNode classes = jarr();
  Rat mass = 0;
  bool all_max = true;
  for (size_t k = 0; k < reps.size(); ++k) {
    const GenusRep& r = reps[k];
    auto [den, G] = gram_scaled(r.gram);
    Rat minq = Rat(trace_lattice_minimum(r) * Rat(den));
    check(minq.get_den() == 1, "cmd_genus: scaled minimum not integral");
    JNode c = jobj();
    put(c, "index", jnum(static_cast<long>(k)));
    put(c, "left_type", jnum(static_cast<long>(r.left_type)));
    put(c, "right_type", jnum(static_cast<long>(r.right_type)));
    put(c, "unit_coset", jstr(to_string(r.u)));
    put(c, "scaling", jstr(to_string(r.a_J)));
    put(c, "aut_plus_order", jnum(r.aut_plus_order));
    put(c, "minimum", jnum(Int(minq.get_num())));
    JNode g = jobj();
    put(g, "denominator", jnum(den));
    put(g, "entries", imat_node(G));
    put(c, "gram", std::move(g));
    classes.arr.push_back(std::move(c));
    mass += Rat(1) / Rat(r.aut_plus_order);
    all_max = all_max && is_a_maximal(r.ideal, a, ctx.alg_disc);
    rep.lines.push_back("class " + std::to_string(k) + ": left " +
                        std::to_string(r.left_type) + " right " + std::to_string(r.right_type) +
                        " unit " + to_string(r.u) + " scaling " + to_string(r.a_J) + " aut+ " +
                        r.aut_plus_order.get_str() + " min " + Int(minq.get_num()).get_str());
    rep.lines.push_back("  gram/" + den.get_str() + ": " + imat_rows(G));
  }
  put(rep.results, "classes", std::move(classes));
  add_check(rep, "mass_closure", mass == sm);
  add_check(rep, "representatives_maximal", all_max);
}

void cmd_verify(const QuatAlgebra& A, int den_cap, Report& rep) {
  GenusContext ctx = genus_context(A);
  const NumberField& K = A.field();
  const ClassGroupData& cdk = K.class_data();
  int s = static_cast<int>(ctx.cd.ramified.size());

  Rat msum = 0;
  for (int k = 0; k < ctx.cd.h; ++k) msum += Rat(1) / Rat(ctx.cd.left_units[k].unit_index);
  add_check(rep, "eichler_mass_closure", msum == eichler_mass(A, ctx.cd.ramified));

  bool split_ok = true;
  for (size_t k = 0; k < cdk.narrow_reps.size(); ++k)
    split_ok = split_ok &&
               mass_of_narrow_class(ctx.cd, static_cast<int>(k)) == mass_per_narrow_class(A);
  add_check(rep, "narrow_class_mass_split", split_ok);

  add_check(rep, "two_sided_class_numbers", two_sided_counts_match(ctx, cdk.h, s));

  bool cc_ok = true;
  for (int i = 0; i < ctx.cd.t && cc_ok; ++i) {
    for (int j = 0; j < ctx.cd.t && cc_ok; ++j) {
      try {
        two_sided_connecting_classes(ctx, i, j);
      } catch (const consistency_error&) {
        cc_ok = false;
      }
    }
  }
  add_check(rep, "connecting_class_counts", cc_ok);

  Rat sm = siegel_mass(A, ctx.cd.ramified);
  std::vector<GenusRep> unit_genus;
  bool gm_ok = true;
  for (size_t k = 0; k < cdk.narrow_reps.size(); ++k) {
    try {
      std::vector<GenusRep> reps = genus_representatives(ctx, cdk.narrow_reps[k], den_cap);
      Rat total = 0;
      for (const GenusRep& r : reps) total += Rat(1) / Rat(r.aut_plus_order);
      gm_ok = gm_ok && total == sm;
      if (k == 0) unit_genus = std::move(reps);
    } catch (const consistency_error&) {
      gm_ok = false;
    }
  }
  add_check(rep, "genus_mass_closures", gm_ok);

  bool aut_ok = !unit_genus.empty();
  for (const GenusRep& r : unit_genus)
    aut_ok = aut_ok &&
             proper_automorphism_order_brute(r.ideal, ctx.cd.ramified) == r.aut_plus_order;
  add_check(rep, "automorphism_formula_brute", aut_ok);

  put(rep.results, "order_types", jnum(static_cast<long>(ctx.cd.t)));
  put(rep.results, "ideal_classes", jnum(static_cast<long>(ctx.cd.h)));
  put(rep.results, "narrow_classes", jnum(static_cast<long>(cdk.narrow_reps.size())));
  put(rep.results, "unit_genus_classes", jnum(static_cast<long>(unit_genus.size())));
  rep.lines.insert(rep.lines.begin(),
                   "order types: " + std::to_string(ctx.cd.t) +
                       "  ideal classes: " + std::to_string(ctx.cd.h) +
                       "  narrow classes: " + std::to_string(cdk.narrow_reps.size()) +
                       "  unit genus classes: " + std::to_string(unit_genus.size()));
}

// ------------------------------------------------------------------ report

JNode field_node(const NumberField& K) {
  JNode o = jobj();
  if (K.is_rationals()) {
    put(o, "type", jstr("rationals"));
  } else {
    put(o, "type", jstr("real_quadratic"));
    put(o, "d", jnum(K.d()));
  }
  put(o, "discriminant", jnum(K.discriminant()));
  const ClassGroupData& cdk = K.class_data();
  put(o, "class_number", jnum(cdk.h));
  put(o, "narrow_class_number", jnum(cdk.h_plus));
  return o;
}

JNode algebra_node(const QuatAlgebra& A) {
  JNode o = jobj();
  put(o, "a", jstr(to_string(A.a())));
  put(o, "b", jstr(to_string(A.b())));
  JNode ram = jarr();
  for (const PrimeIdeal& P : ramified_primes(maximal_order(A)))
    ram.arr.push_back(jstr(ideal_string(P.P)));
  put(o, "ramified_primes", std::move(ram));
  return o;
}

std::string field_text(const NumberField& K) {
  if (K.is_rationals()) return "field: Q";
  const ClassGroupData& cdk = K.class_data();
  return "field: Q(sqrt " + K.d().get_str() + ")  disc " + K.discriminant().get_str() +
         "  h " + cdk.h.get_str() + "  h+ " + cdk.h_plus.get_str();
}

std::string algebra_text(const QuatAlgebra& A) {
  std::string ram;
  for (const PrimeIdeal& P : ramified_primes(maximal_order(A))) {
    if (!ram.empty()) ram += ", ";
    ram += ideal_string(P.P);
  }
  if (ram.empty()) ram = "(none)";
  return "algebra: i^2 = -(" + to_string(A.a()) + "), j^2 = -(" + to_string(A.b()) +
         ")  ramified: " + ram;
}

void emit(const JobSpec& spec, const QuatAlgebra& A, const Report& rep, std::ostream& out) {
  if (spec.output == "json") {
    JNode root = jobj();
    put(root, "spec", jstr(render_job(spec)));
    put(root, "field", field_node(A.field()));
    put(root, "algebra", algebra_node(A));
    put(root, "results", rep.results);
    put(root, "checks", rep.checks);
    put(root, "timings", jnull());
    std::string s;
    dump(root, s, 0);
    out << s << "\n";
    return;
  }
  out << "spec: " << render_job(spec) << "\n";
  out << field_text(A.field()) << "\n";
  out << algebra_text(A) << "\n";
  for (const std::string& l : rep.lines) out << l << "\n";
}

int run_job(const JobSpec& spec, std::ostream& out, std::ostream& err) {
  auto t0 = std::chrono::steady_clock::now();
  NumberField K = job_field(spec);
  auto pa = parse_elem(K, spec.a);
  auto pb = parse_elem(K, spec.b);
  if (!pa || !pb) throw std::invalid_argument("cannot parse algebra parameters");
  QuatAlgebra A(K, *pa, *pb);
  std::string ierr;
  std::optional<FieldIdeal> a = parse_ideal_spec(K, spec.ideal, ierr);
  if (!a) {
    err << "error: " << ierr << "\n";
    return 64;
  }
  if (spec.threads > 1) err << "note: --threads accepted, computation is single threaded\n";

  Report rep;
  if (spec.target == "genus")
    cmd_genus(A, *a, spec.ideal, spec.den_cap, rep);
  else if (spec.target == "ideal-classes")
    cmd_ideal_classes(A, rep);
  else if (spec.target == "orders")
    cmd_orders(A, rep);
  else if (spec.target == "mass")
    cmd_mass(A, rep);
  else
    cmd_verify(A, spec.den_cap, rep);

  emit(spec, A, rep, out);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char buf[64];
  std::snprintf(buf, sizeof buf, "# wall %s %.1fs", spec.target.c_str(), secs);
  err << buf << "\n";
  return rep.ok ? 0 : 2;
}

}  // namespace

// ---------------------------------------------------------------- parsing

std::optional<JobSpec> parse_job(const std::vector<std::string>& args, std::string& err) {
  if (args.empty()) {
    err = "missing target";
    return std::nullopt;
  }
  JobSpec s;
  s.target = args[0];
  if (s.target != "genus" && s.target != "ideal-classes" && s.target != "orders" &&
      s.target != "mass" && s.target != "verify") {
    err = "unknown target '" + s.target + "'";
    return std::nullopt;
  }
  std::map<std::string, std::string> flags;
  for (size_t k = 1; k < args.size(); k += 2) {
    const std::string& f = args[k];
    if (f.rfind("--", 0) != 0) {
      err = "unexpected argument '" + f + "'";
      return std::nullopt;
    }
    if (k + 1 >= args.size()) {
      err = "flag " + f + " needs a value";
      return std::nullopt;
    }
    if (!flags.emplace(f, args[k + 1]).second) {
      err = "duplicate flag " + f;
      return std::nullopt;
    }
  }
  auto take = [&](const char* name) -> std::optional<std::string> {
    auto it = flags.find(name);
    if (it == flags.end()) return std::nullopt;
    std::string v = it->second;
    flags.erase(it);
    return v;
  };

  if (auto v = take("--field")) {
    if (*v == "rationals")
      s.rationals = true;
    else if (*v == "real_quadratic")
      s.rationals = false;
    else {
      err = "unknown --field '" + *v + "'";
      return std::nullopt;
    }
  }
  if (auto v = take("--d")) {
    if (s.rationals) {
      err = "--d requires --field real_quadratic";
      return std::nullopt;
    }
    if (!parse_int_str(*v, s.d) || s.d < 2) {
      err = "bad --d '" + *v + "'";
      return std::nullopt;
    }
  } else if (!s.rationals) {
    err = "--field real_quadratic requires --d";
    return std::nullopt;
  }

  NumberField K = NumberField::rationals();
  try {
    K = job_field(s);
  } catch (const std::invalid_argument& e) {
    err = e.what();
    return std::nullopt;
  }
  auto canon_elem = [&](const char* name, std::string& slot) {
    auto v = take(name);
    if (!v) return true;
    auto x = parse_elem(K, *v);
    if (!x) {
      err = std::string("cannot parse ") + name + " '" + *v + "'";
      return false;
    }
    slot = to_string(*x);
    return true;
  };
  if (!canon_elem("--a", s.a) || !canon_elem("--b", s.b)) return std::nullopt;

  if (auto v = take("--ideal")) {
    if (*v == "unit") {
      s.ideal = "unit";
    } else if (v->rfind("prime:", 0) == 0) {
      std::map<Int, long> f;
      if (!parse_prime_powers(v->substr(6), f, err)) return std::nullopt;
      s.ideal = render_prime_powers(f);
    } else {
      Int idx;
      if (!parse_int_str(*v, idx) || idx < 0) {
        err = "bad --ideal '" + *v + "'";
        return std::nullopt;
      }
      s.ideal = idx.get_str();
    }
  }
  if (auto v = take("--output")) {
    if (*v != "json" && *v != "table") {
      err = "unknown --output '" + *v + "'";
      return std::nullopt;
    }
    s.output = *v;
  }
  if (auto v = take("--denominator-cap")) {
    long n;
    if (!parse_long_str(*v, n) || n < 0 || n > 1000000) {
      err = "bad --denominator-cap '" + *v + "'";
      return std::nullopt;
    }
    s.den_cap = static_cast<int>(n);
  }
  if (auto v = take("--threads")) {
    long n;
    if (!parse_long_str(*v, n) || n < 1 || n > 4096) {
      err = "bad --threads '" + *v + "'";
      return std::nullopt;
    }
    s.threads = static_cast<int>(n);
  }
  if (auto v = take("--seed")) {
    if (!parse_int_str(*v, s.seed)) {
      err = "bad --seed '" + *v + "'";
      return std::nullopt;
    }
  }
  if (!flags.empty()) {
    err = "unknown flag " + flags.begin()->first;
    return std::nullopt;
  }
  return s;
}

std::string render_job(const JobSpec& spec) {
  std::ostringstream o;
  o << spec.target << " --field " << (spec.rationals ? "rationals" : "real_quadratic");
  if (!spec.rationals) o << " --d " << spec.d.get_str();
  o << " --a " << spec.a << " --b " << spec.b << " --ideal " << spec.ideal << " --output "
    << spec.output << " --denominator-cap " << spec.den_cap << " --threads " << spec.threads
    << " --seed " << spec.seed.get_str();
  return o.str();
}

NumberField job_field(const JobSpec& spec) {
  return spec.rationals ? NumberField::rationals() : NumberField::real_quadratic(spec.d);
}

std::optional<FieldIdeal> parse_ideal_spec(const NumberField& K, const std::string& s,
                                           std::string& err) {
  if (s == "unit") return unit_ideal(K);
  if (s.rfind("prime:", 0) == 0) {
    std::map<Int, long> f;
    if (!parse_prime_powers(s.substr(6), f, err)) return std::nullopt;
    FieldIdeal acc = unit_ideal(K);
    for (const auto& [p, e] : f) {
      std::vector<PrimeIdeal> above = primes_above(K, p);
      if (above.size() != 1) {
        err = p.get_str() + " splits in the field; name the narrow class index instead";
        return std::nullopt;
      }
      acc = ideal_mul(acc, ideal_pow(above[0].P, e));
    }
    return acc;
  }
  Int idx;
  if (!parse_int_str(s, idx) || idx < 0) {
    err = "bad ideal spec '" + s + "'";
    return std::nullopt;
  }
  const ClassGroupData& cdk = K.class_data();
  if (idx >= Int(static_cast<long>(cdk.narrow_reps.size()))) {
    err = "narrow class index " + s + " out of range, field has " +
          std::to_string(cdk.narrow_reps.size()) + " narrow classes";
    return std::nullopt;
  }
  return cdk.narrow_reps[idx.get_ui()];
}

std::string ideal_string(const FieldIdeal& x) {
  std::string s = rat_string(ideal_norm(x)) + ":" + imat_rows(x.B);
  if (x.den != 1) s += "/" + x.den.get_str();
  return s;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::string perr;
  std::optional<JobSpec> spec = parse_job(args, perr);
  if (!spec) {
    err << "error: " << perr << "\n\n" << usage_text;
    return 64;
  }
  try {
    return run_job(*spec, out, err);
  } catch (const search_cap_error& e) {
    err << "error: " << e.what() << "\n";
    err << "hint: rerun with a larger --denominator-cap (current " << spec->den_cap << ")\n";
    return 3;
  } catch (const consistency_error& e) {
    err << "error: consistency check failed: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 64;
  }
}

}  // namespace qlat
