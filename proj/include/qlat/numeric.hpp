#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qlat {

using Int = mpz_class;
using Rat = mpq_class;

// Raised when an exact consistency check fails (two independent routes to the
// same quantity disagree).  The CLI maps this to exit code 2.
struct consistency_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a bounded search (denominator cap, iteration cap) runs out of
// room.  Exit code 3.
struct search_cap_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void check(bool cond, const std::string& msg) {
  if (!cond) throw consistency_error(msg);
}

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int lcm(const Int& a, const Int& b) {
  Int g;
  mpz_lcm(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

// floor(a/b) for integers, b != 0
inline Int fdiv(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int rat_floor(const Rat& x) {
  return fdiv(x.get_num(), x.get_den());
}

inline Int rat_ceil(const Rat& x) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return q;
}

inline Int isqrt(const Int& n) {
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline bool is_perfect_square(const Int& n) {
  if (n < 0) return false;
  return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

// exact square root of a rational, if it is one
inline std::optional<Rat> sqrt_rat(const Rat& x) {
  if (x < 0) return std::nullopt;
  if (!is_perfect_square(x.get_num()) || !is_perfect_square(x.get_den())) return std::nullopt;
  Rat r(isqrt(x.get_num()), isqrt(x.get_den()));
  r.canonicalize();
  return r;
}

// Integer range { x : (x + c)^2 <= bound }, i.e. x in [-c - sqrt(bound), -c + sqrt(bound)].
// Returns nullopt when bound < 0.  All comparisons exact; a double seed is only
// used to start the adjustment loop.
std::optional<std::pair<Int, Int>> quadratic_int_range(const Rat& c, const Rat& bound);

bool is_prime(const Int& n);

// sum of positive divisors
Int sigma1(const Int& n);

// prime factorisation by trial division; exponents > 0
std::vector<std::pair<Int, int>> factor_int(Int n);

std::string rat_string(const Rat& x);

}  // namespace qlat
