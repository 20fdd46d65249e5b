#include "qlat/numeric.hpp"

#include <cmath>

namespace qlat {

std::optional<std::pair<Int, Int>> quadratic_int_range(const Rat& c, const Rat& bound) {
  if (bound < 0) return std::nullopt;
  // ok(x) <=> x + c <= sqrt(bound), monotone in x
  auto upper_ok = [&](const Int& x) {
    Rat t = Rat(x) + c;
    if (t <= 0) return true;
    return t * t <= bound;
  };
  // seed from doubles, then fix up exactly
  double cd = c.get_d();
  double rd = std::sqrt(std::max(0.0, bound.get_d()));
  Int hi;
  if (std::isfinite(cd) && std::isfinite(rd)) {
    hi = Int(static_cast<long>(std::floor(-cd + rd)));
  } else {
    hi = rat_floor(-c) + isqrt(rat_ceil(bound)) + 1;
  }
  while (upper_ok(hi + 1)) hi += 1;
  while (!upper_ok(hi)) hi -= 1;
  // lower bound by symmetry: x >= -c - sqrt(bound) <=> -x <= c + sqrt(bound)
  auto lower_ok = [&](const Int& x) {
    Rat t = Rat(x) + c;
    if (t >= 0) return true;
    return t * t <= bound;
  };
  Int lo;
  if (std::isfinite(cd) && std::isfinite(rd)) {
    lo = Int(static_cast<long>(std::ceil(-cd - rd)));
  } else {
    lo = rat_ceil(-c) - isqrt(rat_ceil(bound)) - 1;
  }
  while (lower_ok(lo - 1)) lo -= 1;
  while (!lower_ok(lo)) lo += 1;
  if (lo > hi) return std::nullopt;
  return std::make_pair(lo, hi);
}

bool is_prime(const Int& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

Int sigma1(const Int& n) {
  if (n <= 0) throw std::invalid_argument("sigma1 expects n > 0");
  Int total = 1;
  Int m = n;
  for (Int p = 2; p * p <= m;) {
    if (m % p == 0) {
      Int pk = 1, s = 1;
      while (m % p == 0) {
        m /= p;
        pk *= p;
        s += pk;
      }
      total *= s;
    }
    p += (p == 2) ? 1 : 2;
  }
  if (m > 1) total *= (1 + m);
  return total;
}

std::vector<std::pair<Int, int>> factor_int(Int n) {
  if (n < 0) n = -n;
  if (n == 0) throw std::invalid_argument("factor_int expects n != 0");
  std::vector<std::pair<Int, int>> out;
  for (Int p = 2; p * p <= n;) {
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.emplace_back(p, e);
    }
    p += (p == 2) ? 1 : 2;
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::string rat_string(const Rat& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

}  // namespace qlat
