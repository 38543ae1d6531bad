#pragma once

// Big integers/rationals on top of GMP, plus the number-theoretic helpers the
// rest of the library leans on: primality, factorization, exact roots.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sunits/error.hpp"

namespace sunits {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
  require(den != 0, ErrorKind::DivisionByZero, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Parses "a", "-a" or "a/b"; the result is canonical.
inline Rational parse_rational(const std::string& text) {
  Rational q;
  std::string s;
  for (char ch : text)
    if (ch != ' ' && ch != '+') s.push_back(ch);
  if (s.empty() || q.set_str(s, 10) != 0) fail(ErrorKind::ConfigError, "cannot parse rational '" + text + "'");
  require(q.get_den() != 0, ErrorKind::ConfigError, "zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline std::string to_string(const Integer& z) { return z.get_str(); }

inline Integer ipow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rational rpow(const Rational& base, long e) {
  Rational b = base;
  if (e < 0) {
    require(b != 0, ErrorKind::DivisionByZero, "negative power of zero");
    b = 1 / b;
    e = -e;
  }
  Rational r(ipow(b.get_num(), static_cast<unsigned long>(e)), ipow(b.get_den(), static_cast<unsigned long>(e)));
  r.canonicalize();
  return r;
}

inline bool is_prime(const Integer& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

inline std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint32_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = std::uint64_t(i) * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

inline Integer next_prime(const Integer& n) {
  Integer r;
  mpz_nextprime(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

/// Removes every factor p from n and returns the multiplicity.
inline unsigned long remove_factor(Integer& n, const Integer& p) {
  if (n == 0) return 0;
  return mpz_remove(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
}

/// v_p of a nonzero rational.
inline long valuation(const Rational& q, const Integer& p) {
  require(q != 0, ErrorKind::ZeroElement, "valuation of zero");
  Integer num = q.get_num(), den = q.get_den();
  return static_cast<long>(remove_factor(num, p)) - static_cast<long>(remove_factor(den, p));
}

namespace detail {

// Brent's variant of Pollard rho; n must be odd composite.
inline Integer pollard_brent(const Integer& n, std::mt19937_64& rng) {
  if (n % 2 == 0) return 2;
  std::uniform_int_distribution<unsigned long> dist(1, 1ul << 40);
  for (;;) {
    Integer y = Integer(dist(rng)) % n, c = Integer(dist(rng)) % n, g = 1, r = 1, q = 1, x, ys;
    const unsigned long m = 128;
    do {
      x = y;
      for (Integer i = 0; i < r; ++i) y = (y * y + c) % n;
      Integer k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < m && k + i < r; ++i) {
          y = (y * y + c) % n;
          Integer diff = abs(x - y);
          q = (q * diff) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = (ys * ys + c) % n;
        Integer diff = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void factor_into(Integer n, std::map<Integer, unsigned>& out, std::mt19937_64& rng) {
  if (n == 1) return;
  if (is_prime(n)) {
    out[n] += 1;
    return;
  }
  // perfect powers make rho slow; split them first
  for (unsigned long k = 2; mpz_sizeinbase(n.get_mpz_t(), 2) >= k; ++k) {
    Integer root;
    if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) {
      std::map<Integer, unsigned> sub;
      factor_into(root, sub, rng);
      for (auto& [p, e] : sub) out[p] += e * static_cast<unsigned>(k);
      return;
    }
  }
  Integer d = pollard_brent(n, rng);
  factor_into(d, out, rng);
  factor_into(n / d, out, rng);
}

}  // namespace detail

/// Prime factorization of |n| (n != 0). Deterministic: fixed-seed rho.
inline std::map<Integer, unsigned> factor(const Integer& n) {
  require(n != 0, ErrorKind::ZeroElement, "factor(0)");
  std::map<Integer, unsigned> out;
  Integer m = abs(n);
  static const std::vector<std::uint32_t> small = primes_up_to(2000);
  for (std::uint32_t p : small) {
    if (m == 1) break;
    if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      Integer pp = p;
      out[pp] = static_cast<unsigned>(remove_factor(m, pp));
    }
  }
  std::mt19937_64 rng(0x5eed);
  detail::factor_into(m, out, rng);
  return out;
}

inline std::vector<Integer> prime_divisors(const Integer& n) {
  std::vector<Integer> out;
  for (auto& [p, e] : factor(n)) out.push_back(p);
  return out;
}

/// All positive divisors of |n|, ascending.
inline std::vector<Integer> divisors(const Integer& n) {
  std::vector<Integer> out{1};
  for (auto& [p, e] : factor(n)) {
    std::size_t base = out.size();
    Integer pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Exact k-th root in Z, if one exists (negative n allowed for odd k).
inline std::optional<Integer> exact_root(const Integer& n, unsigned long k) {
  require(k >= 1, ErrorKind::InvalidArgument, "root index must be positive");
  if (n < 0 && k % 2 == 0) return std::nullopt;
  Integer root;
  if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) == 0) return std::nullopt;
  return root;
}

inline std::optional<Rational> exact_root(const Rational& q, unsigned long k) {
  auto num = exact_root(q.get_num(), k);
  if (!num) return std::nullopt;
  auto den = exact_root(q.get_den(), k);
  if (!den) return std::nullopt;
  return make_rational(*num, *den);
}

/// Decimal digit count of the larger of numerator/denominator.
inline std::size_t digits(const Rational& q) {
  return std::max(mpz_sizeinbase(q.get_num().get_mpz_t(), 10), mpz_sizeinbase(q.get_den().get_mpz_t(), 10));
}

}  // namespace sunits
