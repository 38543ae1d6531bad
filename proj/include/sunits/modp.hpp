#pragma once

// Polynomials over F_p (p < 2^64) and their complete factorization:
// squarefree split, distinct-degree split, Cantor-Zassenhaus equal-degree
// split. Used to read off prime splitting in monogenic fields.

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "sunits/error.hpp"
#include "sunits/integer.hpp"

namespace sunits::modp {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Coefficients low to high, trimmed; empty is the zero polynomial.
using FpPoly = std::vector<u64>;

inline u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }
inline u64 addmod(u64 a, u64 b, u64 p) {
  u64 s = a + b;
  return (s >= p || s < a) ? s - p : s;
}
inline u64 submod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + (p - b); }

inline u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

inline u64 invmod(u64 a, u64 p) {
  require(a % p != 0, ErrorKind::DivisionByZero, "inverse of zero mod p");
  return powmod(a, p - 2, p);
}

inline void trim(FpPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int deg(const FpPoly& f) { return static_cast<int>(f.size()) - 1; }

/// Reduces integer coefficients into [0, p).
inline FpPoly reduce(const std::vector<Integer>& coeffs, u64 p) {
  FpPoly f;
  Integer P(std::to_string(p));
  for (auto& c : coeffs) {
    Integer r = c % P;
    if (r < 0) r += P;
    f.push_back(std::stoull(r.get_str()));
  }
  trim(f);
  return f;
}

inline FpPoly add(const FpPoly& a, const FpPoly& b, u64 p) {
  FpPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = addmod(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0, p);
  trim(r);
  return r;
}

inline FpPoly sub(const FpPoly& a, const FpPoly& b, u64 p) {
  FpPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = submod(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0, p);
  trim(r);
  return r;
}

inline FpPoly mul(const FpPoly& a, const FpPoly& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  FpPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = addmod(r[i + j], mulmod(a[i], b[j], p), p);
  trim(r);
  return r;
}

inline std::pair<FpPoly, FpPoly> divmod(const FpPoly& a, const FpPoly& b, u64 p) {
  require(!b.empty(), ErrorKind::DivisionByZero, "division by zero polynomial mod p");
  if (a.size() < b.size()) return {{}, a};
  FpPoly r = a, q(a.size() - b.size() + 1, 0);
  const u64 li = invmod(b.back(), p);
  const std::size_t db = b.size() - 1;
  for (std::size_t k = r.size(); k-- > db;) {
    if (r[k] == 0) continue;
    u64 t = mulmod(r[k], li, p);
    q[k - db] = t;
    for (std::size_t j = 0; j <= db; ++j) r[k - db + j] = submod(r[k - db + j], mulmod(t, b[j], p), p);
  }
  r.resize(db);
  trim(r);
  trim(q);
  return {q, r};
}

inline FpPoly mod(const FpPoly& a, const FpPoly& b, u64 p) { return divmod(a, b, p).second; }

inline FpPoly monic(const FpPoly& a, u64 p) {
  if (a.empty()) return a;
  FpPoly r = a;
  const u64 li = invmod(a.back(), p);
  for (auto& c : r) c = mulmod(c, li, p);
  return r;
}

inline FpPoly gcd(FpPoly a, FpPoly b, u64 p) {
  while (!b.empty()) {
    FpPoly r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a, p);
}

inline FpPoly derivative(const FpPoly& a, u64 p) {
  if (a.size() <= 1) return {};
  FpPoly r(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = mulmod(a[i], i % p, p);
  trim(r);
  return r;
}

/// base^e mod m
inline FpPoly powmod(FpPoly base, u64 e, const FpPoly& m, u64 p) {
  FpPoly r{1};
  base = mod(base, m, p);
  while (e) {
    if (e & 1) r = mod(mul(r, base, p), m, p);
    base = mod(mul(base, base, p), m, p);
    e >>= 1;
  }
  return r;
}

inline bool is_one(const FpPoly& a) { return a.size() == 1 && a[0] == 1; }

struct Factor {
  FpPoly poly;  // monic irreducible
  int multiplicity;
};

namespace detail {

// Squarefree decomposition in characteristic p (input monic, nonconstant).
inline void squarefree(const FpPoly& f, u64 p, int mult, std::vector<std::pair<FpPoly, int>>& out) {
  FpPoly df = derivative(f, p);
  if (df.empty()) {
    // f = g(x^p); take the p-th root of coefficients (identity on F_p)
    FpPoly g;
    for (std::size_t i = 0; i < f.size(); i += static_cast<std::size_t>(p)) g.push_back(f[i]);
    squarefree(g, p, mult * static_cast<int>(p), out);
    return;
  }
  FpPoly c = gcd(f, df, p);
  FpPoly w = divmod(f, c, p).first;
  int i = 1;
  while (!is_one(w) && !w.empty() && deg(w) > 0) {
    FpPoly y = gcd(w, c, p);
    FpPoly z = divmod(w, y, p).first;
    if (deg(z) > 0) out.emplace_back(monic(z, p), i * mult);
    ++i;
    w = y;
    c = divmod(c, y, p).first;
  }
  if (deg(c) > 0) {
    FpPoly g;
    for (std::size_t k = 0; k < c.size(); k += static_cast<std::size_t>(p)) g.push_back(c[k]);
    squarefree(monic(g, p), p, mult * static_cast<int>(p), out);
  }
}

// Distinct-degree factorization of a squarefree monic polynomial.
inline std::vector<std::pair<FpPoly, int>> distinct_degree(FpPoly f, u64 p) {
  std::vector<std::pair<FpPoly, int>> out;
  FpPoly x{0, 1};
  FpPoly h = x;
  for (int d = 1; 2 * d <= deg(f); ++d) {
    h = powmod(h, p, f, p);
    FpPoly g = gcd(f, sub(h, x, p), p);
    if (deg(g) > 0) {
      out.emplace_back(g, d);
      f = divmod(f, g, p).first;
      h = mod(h, f, p);
    }
  }
  if (deg(f) > 0) out.emplace_back(f, deg(f));
  return out;
}

// Splits f, a product of distinct irreducibles of degree d.
inline void equal_degree(const FpPoly& f, int d, u64 p, std::mt19937_64& rng, std::vector<FpPoly>& out) {
  if (deg(f) == d) {
    out.push_back(monic(f, p));
    return;
  }
  std::uniform_int_distribution<u64> coeff(0, p - 1);
  for (;;) {
    FpPoly a(static_cast<std::size_t>(deg(f)));
    for (auto& c : a) c = coeff(rng);
    trim(a);
    if (deg(a) <= 0) continue;
    FpPoly b;
    if (p == 2) {
      // trace map a + a^2 + ... + a^(2^(d-1))
      FpPoly t = mod(a, f, p), acc = t;
      for (int i = 1; i < d; ++i) {
        t = mod(mul(t, t, p), f, p);
        acc = add(acc, t, p);
      }
      b = acc;
    } else {
      // a^((p^d-1)/2) - 1, using (p^d-1)/2 = (1 + p + ... + p^(d-1)) * (p-1)/2
      FpPoly t = mod(a, f, p);
      FpPoly norm_like = t, cur = t;
      for (int i = 1; i < d; ++i) {
        cur = powmod(cur, p, f, p);
        norm_like = mod(mul(norm_like, cur, p), f, p);
      }
      b = sub(powmod(norm_like, (p - 1) / 2, f, p), FpPoly{1}, p);
    }
    FpPoly g = gcd(f, b, p);
    if (deg(g) > 0 && deg(g) < deg(f)) {
      equal_degree(g, d, p, rng, out);
      equal_degree(divmod(f, g, p).first, d, p, rng, out);
      return;
    }
  }
}

}  // namespace detail

/// Complete factorization of a nonzero polynomial into monic irreducibles with
/// multiplicity, sorted by (degree, coefficients from the constant term up).
inline std::vector<Factor> factor(const FpPoly& f_in, u64 p) {
  require(!f_in.empty(), ErrorKind::InvalidArgument, "factor of zero polynomial mod p");
  std::vector<Factor> out;
  if (deg(f_in) == 0) return out;
  std::mt19937_64 rng(0xfac7 ^ p);
  std::vector<std::pair<FpPoly, int>> sqf;
  detail::squarefree(monic(f_in, p), p, 1, sqf);
  for (auto& [g, m] : sqf) {
    for (auto& [h, d] : detail::distinct_degree(g, p)) {
      std::vector<FpPoly> irr;
      detail::equal_degree(h, d, p, rng, irr);
      for (auto& q : irr) out.push_back({q, m});
    }
  }
  std::sort(out.begin(), out.end(), [](const Factor& a, const Factor& b) {
    if (a.poly.size() != b.poly.size()) return a.poly.size() < b.poly.size();
    return a.poly < b.poly;
  });
  std::vector<Factor> merged;
  for (auto& fac : out) {
    if (!merged.empty() && merged.back().poly == fac.poly)
      merged.back().multiplicity += fac.multiplicity;
    else
      merged.push_back(fac);
  }
  return merged;
}

inline bool is_irreducible(const FpPoly& f, u64 p) {
  auto fs = factor(f, p);
  return fs.size() == 1 && fs[0].multiplicity == 1;
}

}  // namespace sunits::modp
