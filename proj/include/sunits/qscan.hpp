#pragma once

// Machine-integer scans of rational maps over Q.
//
// With phi = A/B scaled to integer coefficients, phi(n/d) = X/Y where
//   X = A_h(n, d) * d^max(0, b - a),   Y = B_h(n, d) * d^max(0, a - b)
// and A_h, B_h are the homogenizations. X/Y is an S-unit iff both are nonzero
// and they agree in absolute value once the primes of S are stripped, so
// no gcd or big-integer work is needed per element. The word size is picked
// from an a-priori bound on |X|, |Y| and falls back to GMP.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "sunits/box.hpp"
#include "sunits/dynamics.hpp"
#include "sunits/places.hpp"

namespace sunits::qscan {

using i128 = __int128;

struct IntegralForm {
  std::vector<Integer> A, B;  // integer numerator / denominator coefficients
  int a = 0, b = 0;           // their degrees
  Integer bound_factor;       // max(sum |A_i|, sum |B_i|)
};

inline IntegralForm integral_form(const RationalMap& phi) {
  require(phi.field().is_rationals(), ErrorKind::InvalidArgument, "integer scans need K = Q");
  Integer L = 1;
  for (const KPoly* p : {&phi.num(), &phi.den()})
    for (auto& c : p->coeffs()) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), c.coords()[0].get_den_mpz_t());
  IntegralForm f;
  Integer sa = 0, sb = 0;
  for (auto& c : phi.num().coeffs()) {
    Rational v = c.coords()[0] * L;
    f.A.push_back(v.get_num());
    sa += abs(v.get_num());
  }
  for (auto& c : phi.den().coeffs()) {
    Rational v = c.coords()[0] * L;
    f.B.push_back(v.get_num());
    sb += abs(v.get_num());
  }
  if (f.A.empty()) f.A.push_back(Integer(0));
  f.a = static_cast<int>(f.A.size()) - 1;
  f.b = static_cast<int>(f.B.size()) - 1;
  f.bound_factor = std::max(sa, sb);
  return f;
}

namespace detail {

template <class Int>
Int from_integer(const Integer& z) {
  if constexpr (std::is_same_v<Int, Integer>) {
    return z;
  } else {
    Integer m = abs(z);
    unsigned __int128 u = 0;
    std::uint64_t words[2] = {0, 0};
    std::size_t count = 0;
    mpz_export(words, &count, -1, sizeof(std::uint64_t), 0, 0, m.get_mpz_t());
    u = (static_cast<unsigned __int128>(words[1]) << 64) | words[0];
    Int r = static_cast<Int>(u);
    return sgn(z) < 0 ? Int(-r) : r;
  }
}

template <class Int>
Integer to_integer(Int x) {
  if constexpr (std::is_same_v<Int, Integer>) {
    return x;
  } else if constexpr (sizeof(Int) <= sizeof(long)) {
    return Integer(static_cast<long>(x));
  } else {
    bool neg = x < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-static_cast<i128>(x)) : static_cast<unsigned __int128>(x);
    std::uint64_t words[2] = {static_cast<std::uint64_t>(u), static_cast<std::uint64_t>(u >> 64)};
    Integer r;
    mpz_import(r.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, words);
    return neg ? Integer(-r) : r;
  }
}

template <class Int>
Int iabs(const Int& x) {
  if constexpr (std::is_same_v<Int, Integer>) return abs(x);
  else return x < 0 ? -x : x;
}

// Removes the S primes from a positive x and adds the multiplicities to e
// (when given). The first prime may be 2, which uses a bit count.
template <class Int>
void strip(Int& x, const std::vector<Int>& qs, long* e, long sign) {
  for (std::size_t j = 0; j < qs.size(); ++j) {
    const Int& q = qs[j];
    if constexpr (!std::is_same_v<Int, Integer>) {
      if (q == 2) {
        int tz = 0;
        auto lo = static_cast<std::uint64_t>(x);
        if (lo == 0) {
          tz = 64 + __builtin_ctzll(static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) >> 64));
        } else {
          tz = __builtin_ctzll(lo);
        }
        x >>= tz;
        if (e) e[j] += sign * tz;
        continue;
      }
    }
    while (x % q == 0) {
      x /= q;
      if (e) e[j] += sign;
    }
  }
}

template <class Int>
struct Evaluator {
  std::vector<Int> A, B;
  int a = 0, b = 0, D = 0;
  std::vector<Int> dp;

  explicit Evaluator(const IntegralForm& f) : a(f.a), b(f.b), D(std::max(f.a, f.b)) {
    for (auto& c : f.A) A.push_back(from_integer<Int>(c));
    for (auto& c : f.B) B.push_back(from_integer<Int>(c));
    dp.resize(static_cast<std::size_t>(D) + 1);
  }

  void set_d(long d) {
    dp[0] = 1;
    for (int i = 1; i <= D; ++i) dp[static_cast<std::size_t>(i)] = dp[static_cast<std::size_t>(i) - 1] * Int(d);
  }

  static Int homog(const std::vector<Int>& C, int deg, Int n, const std::vector<Int>& dpw) {
    Int acc = C[static_cast<std::size_t>(deg)];
    for (int i = deg - 1; i >= 0; --i) acc = acc * n + C[static_cast<std::size_t>(i)] * dpw[static_cast<std::size_t>(deg - i)];
    return acc;
  }

  void eval(long n, Int& X, Int& Y) const {
    X = homog(A, a, Int(n), dp);
    Y = homog(B, b, Int(n), dp);
    if (b > a) X *= dp[static_cast<std::size_t>(b - a)];
    if (a > b) Y *= dp[static_cast<std::size_t>(a - b)];
  }
};

enum class Width { W64, W128, Big };

inline Width choose_width(const IntegralForm& f, long H) {
  Integer bound = f.bound_factor * ipow(Integer(H), static_cast<unsigned long>(std::max(f.a, f.b)));
  if (mpz_sizeinbase(bound.get_mpz_t(), 2) < 62) return Width::W64;
  if (mpz_sizeinbase(bound.get_mpz_t(), 2) < 125) return Width::W128;
  return Width::Big;
}

template <class Int>
std::vector<Int> convert_primes(const std::vector<Integer>& ps) {
  std::vector<Int> out;
  for (auto& p : ps) out.push_back(from_integer<Int>(p));
  return out;
}

}  // namespace detail

struct ImageHit {
  Rational beta;
  Rational value;  // phi(beta), an S-unit
};

namespace detail {

template <class Int>
void image_hits_shard(const IntegralForm& f, const std::vector<Integer>& primes, long H, BoxShard shard,
                      std::vector<ImageHit>& out) {
  Evaluator<Int> ev(f);
  const auto qs = convert_primes<Int>(primes);
  long last_d = 0;
  Int X, Y;
  for_each_rational_in_box(H, shard, [&](long n, long d) {
    if (d != last_d) {
      ev.set_d(d);
      last_d = d;
    }
    ev.eval(n, X, Y);
    if (X == 0 || Y == 0) return;
    Int x = iabs(X), y = iabs(Y);
    strip<Int>(x, qs, nullptr, 0);
    strip<Int>(y, qs, nullptr, 0);
    if (x != y) return;
    out.push_back({make_rational(Integer(n), Integer(d)), make_rational(to_integer(X), to_integer(Y))});
  });
}

}  // namespace detail

/// Every beta of height <= H with phi(beta) in O_S^*, canonical order.
inline std::vector<ImageHit> image_sunit_hits(const RationalMap& phi, const std::vector<Integer>& primes, long H,
                                              unsigned threads = 1) {
  const IntegralForm f = integral_form(phi);
  const detail::Width w = detail::choose_width(f, H);
  auto parts = run_sharded<std::vector<ImageHit>>(threads, [&](BoxShard shard, std::vector<ImageHit>& local) {
    switch (w) {
      case detail::Width::W64: detail::image_hits_shard<std::int64_t>(f, primes, H, shard, local); break;
      case detail::Width::W128: detail::image_hits_shard<i128>(f, primes, H, shard, local); break;
      case detail::Width::Big: detail::image_hits_shard<Integer>(f, primes, H, shard, local); break;
    }
  });
  std::vector<ImageHit> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  const NumberField Q = phi.field();
  std::sort(out.begin(), out.end(), [&](const ImageHit& x, const ImageHit& y) {
    return canonical_less(Q.from_rational(x.beta), Q.from_rational(y.beta));
  });
  return out;
}

// ---------------------------------------------------------------------------
// one pass over the box for all twists y^p = gamma_i psi(z) at once

struct CurveHit {
  Rational z;
  std::size_t model;  // index into the coset representatives
  Rational y;
};

namespace detail {

// Smallest primes l = 1 mod p; the p-th power residues mod l filter out most
// candidates before any gcd.
struct ResidueFilter {
  std::vector<long> ell;
  std::vector<std::vector<char>> is_power;
  std::vector<std::vector<long>> pow_p1;  // y^(p-1) mod l

  explicit ResidueFilter(unsigned p) {
    for (long l = 3; ell.size() < 4; l += 2) {
      if (!is_prime(Integer(l)) || (l - 1) % static_cast<long>(p) != 0) continue;
      std::vector<char> tab(static_cast<std::size_t>(l), 0);
      std::vector<long> pw(static_cast<std::size_t>(l));
      for (long x = 0; x < l; ++x) {
        long r = 1;
        for (unsigned k = 1; k < p; ++k) r = r * x % l;
        pw[static_cast<std::size_t>(x)] = r;
        tab[static_cast<std::size_t>(r * x % l)] = 1;
      }
      ell.push_back(l);
      is_power.push_back(std::move(tab));
      pow_p1.push_back(std::move(pw));
    }
  }

  // x y^(p-1) must be a p-th power residue when x / y reduces to a p-th power
  template <class Int>
  bool may_pass(const Int& x, const Int& y) const {
    for (std::size_t k = 0; k < ell.size(); ++k) {
      const long l = ell[k];
      long xr, yr;
      if constexpr (std::is_same_v<Int, Integer>) {
        xr = Integer(x % l).get_si();
        yr = Integer(y % l).get_si();
      } else {
        xr = static_cast<long>(x % l);
        yr = static_cast<long>(y % l);
      }
      if (!is_power[k][static_cast<std::size_t>(xr * pow_p1[k][static_cast<std::size_t>(yr)] % l)]) return false;
    }
    return true;
  }
};

template <class Int>
void curve_hits_shard(const IntegralForm& f, const CosetReps& gamma, const std::vector<Integer>& primes, long H,
                      BoxShard shard, std::vector<CurveHit>& out) {
  Evaluator<Int> ev(f);
  const auto qs = convert_primes<Int>(primes);
  const unsigned p = gamma.p;
  const ResidueFilter filter(p);
  std::vector<long> e(qs.size());
  long last_d = 0;
  Int X, Y;
  for_each_rational_in_box(H, shard, [&](long n, long d) {
    if (d != last_d) {
      ev.set_d(d);
      last_d = d;
    }
    ev.eval(n, X, Y);
    if (X == 0 || Y == 0) return;  // y = 0 or a pole
    std::fill(e.begin(), e.end(), 0);
    Int x = iabs(X), y = iabs(Y);
    strip<Int>(x, qs, e.data(), +1);
    strip<Int>(y, qs, e.data(), -1);
    if (!filter.may_pass(x, y)) return;
    Integer xi = to_integer(x), yi = to_integer(y);
    Rational rest = make_rational(xi, yi);
    if (!exact_root(rest, p)) return;
    std::size_t index = 0, place = 1;
    for (std::size_t j = 0; j < e.size(); ++j) {
      long digit = ((-e[j]) % static_cast<long>(p) + static_cast<long>(p)) % static_cast<long>(p);
      index += static_cast<std::size_t>(digit) * place;
      place *= p;
    }
    const bool negative = (X < 0) != (Y < 0);
    if (gamma.torsion_included && negative) index += place;
    Rational value = make_rational(to_integer(X), to_integer(Y));
    auto root = exact_root(Rational(gamma.reps[index].coords()[0] * value), p);
    require(root.has_value(), ErrorKind::AssertionFailed, "power-class scan disagrees with exact root");
    out.push_back({make_rational(Integer(n), Integer(d)), index, *root});
  });
}

}  // namespace detail

/// Points (z, y), y != 0, of every twist y^p = gamma_i psi(z) with z of
/// height <= H, for the coset representatives of S over Q. Exactly one twist
/// can contain a given z, and this finds it from the S-exponent vector.
inline std::vector<CurveHit> curve_hits_all_models(const RationalMap& psi, const CosetReps& gamma,
                                                   const std::vector<Integer>& primes, long H, unsigned threads = 1) {
  const IntegralForm f = integral_form(psi);
  const detail::Width w = detail::choose_width(f, H);
  auto parts = run_sharded<std::vector<CurveHit>>(threads, [&](BoxShard shard, std::vector<CurveHit>& local) {
    switch (w) {
      case detail::Width::W64: detail::curve_hits_shard<std::int64_t>(f, gamma, primes, H, shard, local); break;
      case detail::Width::W128: detail::curve_hits_shard<i128>(f, gamma, primes, H, shard, local); break;
      case detail::Width::Big: detail::curve_hits_shard<Integer>(f, gamma, primes, H, shard, local); break;
    }
  });
  std::vector<CurveHit> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  const NumberField Q = psi.field();
  std::sort(out.begin(), out.end(), [&](const CurveHit& x, const CurveHit& y) {
    return canonical_less(Q.from_rational(x.z), Q.from_rational(y.z));
  });
  return out;
}

}  // namespace sunits::qscan
