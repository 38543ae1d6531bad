#pragma once

// Dense univariate polynomials over an exact field.
//
// The coefficient type T must provide, findable by ordinary or argument
// dependent lookup:
//   bool is_zero(const T&);  T zero_like(const T&);  T one_like(const T&);
//   T from_int_like(const T&, long);  T inverse(const T&);
// plus the usual + - * operators. The zero polynomial has no coefficients,
// so no operation ever has to conjure a zero out of thin air.

#include <cstddef>
#include <tuple>
#include <utility>
#include <vector>

#include "sunits/error.hpp"
#include "sunits/integer.hpp"

namespace sunits {

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
inline Rational zero_like(const Rational&) { return Rational(0); }
inline Rational one_like(const Rational&) { return Rational(1); }
inline Rational from_int_like(const Rational&, long k) { return Rational(k); }
inline Rational inverse(const Rational& x) {
  require(!is_zero(x), ErrorKind::DivisionByZero, "inverse of zero");
  return 1 / x;
}

namespace detail {
template <class T>
bool coeff_is_zero(const T& x) {
  return is_zero(x);
}
}  // namespace detail

template <class T>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly constant(const T& c) { return Poly(std::vector<T>{c}); }

  static Poly monomial(const T& c, std::size_t k) {
    if (detail::coeff_is_zero(c)) return {};
    std::vector<T> v(k + 1, zero_like(c));
    v[k] = c;
    return Poly(std::move(v));
  }

  /// z - a
  static Poly linear_root(const T& a) { return Poly(std::vector<T>{-a, one_like(a)}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  std::size_t size() const { return c_.size(); }
  const std::vector<T>& coeffs() const { return c_; }
  const T& operator[](std::size_t i) const { return c_[i]; }
  const T& leading() const { return c_.back(); }

  /// Coefficient of z^i, with `zero` returned past the end.
  T coeff(std::size_t i, const T& zero) const { return i < c_.size() ? c_[i] : zero; }

  bool is_monic() const { return !c_.empty() && is_zero_poly_one(c_.back()); }

  T operator()(const T& x) const {
    if (c_.empty()) return zero_like(x);
    T acc = c_.back();
    for (std::size_t i = c_.size() - 1; i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<T> v;
    v.reserve(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) v.push_back(c_[i] * from_int_like(c_[i], static_cast<long>(i)));
    return Poly(std::move(v));
  }

  Poly scaled(const T& s) const {
    std::vector<T> v(c_);
    for (auto& x : v) x = x * s;
    return Poly(std::move(v));
  }

  Poly monic() const {
    if (c_.empty()) return {};
    return scaled(inverse(c_.back()));
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    if (a.c_.size() < b.c_.size()) return b + a;
    std::vector<T> v(a.c_);
    for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] = v[i] + b.c_[i];
    return Poly(std::move(v));
  }

  friend Poly operator-(const Poly& a) {
    std::vector<T> v(a.c_);
    for (auto& x : v) x = -x;
    return Poly(std::move(v));
  }

  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.c_.empty() || b.c_.empty()) return {};
    std::vector<T> v(a.c_.size() + b.c_.size() - 1, zero_like(a.c_[0]));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (detail::coeff_is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] = v[i + j] + a.c_[i] * b.c_[j];
    }
    return Poly(std::move(v));
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

 private:
  static bool is_zero_poly_one(const T& x) { return x == one_like(x); }

  void trim() {
    while (!c_.empty() && detail::coeff_is_zero(c_.back())) c_.pop_back();
  }

  std::vector<T> c_;
};

template <class T>
Poly<T> pow(const Poly<T>& p, unsigned k) {
  require(!p.is_zero() || k > 0, ErrorKind::InvalidArgument, "0^0");
  if (k == 0) return Poly<T>::constant(one_like(p.leading()));
  Poly<T> result = p;
  for (unsigned i = 1; i < k; ++i) result = result * p;
  return result;
}

/// Euclidean division a = q*b + r with deg r < deg b.
template <class T>
std::pair<Poly<T>, Poly<T>> divmod(const Poly<T>& a, const Poly<T>& b) {
  require(!b.is_zero(), ErrorKind::DivisionByZero, "polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly<T>{}, a};
  std::vector<T> r(a.coeffs());
  const std::size_t db = static_cast<std::size_t>(b.degree());
  std::vector<T> q(r.size() - db, zero_like(r[0]));
  const T lead_inv = inverse(b.leading());
  for (std::size_t k = r.size(); k-- > db;) {
    if (is_zero(r[k])) continue;
    T t = r[k] * lead_inv;
    q[k - db] = t;
    for (std::size_t j = 0; j <= db; ++j) r[k - db + j] = r[k - db + j] - t * b[j];
  }
  r.resize(db);
  return {Poly<T>(std::move(q)), Poly<T>(std::move(r))};
}

template <class T>
Poly<T> operator%(const Poly<T>& a, const Poly<T>& b) {
  return divmod(a, b).second;
}

/// Exact quotient; throws if b does not divide a.
template <class T>
Poly<T> exact_div(const Poly<T>& a, const Poly<T>& b) {
  auto [q, r] = divmod(a, b);
  require(r.is_zero(), ErrorKind::AssertionFailed, "inexact polynomial division");
  return q;
}

/// Monic gcd (zero if both inputs are zero).
template <class T>
Poly<T> gcd(Poly<T> a, Poly<T> b) {
  while (!b.is_zero()) {
    Poly<T> r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Returns (g, s, t) with s*a + t*b = g = gcd(a, b), g monic.
template <class T>
std::tuple<Poly<T>, Poly<T>, Poly<T>> xgcd(const Poly<T>& a, const Poly<T>& b) {
  require(!a.is_zero() || !b.is_zero(), ErrorKind::InvalidArgument, "xgcd(0, 0)");
  const T one = one_like(a.is_zero() ? b.leading() : a.leading());
  Poly<T> r0 = a, r1 = b, s0 = Poly<T>::constant(one), s1{}, t0{}, t1 = Poly<T>::constant(one);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly<T> s2 = s0 - q * s1, t2 = t0 - q * t1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  T li = inverse(r0.leading());
  return {r0.scaled(li), s0.scaled(li), t0.scaled(li)};
}

/// Product of the distinct irreducible factors (characteristic zero).
template <class T>
Poly<T> squarefree_part(const Poly<T>& p) {
  if (p.degree() <= 0) return p.is_zero() ? p : Poly<T>::constant(one_like(p.leading()));
  return exact_div(p.monic(), gcd(p, p.derivative()));
}

/// Yun's algorithm: monic squarefree factors paired with their multiplicity,
/// so that p = lc(p) * prod f_i^{m_i}. Constant factors are skipped.
template <class T>
std::vector<std::pair<Poly<T>, int>> squarefree_decomposition(const Poly<T>& p) {
  std::vector<std::pair<Poly<T>, int>> out;
  if (p.degree() <= 0) return out;
  Poly<T> f = p.monic();
  Poly<T> fp = f.derivative();
  Poly<T> a = gcd(f, fp);
  Poly<T> b = exact_div(f, a);
  Poly<T> c = exact_div(fp, a);
  Poly<T> d = c - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    Poly<T> g = gcd(b, d);
    if (g.degree() > 0) out.emplace_back(g, i);
    b = exact_div(b, g);
    c = exact_div(d, g);
    d = c - b.derivative();
    ++i;
  }
  return out;
}

/// Multiplicities of all roots over the algebraic closure, by distinct-root
/// class: returns (degree of squarefree factor, multiplicity) pairs.
template <class T>
std::vector<int> root_multiplicities(const Poly<T>& p) {
  std::vector<int> out;
  for (auto& [f, m] : squarefree_decomposition(p))
    for (int k = 0; k < f.degree(); ++k) out.push_back(m);
  return out;
}

/// Res(a, b) via the Euclidean remainder sequence.
template <class T>
T resultant(Poly<T> a, Poly<T> b, const T& one) {
  if (a.is_zero() || b.is_zero()) return zero_like(one);
  T acc = one;
  for (;;) {
    const int m = a.degree(), k = b.degree();
    if (k == 0) {
      T r = one;
      for (int i = 0; i < m; ++i) r = r * b.leading();
      return acc * r;
    }
    if (m == 0) {
      T r = one;
      for (int i = 0; i < k; ++i) r = r * a.leading();
      return acc * r;
    }
    Poly<T> r = a % b;
    if (r.is_zero()) return zero_like(one);
    if ((m * k) % 2 == 1) acc = -acc;
    const T lb = b.leading();
    for (int i = 0; i < m - r.degree(); ++i) acc = acc * lb;
    a = std::move(b);
    b = std::move(r);
  }
}

/// p(q(z))
template <class T>
Poly<T> compose(const Poly<T>& p, const Poly<T>& q) {
  if (p.is_zero()) return {};
  Poly<T> acc = Poly<T>::constant(p.leading());
  for (std::size_t i = p.size() - 1; i-- > 0;) acc = acc * q + Poly<T>::constant(p[i]);
  return acc;
}

/// Number of real roots of a squarefree rational polynomial (Sturm).
inline int count_real_roots(const Poly<Rational>& p) {
  if (p.degree() <= 0) return 0;
  std::vector<Poly<Rational>> chain{p, p.derivative()};
  while (!chain.back().is_zero()) {
    Poly<Rational> r = chain[chain.size() - 2] % chain.back();
    if (r.is_zero()) break;
    chain.push_back(-r);
  }
  auto variations = [&](bool at_plus_inf) {
    int changes = 0, last = 0;
    for (auto& q : chain) {
      int s = sgn(q.leading());
      if (!at_plus_inf && q.degree() % 2 == 1) s = -s;
      if (s == 0) continue;
      if (last != 0 && s != last) ++changes;
      last = s;
    }
    return changes;
  };
  return variations(false) - variations(true);
}

}  // namespace sunits
