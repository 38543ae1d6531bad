#pragma once

// Exact arithmetic in a monogenic number field K = Q[x]/(f).
//
// Elements are kept in the power basis 1, t, ..., t^(n-1) with rational
// coordinates. Finite places come from factoring f mod p (Kummer-Dedekind);
// valuations are computed with an anti-uniformizer, so no ideal arithmetic
// is needed. All integrality tests assume O_K = Z[t] locally at the prime in
// question; that is checked with Dedekind's criterion unless the caller
// asserts monogenicity up front.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "sunits/error.hpp"
#include "sunits/integer.hpp"
#include "sunits/modp.hpp"
#include "sunits/poly.hpp"

namespace sunits {

class FieldElement;
struct PrimePlace;

class NumberField {
 public:
  NumberField() = default;

  /// f given constant term first; must be monic, squarefree, degree >= 1.
  static NumberField create(const std::vector<Integer>& coeffs, bool assert_monogenic = false);
  static NumberField rationals() { return create({Integer(0), Integer(1)}); }

  int degree() const { return impl().n; }
  int r1() const { return impl().r1; }
  int r2() const { return impl().r2; }
  bool is_rationals() const { return impl().n == 1; }
  const Integer& discriminant() const { return impl().disc; }
  bool monogenic_asserted() const { return impl().assert_monogenic; }
  bool irreducibility_certified() const { return impl().irreducible_certified; }
  const std::vector<std::string>& warnings() const { return impl().warnings; }
  const std::vector<Integer>& defining_coeffs() const { return impl().f; }
  const Poly<Rational>& defining_poly() const { return impl().fq; }
  bool valid() const { return impl_ != nullptr; }

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement from_rational(const Rational& q) const;
  FieldElement from_int(long k) const;
  /// The generator t, a root of f.
  FieldElement theta() const;
  FieldElement element(std::vector<Rational> coords) const;

  /// Places above p in deterministic order: factor degree, then factor
  /// coefficients from the constant term up.
  const std::vector<PrimePlace>& primes_above(const Integer& p) const;

  /// True if Z[t] is p-maximal (Dedekind's criterion), independent of any
  /// monogenicity assertion.
  bool dedekind_p_maximal(const Integer& p) const;

  friend bool operator==(const NumberField& a, const NumberField& b) {
    return a.impl_ == b.impl_ || (a.impl_ && b.impl_ && a.impl_->f == b.impl_->f);
  }
  friend bool operator!=(const NumberField& a, const NumberField& b) { return !(a == b); }

 private:
  struct Impl {
    std::vector<Integer> f;
    Poly<Rational> fq;
    int n = 0;
    int r1 = 0, r2 = 0;
    Integer disc;
    bool assert_monogenic = false;
    bool irreducible_certified = false;
    std::vector<std::string> warnings;
    mutable std::mutex cache_mutex;
    mutable std::map<Integer, std::unique_ptr<std::vector<PrimePlace>>> place_cache;
  };

  const Impl& impl() const {
    require(impl_ != nullptr, ErrorKind::InvalidArgument, "use of an empty NumberField handle");
    return *impl_;
  }

  std::shared_ptr<const Impl> impl_;
};

class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(NumberField field, std::vector<Rational> coords);

  const NumberField& field() const { return field_; }
  const std::vector<Rational>& coords() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()); }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return sgn(q) == 0; });
  }
  bool is_rational() const {
    return std::all_of(c_.begin() + 1, c_.end(), [](const Rational& q) { return sgn(q) == 0; });
  }
  const Rational& rational_value() const {
    require(is_rational(), ErrorKind::InvalidArgument, "element is not rational");
    return c_[0];
  }

  FieldElement inverse() const;
  FieldElement pow(long e) const;
  Rational norm() const;

  /// Least common denominator of the coordinates.
  Integer denominator() const {
    Integer d = 1;
    for (auto& q : c_) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), q.get_den_mpz_t());
    return d;
  }

  /// Naive height max(D, |D*c_i|), D the common denominator; 1 for zero.
  Integer height() const {
    Integer d = denominator(), h = d;
    for (auto& q : c_) {
      Integer a = abs(q.get_num() * (d / q.get_den()));
      if (a > h) h = a;
    }
    return h;
  }

  /// Coordinates of D*a as integers.
  std::vector<Integer> scaled_coords(const Integer& d) const {
    std::vector<Integer> out;
    out.reserve(c_.size());
    for (auto& q : c_) out.push_back(q.get_num() * (d / q.get_den()));
    return out;
  }

  /// "3/2" for rationals, otherwise "a + b*t + c*t^2".
  std::string to_string() const;
  std::vector<std::string> to_strings() const {
    std::vector<std::string> out;
    for (auto& q : c_) out.push_back(sunits::to_string(q));
    return out;
  }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }
  friend bool operator==(const FieldElement& a, const FieldElement& b) { return a.c_ == b.c_; }
  friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

 private:
  NumberField field_;
  std::vector<Rational> c_;
};

inline bool is_zero(const FieldElement& x) { return x.is_zero(); }
inline FieldElement zero_like(const FieldElement& x) { return x.field().zero(); }
inline FieldElement one_like(const FieldElement& x) { return x.field().one(); }
inline FieldElement from_int_like(const FieldElement& x, long k) { return x.field().from_int(k); }
inline FieldElement inverse(const FieldElement& x) { return x.inverse(); }

/// Deterministic total order: height, then denominator, then coordinates.
inline bool canonical_less(const FieldElement& a, const FieldElement& b) {
  Integer ha = a.height(), hb = b.height();
  if (ha != hb) return ha < hb;
  Integer da = a.denominator(), db = b.denominator();
  if (da != db) return da < db;
  return a.coords() < b.coords();
}

struct CanonicalLess {
  bool operator()(const FieldElement& a, const FieldElement& b) const { return canonical_less(a, b); }
};

/// A finite place P = (p, g(t)) of K.
struct PrimePlace {
  Integer p;
  std::vector<std::uint64_t> generator;  // monic irreducible factor of f mod p
  int e = 1;                              // ramification index
  int f = 1;                              // residue degree
  int index = 0;                          // position within primes_above(p)
  FieldElement anti_uniformizer;          // h(t) with h = lift(f / g mod p); h/p lies in P^-1 \ O_K

  std::string label() const {
    std::string g;
    for (std::size_t i = generator.size(); i-- > 0;) {
      if (generator[i] == 0) continue;
      if (!g.empty()) g += "+";
      if (i == 0 || generator[i] != 1) g += std::to_string(generator[i]);
      if (i >= 1) g += "x";
      if (i >= 2) g += "^" + std::to_string(i);
    }
    return "(" + p.get_str() + ", " + g + ")";
  }

  friend bool operator==(const PrimePlace& a, const PrimePlace& b) {
    return a.p == b.p && a.generator == b.generator;
  }
  friend bool operator!=(const PrimePlace& a, const PrimePlace& b) { return !(a == b); }
  friend bool operator<(const PrimePlace& a, const PrimePlace& b) {
    if (a.p != b.p) return a.p < b.p;
    return a.index < b.index;
  }
};

// ---------------------------------------------------------------------------

namespace detail {

using IntPoly = std::vector<Integer>;

inline IntPoly int_mul(const IntPoly& a, const IntPoly& b) {
  if (a.empty() || b.empty()) return {};
  IntPoly r(a.size() + b.size() - 1, Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

inline IntPoly lift(const modp::FpPoly& a) {
  IntPoly r;
  for (auto c : a) r.push_back(Integer(std::to_string(c)));
  return r;
}

inline Poly<Rational> to_rational_poly(const std::vector<Integer>& c) {
  std::vector<Rational> v;
  for (auto& x : c) v.emplace_back(x);
  return Poly<Rational>(std::move(v));
}

inline std::uint64_t to_u64(const Integer& p) {
  require(p > 0 && mpz_sizeinbase(p.get_mpz_t(), 2) <= 64, ErrorKind::Unsupported,
          "prime " + p.get_str() + " exceeds 64 bits");
  return std::stoull(p.get_str());
}

// All subset sums of the given degrees.
inline std::set<int> subset_sums(const std::vector<int>& degs) {
  std::set<int> sums{0};
  for (int d : degs) {
    std::set<int> next = sums;
    for (int s : sums) next.insert(s + d);
    sums = std::move(next);
  }
  return sums;
}

}  // namespace detail

inline NumberField NumberField::create(const std::vector<Integer>& coeffs, bool assert_monogenic) {
  std::vector<Integer> f = coeffs;
  while (!f.empty() && f.back() == 0) f.pop_back();
  require(f.size() >= 2, ErrorKind::InvalidArgument, "defining polynomial must have degree >= 1");
  require(f.back() == 1, ErrorKind::NotMonic, "defining polynomial must be monic");

  auto impl = std::make_shared<Impl>();
  impl->f = f;
  impl->fq = detail::to_rational_poly(f);
  impl->n = static_cast<int>(f.size()) - 1;
  impl->assert_monogenic = assert_monogenic;
  const int n = impl->n;

  require(gcd(impl->fq, impl->fq.derivative()).degree() == 0, ErrorKind::NotSquarefree,
          "defining polynomial is not squarefree");

  if (n == 1) {
    impl->disc = 1;
  } else {
    Rational res = resultant(impl->fq, impl->fq.derivative(), Rational(1));
    Integer d = res.get_num();
    if ((n * (n - 1) / 2) % 2 == 1) d = -d;
    impl->disc = d;
  }
  impl->r1 = count_real_roots(impl->fq);
  impl->r2 = (n - impl->r1) / 2;

  // irreducibility: rational-root sweep, then degree patterns mod small primes
  if (n == 1) {
    impl->irreducible_certified = true;
  } else {
    require(f[0] != 0, ErrorKind::DetectedReducible, "x divides the defining polynomial");
    for (auto& dv : divisors(f[0])) {
      for (int sgn_ : {1, -1}) {
        Rational r(dv * sgn_);
        require(impl->fq(r) != 0, ErrorKind::DetectedReducible, "rational root " + to_string(r));
      }
    }
    if (n <= 3) {
      impl->irreducible_certified = true;
    } else {
      std::set<int> possible;
      for (int k = 1; k < n; ++k) possible.insert(k);
      int used = 0;
      for (std::uint32_t p : primes_up_to(600)) {
        if (possible.empty() || used >= 40) break;
        if (impl->disc % p == 0) continue;
        ++used;
        std::vector<int> degs;
        for (auto& fac : modp::factor(modp::reduce(f, p), p))
          for (int m = 0; m < fac.multiplicity; ++m) degs.push_back(modp::deg(fac.poly));
        std::set<int> sums = detail::subset_sums(degs), kept;
        for (int k : possible)
          if (sums.count(k)) kept.insert(k);
        possible = std::move(kept);
      }
      impl->irreducible_certified = possible.empty();
      if (!impl->irreducible_certified)
        impl->warnings.push_back("irreducibility of the defining polynomial is not certified");
    }
  }
  NumberField K;
  K.impl_ = std::move(impl);
  return K;
}

inline FieldElement NumberField::zero() const {
  return FieldElement(*this, std::vector<Rational>(static_cast<std::size_t>(degree()), Rational(0)));
}
inline FieldElement NumberField::one() const { return from_rational(Rational(1)); }
inline FieldElement NumberField::from_int(long k) const { return from_rational(Rational(k)); }
inline FieldElement NumberField::from_rational(const Rational& q) const {
  std::vector<Rational> c(static_cast<std::size_t>(degree()), Rational(0));
  c[0] = q;
  return FieldElement(*this, std::move(c));
}
inline FieldElement NumberField::theta() const {
  if (degree() == 1) return from_rational(Rational(-impl().f[0]));
  std::vector<Rational> c(static_cast<std::size_t>(degree()), Rational(0));
  c[1] = 1;
  return FieldElement(*this, std::move(c));
}
inline FieldElement NumberField::element(std::vector<Rational> coords) const { return FieldElement(*this, std::move(coords)); }

inline bool NumberField::dedekind_p_maximal(const Integer& p_int) const {
  const auto& f = impl().f;
  if (impl().disc % p_int != 0) return true;
  const std::uint64_t p = detail::to_u64(p_int);
  auto facs = modp::factor(modp::reduce(f, p), p);
  modp::FpPoly g{1}, h{1};
  for (auto& fac : facs) {
    g = modp::mul(g, fac.poly, p);
    for (int k = 1; k < fac.multiplicity; ++k) h = modp::mul(h, fac.poly, p);
  }
  detail::IntPoly gh = detail::int_mul(detail::lift(g), detail::lift(h));
  gh.resize(std::max(gh.size(), f.size()), Integer(0));
  std::vector<Integer> F;
  for (std::size_t i = 0; i < gh.size(); ++i) {
    Integer diff = gh[i] - (i < f.size() ? f[i] : Integer(0));
    require(diff % p_int == 0, ErrorKind::AssertionFailed, "Dedekind lift is not congruent to f");
    F.push_back(diff / p_int);
  }
  modp::FpPoly Fbar = modp::reduce(F, p);
  modp::FpPoly common = modp::gcd(modp::gcd(g, h, p), Fbar, p);
  return modp::deg(common) <= 0;
}

inline const std::vector<PrimePlace>& NumberField::primes_above(const Integer& p_int) const {
  const Impl& im = impl();
  {
    std::lock_guard<std::mutex> lock(im.cache_mutex);
    auto it = im.place_cache.find(p_int);
    if (it != im.place_cache.end()) return *it->second;
  }
  require(is_prime(p_int), ErrorKind::InvalidArgument, p_int.get_str() + " is not prime");
  if (!im.assert_monogenic && !dedekind_p_maximal(p_int))
    fail(ErrorKind::IndexDivisor, p_int.get_str() + " divides the index of Z[t]; assert monogenicity to override");
  const std::uint64_t p = detail::to_u64(p_int);
  modp::FpPoly fbar = modp::reduce(im.f, p);
  auto out = std::make_unique<std::vector<PrimePlace>>();
  int idx = 0, total = 0;
  for (auto& fac : modp::factor(fbar, p)) {
    PrimePlace P;
    P.p = p_int;
    P.generator = fac.poly;
    P.e = fac.multiplicity;
    P.f = modp::deg(fac.poly);
    P.index = idx++;
    auto [h, r] = modp::divmod(fbar, fac.poly, p);
    std::vector<Rational> hc;
    for (auto c : h) hc.emplace_back(Integer(std::to_string(c)));
    hc.resize(static_cast<std::size_t>(im.n), Rational(0));
    P.anti_uniformizer = FieldElement(*this, std::move(hc));
    total += P.e * P.f;
    out->push_back(std::move(P));
  }
  require(total == im.n, ErrorKind::AssertionFailed, "sum of e*f differs from the degree");
  std::lock_guard<std::mutex> lock(im.cache_mutex);
  auto [it, inserted] = im.place_cache.emplace(p_int, std::move(out));
  return *it->second;
}

// ---------------------------------------------------------------------------

inline FieldElement::FieldElement(NumberField field, std::vector<Rational> coords) : field_(std::move(field)) {
  const auto n = static_cast<std::size_t>(field_.degree());
  if (coords.size() > n) {
    coords = (Poly<Rational>(std::move(coords)) % field_.defining_poly()).coeffs();
  }
  coords.resize(n, Rational(0));
  c_ = std::move(coords);
}

inline FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  std::vector<Rational> c(a.c_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.c_[i] + b.c_[i];
  FieldElement r;
  r.field_ = a.field_;
  r.c_ = std::move(c);
  return r;
}

inline FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  std::vector<Rational> c(a.c_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.c_[i] - b.c_[i];
  FieldElement r;
  r.field_ = a.field_;
  r.c_ = std::move(c);
  return r;
}

inline FieldElement operator-(const FieldElement& a) {
  FieldElement r = a;
  for (auto& q : r.c_) q = -q;
  return r;
}

inline FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  const std::size_t n = a.c_.size();
  FieldElement r;
  r.field_ = a.field_;
  if (n == 1) {
    r.c_ = {a.c_[0] * b.c_[0]};
    return r;
  }
  std::vector<Rational> prod(2 * n - 1, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    if (sgn(a.c_[i]) == 0) continue;
    for (std::size_t j = 0; j < n; ++j) prod[i + j] += a.c_[i] * b.c_[j];
  }
  const auto& f = a.field_.defining_coeffs();
  for (std::size_t k = 2 * n - 1; k-- > n;) {
    if (sgn(prod[k]) == 0) continue;
    const Rational t = prod[k];
    for (std::size_t i = 0; i < n; ++i)
      if (f[i] != 0) prod[k - n + i] -= t * f[i];
    prod[k] = 0;
  }
  prod.resize(n);
  r.c_ = std::move(prod);
  return r;
}

inline FieldElement FieldElement::inverse() const {
  require(!is_zero(), ErrorKind::DivisionByZero, "inverse of zero");
  if (c_.size() == 1) return field_.from_rational(1 / c_[0]);
  auto [g, s, t] = xgcd(Poly<Rational>(c_), field_.defining_poly());
  require(g.degree() == 0, ErrorKind::AssertionFailed, "element shares a factor with the defining polynomial");
  return FieldElement(field_, s.coeffs());
}

inline FieldElement FieldElement::pow(long e) const {
  FieldElement base = e < 0 ? inverse() : *this;
  unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  FieldElement r = field_.one();
  while (k) {
    if (k & 1) r = r * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return r;
}

/// N_{K/Q}(a) = Res(f, A) where A is the coordinate polynomial of a.
inline Rational FieldElement::norm() const {
  if (c_.size() == 1) return c_[0];
  Poly<Rational> A(c_);
  if (A.is_zero()) return Rational(0);
  return resultant(field_.defining_poly(), A, Rational(1));
}

inline std::string FieldElement::to_string() const {
  if (is_rational()) return sunits::to_string(c_[0]);
  std::string s;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (sgn(c_[i]) == 0) continue;
    std::string term = sunits::to_string(c_[i]);
    if (i >= 1) term = (term == "1" ? "" : term == "-1" ? "-" : term + "*") + "t" + (i >= 2 ? "^" + std::to_string(i) : "");
    if (!s.empty()) s += term[0] == '-' ? " - " + term.substr(1) : " + " + term;
    else s = term;
  }
  return s;
}

// ---------------------------------------------------------------------------

/// Exact P-adic valuation, normalized so a uniformizer has valuation 1.
inline long valuation(const FieldElement& a, const PrimePlace& P) {
  require(!a.is_zero(), ErrorKind::ZeroElement, "valuation of zero");
  if (a.degree() == 1) return valuation(a.coords()[0], P.p);
  const Integer D = a.denominator();
  Integer d_copy = D;
  long v = -static_cast<long>(remove_factor(d_copy, P.p)) * P.e;
  std::vector<Integer> alpha = a.scaled_coords(D);
  Integer content = 0;
  for (auto& x : alpha) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), x.get_mpz_t());
  const long k = static_cast<long>(remove_factor(content, P.p));
  if (k > 0) {
    Integer pk = ipow(P.p, static_cast<unsigned long>(k));
    for (auto& x : alpha) x /= pk;
  }
  v += k * P.e;
  std::vector<Rational> cur(alpha.begin(), alpha.end());
  FieldElement x(a.field(), std::move(cur));
  for (;;) {
    FieldElement y = x * P.anti_uniformizer;
    bool divisible = true;
    for (auto& q : y.coords()) {
      if (q.get_den() != 1 || !mpz_divisible_p(q.get_num_mpz_t(), P.p.get_mpz_t())) {
        divisible = false;
        break;
      }
    }
    if (!divisible) break;
    std::vector<Rational> next;
    for (auto& q : y.coords()) next.emplace_back(q.get_num() / P.p);
    x = FieldElement(a.field(), std::move(next));
    ++v;
  }
  return v;
}

/// Rational primes below a possible nonzero valuation of a: primes of the
/// coordinate denominator and of N(D*a).
inline std::vector<Integer> candidate_primes(const FieldElement& a) {
  require(!a.is_zero(), ErrorKind::ZeroElement, "support of zero");
  const Integer D = a.denominator();
  std::set<Integer> ps;
  if (a.degree() == 1) {
    for (auto& p : prime_divisors(a.coords()[0].get_num())) ps.insert(p);
    for (auto& p : prime_divisors(D)) ps.insert(p);
    return {ps.begin(), ps.end()};
  }
  FieldElement alpha = a * a.field().from_rational(Rational(D));
  Rational n = alpha.norm();
  for (auto& p : prime_divisors(n.get_num())) ps.insert(p);
  for (auto& p : prime_divisors(D)) ps.insert(p);
  return {ps.begin(), ps.end()};
}

/// All finite places with nonzero valuation, in (p, index) order.
inline std::vector<PrimePlace> support(const FieldElement& a) {
  std::vector<PrimePlace> out;
  for (auto& p : candidate_primes(a))
    for (auto& P : a.field().primes_above(p))
      if (valuation(a, P) != 0) out.push_back(P);
  return out;
}

inline Integer height(const FieldElement& a) { return a.height(); }

}  // namespace sunits
