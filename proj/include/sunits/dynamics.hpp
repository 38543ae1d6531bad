#pragma once

// Rational maps on P^1(K): evaluation, composition, orbits, and the divisor
// statistics over the algebraic closure that the shape hypotheses need.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sunits/number_field.hpp"
#include "sunits/poly.hpp"

namespace sunits {

using KPoly = Poly<FieldElement>;

inline KPoly kpoly(const NumberField& K, const std::vector<Rational>& coeffs) {
  std::vector<FieldElement> v;
  for (auto& q : coeffs) v.push_back(K.from_rational(q));
  return KPoly(std::move(v));
}

inline KPoly kpoly_z(const NumberField& K) { return KPoly(std::vector<FieldElement>{K.zero(), K.one()}); }

inline std::string poly_to_string(const KPoly& p) {
  if (p.is_zero()) return "0";
  std::string s;
  for (std::size_t i = p.size(); i-- > 0;) {
    if (p[i].is_zero()) continue;
    std::string c = p[i].to_string();
    bool compound = !p[i].is_rational() && i > 0;
    if (compound) c = "(" + c + ")";
    std::string mono = i == 0 ? "" : i == 1 ? "z" : "z^" + std::to_string(i);
    std::string term;
    if (i == 0) term = c;
    else if (c == "1") term = mono;
    else if (c == "-1") term = "-" + mono;
    else term = c + "*" + mono;
    if (s.empty()) s = term;
    else if (term[0] == '-') s += " - " + term.substr(1);
    else s += " + " + term;
  }
  return s;
}

/// Largest decimal digit count among all coordinates of all coefficients.
inline std::size_t coefficient_digits(const KPoly& p) {
  std::size_t m = 0;
  for (auto& c : p.coeffs())
    for (auto& q : c.coords()) m = std::max(m, digits(q));
  return m;
}

// ---------------------------------------------------------------------------

/// A point of P^1(K) in canonical form (x : 1) or (1 : 0).
class ProjPoint {
 public:
  ProjPoint() = default;
  static ProjPoint finite(FieldElement x) {
    ProjPoint P;
    P.y_ = x.field().one();
    P.x_ = std::move(x);
    return P;
  }
  static ProjPoint infinity(const NumberField& K) {
    ProjPoint P;
    P.x_ = K.one();
    P.y_ = K.zero();
    P.inf_ = true;
    return P;
  }
  /// Normalizes (x : y), not both zero.
  static ProjPoint from_pair(const FieldElement& x, const FieldElement& y) {
    require(!(x.is_zero() && y.is_zero()), ErrorKind::InvalidArgument, "(0 : 0) is not a point");
    if (y.is_zero()) return infinity(x.field());
    return finite(x / y);
  }

  bool is_infinity() const { return inf_; }
  const FieldElement& x() const { return x_; }
  const FieldElement& y() const { return y_; }
  const FieldElement& value() const {
    require(!inf_, ErrorKind::InvalidArgument, "value of the point at infinity");
    return x_;
  }
  /// Height of the affine value; 1 for infinity.
  Integer height() const { return inf_ ? Integer(1) : x_.height(); }
  std::string to_string() const { return inf_ ? "inf" : x_.to_string(); }

  friend bool operator==(const ProjPoint& a, const ProjPoint& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.x_ == b.x_);
  }
  friend bool operator!=(const ProjPoint& a, const ProjPoint& b) { return !(a == b); }

 private:
  FieldElement x_, y_;
  bool inf_ = false;
};

// ---------------------------------------------------------------------------

class RationalMap {
 public:
  RationalMap() = default;

  /// Reduces num/den to lowest terms with den monic.
  static RationalMap create(const KPoly& num, const KPoly& den) {
    require(!den.is_zero(), ErrorKind::ZeroDenominator, "denominator is zero");
    RationalMap r;
    r.K_ = den.leading().field();
    if (num.is_zero()) {
      r.num_ = {};
      r.den_ = KPoly::constant(r.K_.one());
      return r;
    }
    KPoly g = gcd(num, den);
    KPoly n = g.degree() > 0 ? exact_div(num, g) : num;
    KPoly d = g.degree() > 0 ? exact_div(den, g) : den;
    FieldElement li = d.leading().inverse();
    r.num_ = n.scaled(li);
    r.den_ = d.scaled(li);
    return r;
  }

  /// For num, den already known to be coprime: only makes den monic.
  static RationalMap from_coprime(const KPoly& num, const KPoly& den) {
    require(!den.is_zero(), ErrorKind::ZeroDenominator, "denominator is zero");
    RationalMap r;
    r.K_ = den.leading().field();
    FieldElement li = den.leading().inverse();
    r.num_ = num.scaled(li);
    r.den_ = den.scaled(li);
    return r;
  }

  static RationalMap polynomial(const KPoly& num) {
    require(!num.is_zero(), ErrorKind::InvalidArgument, "the zero polynomial has no field; use create");
    return create(num, KPoly::constant(num.leading().field().one()));
  }

  static RationalMap from_rationals(const NumberField& K, const std::vector<Rational>& num,
                                    const std::vector<Rational>& den = {Rational(1)}) {
    return create(kpoly(K, num), kpoly(K, den));
  }

  const NumberField& field() const { return K_; }
  const KPoly& num() const { return num_; }
  const KPoly& den() const { return den_; }
  int num_degree() const { return num_.degree(); }
  int den_degree() const { return den_.degree(); }
  int degree() const { return std::max(std::max(num_.degree(), 0), den_.degree()); }
  bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }
  bool is_polynomial() const { return den_.degree() == 0; }

  /// phi(x) for finite x, nullopt at a pole.
  std::optional<FieldElement> operator()(const FieldElement& x) const {
    FieldElement d = den_(x);
    if (d.is_zero()) return std::nullopt;
    return num_(x) / d;
  }

  std::string to_string() const {
    if (is_polynomial()) return poly_to_string(num_);
    return "(" + poly_to_string(num_) + ") / (" + poly_to_string(den_) + ")";
  }

  friend bool operator==(const RationalMap& a, const RationalMap& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const RationalMap& a, const RationalMap& b) { return !(a == b); }

 private:
  NumberField K_;
  KPoly num_, den_;
};

inline void require_nonconstant(const RationalMap& phi) {
  require(!phi.is_constant(), ErrorKind::ConstantMap, "constant map " + phi.to_string());
}

/// Homogeneous evaluation on P^1(K).
inline ProjPoint evaluate(const RationalMap& phi, const ProjPoint& P) {
  require_nonconstant(phi);
  const NumberField& K = phi.field();
  if (P.is_infinity()) {
    const int a = phi.num_degree(), b = phi.den_degree();
    if (a > b) return ProjPoint::infinity(K);
    if (a < b) return ProjPoint::finite(K.zero());
    return ProjPoint::finite(phi.num().leading() / phi.den().leading());
  }
  FieldElement n = phi.num().is_zero() ? K.zero() : phi.num()(P.value());
  FieldElement d = phi.den()(P.value());
  return ProjPoint::from_pair(n, d);
}

inline constexpr std::size_t kDefaultDigitGuard = 1000000;

/// phi o chi. Homogeneous substitution of coprime forms into coprime forms
/// stays coprime, so no gcd is taken.
inline RationalMap compose(const RationalMap& phi, const RationalMap& chi, std::size_t digit_guard = kDefaultDigitGuard) {
  const NumberField& K = phi.field();
  const int d = phi.degree();
  const KPoly& C = chi.num();
  const KPoly& E = chi.den();
  // A_h(C, E) = sum A_i C^i E^(d - i)
  auto homog = [&](const KPoly& A) {
    KPoly acc;
    std::vector<KPoly> cp{KPoly::constant(K.one())}, ep{KPoly::constant(K.one())};
    for (int i = 1; i <= d; ++i) {
      cp.push_back(cp.back() * C);
      ep.push_back(ep.back() * E);
    }
    for (int i = 0; i <= A.degree(); ++i) {
      if (A[static_cast<std::size_t>(i)].is_zero()) continue;
      acc = acc + (cp[static_cast<std::size_t>(i)] * ep[static_cast<std::size_t>(d - i)]).scaled(A[static_cast<std::size_t>(i)]);
    }
    return acc;
  };
  KPoly num = homog(phi.num()), den = homog(phi.den());
  if (coefficient_digits(num) > digit_guard || coefficient_digits(den) > digit_guard)
    fail(ErrorKind::CoefficientBlowup, "composition exceeds " + std::to_string(digit_guard) + " digits per coefficient");
  RationalMap out = RationalMap::from_coprime(num, den);
  require(chi.is_constant() || out.degree() == d * chi.degree(), ErrorKind::AssertionFailed, "composition lost degree");
  return out;
}

inline RationalMap iterate(const RationalMap& phi, int n, std::size_t digit_guard = kDefaultDigitGuard) {
  require(n >= 1, ErrorKind::InvalidArgument, "iterate needs n >= 1");
  RationalMap r = phi;
  for (int i = 1; i < n; ++i) r = compose(phi, r, digit_guard);
  return r;
}

// ---------------------------------------------------------------------------

enum class Truncation { ReachedN, HeightCap, EnteredCycle };

inline std::string to_string(Truncation t) {
  switch (t) {
    case Truncation::ReachedN: return "reached_N";
    case Truncation::HeightCap: return "height_cap";
    case Truncation::EnteredCycle: return "entered_cycle";
  }
  return "?";
}

struct OrbitRecord {
  std::vector<ProjPoint> points;           // phi(alpha), phi^2(alpha), ... without the repeat
  std::optional<std::size_t> cycle_entry;  // first occurrence of the repeated point
  Truncation reason = Truncation::ReachedN;

  std::size_t period() const { return cycle_entry ? points.size() - *cycle_entry : 0; }
};

inline Integer default_height_cap() { return ipow(Integer(10), 80); }

/// Pointwise forward orbit of alpha; never composes iterates. No cap when
/// hcap is empty.
inline OrbitRecord orbit(const RationalMap& phi, const ProjPoint& alpha, int N,
                         const std::optional<Integer>& hcap = default_height_cap()) {
  require(N >= 1, ErrorKind::InvalidArgument, "orbit length must be >= 1");
  require_nonconstant(phi);
  OrbitRecord rec;
  ProjPoint cur = alpha;
  for (int k = 0; k < N; ++k) {
    cur = evaluate(phi, cur);
    for (std::size_t j = 0; j < rec.points.size(); ++j) {
      if (rec.points[j] == cur) {
        rec.cycle_entry = j;
        rec.reason = Truncation::EnteredCycle;
        return rec;
      }
    }
    rec.points.push_back(cur);
    if (hcap && cur.height() > *hcap) {
      rec.reason = Truncation::HeightCap;
      return rec;
    }
  }
  rec.reason = Truncation::ReachedN;
  return rec;
}

// ---------------------------------------------------------------------------
// divisor statistics over the algebraic closure

/// Number of distinct zeros and poles of phi on P^1(Kbar).
inline int zero_pole_count(const RationalMap& phi) {
  require_nonconstant(phi);
  int m = std::max(squarefree_part(phi.num()).degree(), 0) + std::max(squarefree_part(phi.den()).degree(), 0);
  if (phi.num_degree() != phi.den_degree()) ++m;
  return m;
}

/// Largest zero/pole multiplicity, including the one at infinity.
inline int max_multiplicity(const RationalMap& phi) {
  require_nonconstant(phi);
  int best = std::abs(phi.num_degree() - phi.den_degree());
  for (const KPoly* p : {&phi.num(), &phi.den()})
    for (auto& [f, m] : squarefree_decomposition(*p)) best = std::max(best, m);
  return best;
}

/// True iff phi is a k-th power in Kbar(z).
inline bool is_kth_power(const RationalMap& phi, int k) {
  require(k >= 2, ErrorKind::InvalidArgument, "k must be >= 2");
  require_nonconstant(phi);
  if (std::abs(phi.num_degree() - phi.den_degree()) % k != 0) return false;
  for (const KPoly* p : {&phi.num(), &phi.den()})
    for (auto& [f, m] : squarefree_decomposition(*p))
      if (m % k != 0) return false;
  return true;
}

struct MonomialShape {
  FieldElement beta;
  int sign;  // +1 for beta z^d, -1 for beta z^-d
};

/// Detects beta z^d and beta z^-d (d >= 1).
inline std::optional<MonomialShape> is_beta_z_pm_d(const RationalMap& phi) {
  if (phi.is_constant()) return std::nullopt;
  auto is_monomial = [](const KPoly& p) {
    for (int i = 0; i < p.degree(); ++i)
      if (!p[static_cast<std::size_t>(i)].is_zero()) return false;
    return true;
  };
  if (phi.den_degree() == 0 && phi.num_degree() >= 1 && is_monomial(phi.num()))
    return MonomialShape{phi.num().leading(), +1};
  if (phi.num_degree() == 0 && phi.den_degree() >= 1 && is_monomial(phi.den()))
    return MonomialShape{phi.num().leading(), -1};
  return std::nullopt;
}

enum class PolesVerdict { Excluded, Holds };

struct LemmaPolesReport {
  int d = 0;
  int m1 = 0;  // zeros and poles of phi
  int m2 = 0;  // zeros and poles of phi o phi
  PolesVerdict verdict = PolesVerdict::Excluded;
};

/// |phi^-2({0, inf})| >= 3 for maps outside the beta z^{+-d} shape, and
/// >= d + 1 when phi itself has only two zeros and poles.
inline LemmaPolesReport check_lemma_poles(const RationalMap& phi) {
  require(phi.degree() >= 2, ErrorKind::InvalidArgument, "poles check needs degree >= 2");
  LemmaPolesReport rep;
  rep.d = phi.degree();
  rep.m1 = zero_pole_count(phi);
  rep.m2 = zero_pole_count(iterate(phi, 2));
  if (is_beta_z_pm_d(phi)) {
    rep.verdict = PolesVerdict::Excluded;
    return rep;
  }
  if (rep.m2 < 3)
    fail(ErrorKind::AssertionFailed, "phi^2 has fewer than 3 zeros and poles: " + phi.to_string());
  if (rep.m1 == 2 && rep.m2 < rep.d + 1)
    fail(ErrorKind::AssertionFailed, "phi^2 has fewer than d + 1 zeros and poles: " + phi.to_string());
  rep.verdict = PolesVerdict::Holds;
  return rep;
}

/// phi + 1/phi.
inline RationalMap phi_plus_inverse(const RationalMap& phi) {
  require_nonconstant(phi);
  const KPoly& n = phi.num();
  const KPoly& d = phi.den();
  return RationalMap::create(n * n + d * d, n * d);
}

struct GammaMuD {
  FieldElement gamma;
  RationalMap mu;  // degree one
  int exponent;    // +-d
};

/// phi = gamma * mu^exponent when phi has exactly two zeros/poles. In
/// characteristic zero those are automatically K-rational, so the only
/// failure is a map of some other shape.
inline GammaMuD decompose_gamma_mu_d(const RationalMap& phi) {
  require_nonconstant(phi);
  if (zero_pole_count(phi) != 2) fail(ErrorKind::NotTotallyRamifiedShape, phi.to_string() + " has m != 2");
  const NumberField& K = phi.field();
  const KPoly one = KPoly::constant(K.one());
  auto root_of = [&](const KPoly& p) {
    KPoly s = squarefree_part(p);
    return -(s[0] / s[1]);
  };
  const FieldElement c = phi.num().leading();
  const int a = phi.num_degree(), b = phi.den_degree();
  GammaMuD out;
  out.gamma = c;
  if (b == 0) {
    out.mu = RationalMap::polynomial(KPoly::linear_root(root_of(phi.num())));
    out.exponent = a;
  } else if (a == 0) {
    out.mu = RationalMap::polynomial(KPoly::linear_root(root_of(phi.den())));
    out.exponent = -b;
  } else {
    out.mu = RationalMap::create(KPoly::linear_root(root_of(phi.num())), KPoly::linear_root(root_of(phi.den())));
    out.exponent = a;
  }
  // recomposition
  KPoly mn = out.mu.num(), md = out.mu.den();
  const unsigned e = static_cast<unsigned>(std::abs(out.exponent));
  RationalMap back = out.exponent > 0 ? RationalMap::create(pow(mn, e).scaled(c), pow(md, e))
                                      : RationalMap::create(pow(md, e).scaled(c), pow(mn, e));
  require(back == phi, ErrorKind::AssertionFailed, "gamma mu^d does not recompose to phi");
  return out;
}

/// Inverse of a degree-one map (a z + b) / (c z + e).
inline RationalMap mobius_inverse(const RationalMap& mu) {
  require(mu.degree() == 1, ErrorKind::InvalidArgument, "not a degree-one map");
  const NumberField& K = mu.field();
  auto co = [&](const KPoly& p, std::size_t i) { return p.coeff(i, K.zero()); };
  FieldElement a = co(mu.num(), 1), b = co(mu.num(), 0), c = co(mu.den(), 1), e = co(mu.den(), 0);
  return RationalMap::create(KPoly(std::vector<FieldElement>{-b, e}), KPoly(std::vector<FieldElement>{a, -c}));
}

}  // namespace sunits
