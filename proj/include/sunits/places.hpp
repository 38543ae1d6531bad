#pragma once

// Place sets S, the S-integer and S-unit predicates, coset representatives of
// O_S^* / (O_S^*)^p and p-th root extraction in K.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sunits/box.hpp"
#include "sunits/number_field.hpp"

namespace sunits {

/// S = archimedean places plus a list of finite places.
class PlaceSet {
 public:
  PlaceSet() = default;
  PlaceSet(NumberField K, std::vector<PrimePlace> finite) : K_(std::move(K)), finite_(std::move(finite)) {
    std::sort(finite_.begin(), finite_.end());
    for (std::size_t i = 1; i < finite_.size(); ++i)
      require(finite_[i] != finite_[i - 1], ErrorKind::InvalidArgument, "duplicate place " + finite_[i].label());
    for (auto& P : finite_) {
      if (std::find(primes_.begin(), primes_.end(), P.p) == primes_.end()) primes_.push_back(P.p);
    }
  }

  static PlaceSet archimedean(const NumberField& K) { return PlaceSet(K, {}); }

  /// Places selected by (rational prime, factor index) pairs.
  static PlaceSet from_indices(const NumberField& K, const std::vector<std::pair<Integer, int>>& picks) {
    std::vector<PrimePlace> out;
    for (auto& [p, idx] : picks) {
      const auto& above = K.primes_above(p);
      require(idx >= 0 && idx < static_cast<int>(above.size()), ErrorKind::ConfigError,
              "factor_index " + std::to_string(idx) + " out of range for p = " + p.get_str());
      out.push_back(above[static_cast<std::size_t>(idx)]);
    }
    return PlaceSet(K, std::move(out));
  }

  /// Every place above each listed rational prime.
  static PlaceSet above_primes(const NumberField& K, const std::vector<Integer>& ps) {
    std::vector<PrimePlace> out;
    for (auto& p : ps)
      for (auto& P : K.primes_above(p)) out.push_back(P);
    return PlaceSet(K, std::move(out));
  }

  const NumberField& field() const { return K_; }
  const std::vector<PrimePlace>& finite_places() const { return finite_; }
  /// Distinct rational primes below the finite places, ascending.
  const std::vector<Integer>& rational_primes() const { return primes_; }
  int archimedean_count() const { return K_.r1() + K_.r2(); }
  int s() const { return archimedean_count() + static_cast<int>(finite_.size()); }

  bool contains(const PrimePlace& P) const { return std::find(finite_.begin(), finite_.end(), P) != finite_.end(); }

  bool subset_of(const PlaceSet& other) const {
    return std::all_of(finite_.begin(), finite_.end(), [&](const PrimePlace& P) { return other.contains(P); });
  }

  PlaceSet united(const std::vector<PrimePlace>& more) const {
    std::vector<PrimePlace> all = finite_;
    for (auto& P : more)
      if (std::find(all.begin(), all.end(), P) == all.end()) all.push_back(P);
    return PlaceSet(K_, std::move(all));
  }

  /// True when every place above p belongs to S, making p an S-unit.
  bool covers_prime(const Integer& p) const {
    for (auto& P : K_.primes_above(p))
      if (!contains(P)) return false;
    return true;
  }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (auto& P : finite_) out.push_back(P.label());
    return out;
  }

 private:
  NumberField K_;
  std::vector<PrimePlace> finite_;
  std::vector<Integer> primes_;
};

struct UnitGroupData {
  FieldElement torsion_generator;
  std::vector<FieldElement> free_generators;
};

namespace detail {

inline void strip_primes(Integer& x, const std::vector<Integer>& primes) {
  for (auto& q : primes) remove_factor(x, q);
}

// Leftover primes outside S were used as evidence of non-integrality; that
// is only valid where Z[t] is maximal.
inline void ensure_maximal_at(const NumberField& K, const Integer& leftover) {
  if (K.monogenic_asserted() || K.degree() == 1) return;
  Integer g;
  Integer disc = abs(K.discriminant());
  mpz_gcd(g.get_mpz_t(), leftover.get_mpz_t(), disc.get_mpz_t());
  if (g == 1) return;
  for (auto& r : prime_divisors(g))
    if (!K.dedekind_p_maximal(r)) fail(ErrorKind::IndexDivisor, r.get_str() + " divides the index of Z[t]");
}

}  // namespace detail

/// v_P(a) >= 0 for every finite place P outside S. Zero counts as an S-integer.
inline bool is_s_integer(const FieldElement& a, const PlaceSet& S) {
  if (a.is_zero()) return true;
  const auto& primes = S.rational_primes();
  if (a.degree() == 1) {
    Integer den = a.coords()[0].get_den();
    detail::strip_primes(den, primes);
    return den == 1;
  }
  const Integer D = a.denominator();
  Integer left = D;
  detail::strip_primes(left, primes);
  if (left != 1) {
    detail::ensure_maximal_at(a.field(), left);
    return false;
  }
  for (auto& q : primes) {
    if (D % q != 0) continue;
    for (auto& P : a.field().primes_above(q))
      if (!S.contains(P) && valuation(a, P) < 0) return false;
  }
  return true;
}

/// a != 0 and v_P(a) = 0 for every finite place P outside S.
inline bool is_s_unit(const FieldElement& a, const PlaceSet& S) {
  if (a.is_zero()) return false;
  const auto& primes = S.rational_primes();
  if (a.degree() == 1) {
    Integer num = abs(a.coords()[0].get_num()), den = a.coords()[0].get_den();
    detail::strip_primes(num, primes);
    if (num != 1) return false;
    detail::strip_primes(den, primes);
    return den == 1;
  }
  const Integer D = a.denominator();
  const Rational N = (a * a.field().from_rational(Rational(D))).norm();
  Integer left_n = abs(N.get_num()), left_d = D;
  detail::strip_primes(left_n, primes);
  if (left_n != 1) return false;
  detail::strip_primes(left_d, primes);
  if (left_d != 1) {
    detail::ensure_maximal_at(a.field(), left_d);
    return false;
  }
  for (auto& q : primes) {
    if (D % q != 0 && N.get_num() % q != 0) continue;
    for (auto& P : a.field().primes_above(q))
      if (!S.contains(P) && valuation(a, P) != 0) return false;
  }
  return true;
}

/// Order of a root of unity; throws if x is not torsion of plausible order.
inline int torsion_order(const FieldElement& x) {
  require(!x.is_zero(), ErrorKind::InvalidArgument, "zero is not a root of unity");
  const int n = x.field().degree();
  // phi(w) <= n forces w <= 6 n^2 for every n >= 1
  const int bound = 6 * n * n + 6;
  FieldElement acc = x;
  const FieldElement one = x.field().one();
  for (int k = 1; k <= bound; ++k) {
    if (acc == one) return k;
    acc = acc * x;
  }
  fail(ErrorKind::InvalidArgument, "torsion generator " + x.to_string() + " is not a root of unity");
}

// ---------------------------------------------------------------------------
// p-th roots

namespace detail {

using cld = std::complex<long double>;

inline long double to_ld(const Rational& q) { return static_cast<long double>(q.get_d()); }

// Durand-Kerner on a monic integer polynomial.
inline std::vector<cld> complex_roots(const std::vector<Integer>& f) {
  const int n = static_cast<int>(f.size()) - 1;
  std::vector<cld> roots(static_cast<std::size_t>(n));
  const cld seed(0.4L, 0.9L);
  cld z = 1;
  for (auto& r : roots) {
    r = z;
    z *= seed;
  }
  auto eval = [&](cld x) {
    cld acc = 0;
    for (int i = n; i >= 0; --i) acc = acc * x + static_cast<long double>(f[static_cast<std::size_t>(i)].get_d());
    return acc;
  };
  for (int iter = 0; iter < 2000; ++iter) {
    long double delta = 0;
    for (int i = 0; i < n; ++i) {
      cld den = 1;
      for (int j = 0; j < n; ++j)
        if (j != i) den *= roots[static_cast<std::size_t>(i)] - roots[static_cast<std::size_t>(j)];
      cld step = eval(roots[static_cast<std::size_t>(i)]) / den;
      roots[static_cast<std::size_t>(i)] -= step;
      delta = std::max(delta, std::abs(step));
    }
    if (delta < 1e-17L) break;
  }
  // Newton polish
  for (auto& r : roots) {
    for (int k = 0; k < 5; ++k) {
      cld v = 0, dv = 0;
      for (int i = n; i >= 0; --i) {
        dv = dv * r + v;
        v = v * r + static_cast<long double>(f[static_cast<std::size_t>(i)].get_d());
      }
      if (std::abs(dv) > 0) r -= v / dv;
    }
  }
  return roots;
}

// Solves V x = y with V[k][i] = roots[k]^i by Gaussian elimination.
inline std::vector<cld> solve_vandermonde(const std::vector<cld>& roots, std::vector<cld> y) {
  const std::size_t n = roots.size();
  std::vector<std::vector<cld>> m(n, std::vector<cld>(n));
  for (std::size_t k = 0; k < n; ++k) {
    cld pw = 1;
    for (std::size_t i = 0; i < n; ++i) {
      m[k][i] = pw;
      pw *= roots[k];
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    std::swap(m[c], m[piv]);
    std::swap(y[c], y[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      cld t = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= t * m[c][k];
      y[r] -= t * y[c];
    }
  }
  for (std::size_t c = 0; c < n; ++c) y[c] /= m[c][c];
  return y;
}

// Product of r^(v_r(disc)/2) over primes where Z[t] is not maximal; bounds
// the denominators of integral elements in the power basis.
inline Integer index_bound(const NumberField& K) {
  if (K.degree() == 1 || K.monogenic_asserted()) return 1;
  Integer b = 1;
  for (auto& [r, e] : factor(K.discriminant()))
    if (e >= 2 && !K.dedekind_p_maximal(r)) b *= ipow(r, e / 2);
  return b;
}

}  // namespace detail

/// An exact p-th root of c in K, or nullopt if none exists. For degree > 1
/// the candidates come from complex embeddings and are verified exactly;
/// when the numerics cannot settle the question RootExtractionFailed is
/// thrown instead of a silent "no".
inline std::optional<FieldElement> pth_root(const FieldElement& c, unsigned p) {
  require(p >= 1, ErrorKind::InvalidArgument, "root index must be positive");
  const NumberField& K = c.field();
  if (c.is_zero()) return c;
  if (p == 1) return c;
  if (K.degree() == 1) {
    auto r = exact_root(c.coords()[0], p);
    if (!r) return std::nullopt;
    return K.from_rational(*r);
  }
  if (!exact_root(c.norm(), p)) return std::nullopt;

  const Integer D = c.denominator() * detail::index_bound(K);
  const auto roots = detail::complex_roots(K.defining_coeffs());
  const std::size_t n = roots.size();
  std::vector<detail::cld> images(n);
  for (std::size_t k = 0; k < n; ++k) {
    detail::cld acc = 0, pw = 1;
    for (auto& q : c.coords()) {
      acc += detail::to_ld(q) * pw;
      pw *= roots[k];
    }
    images[k] = acc;
  }
  // choices per embedding: real roots take the real p-th roots, complex
  // embeddings with positive imaginary part choose a branch and their
  // conjugate partner follows
  std::vector<std::vector<detail::cld>> choices(n);
  std::vector<int> partner(n, -1);
  const long double eps = 1e-9L;
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(roots[k].imag()) < eps) {
      long double x = images[k].real();
      long double m = std::pow(std::abs(x), 1.0L / p);
      if (p % 2 == 1) choices[k] = {detail::cld(x < 0 ? -m : m, 0)};
      else if (x >= 0) choices[k] = {detail::cld(m, 0), detail::cld(-m, 0)};
      else return std::nullopt;
    } else if (roots[k].imag() > 0) {
      long double mod = std::pow(std::abs(images[k]), 1.0L / p), arg = std::arg(images[k]);
      const long double two_pi = 6.283185307179586476925286766559L;
      for (unsigned j = 0; j < p; ++j) choices[k].push_back(std::polar(mod, (arg + two_pi * j) / p));
    } else {
      for (std::size_t j = 0; j < n; ++j)
        if (j != k && std::abs(roots[j] - std::conj(roots[k])) < 1e-6L) partner[k] = static_cast<int>(j);
      require(partner[k] >= 0, ErrorKind::RootExtractionFailed, "could not pair complex embeddings");
    }
  }
  std::vector<std::size_t> pick(n, 0);
  const long double dscale = static_cast<long double>(D.get_d());
  bool uncertain = false;
  for (;;) {
    std::vector<detail::cld> y(n);
    for (std::size_t k = 0; k < n; ++k)
      if (partner[k] < 0) y[k] = choices[k][pick[k]];
    for (std::size_t k = 0; k < n; ++k)
      if (partner[k] >= 0) y[k] = std::conj(y[static_cast<std::size_t>(partner[k])]);
    auto x = detail::solve_vandermonde(roots, y);
    std::vector<Rational> coords;
    bool plausible = true;
    for (auto& xi : x) {
      long double v = xi.real() * dscale;
      if (std::abs(v) > 1e12L) uncertain = true;
      long double rv = std::nearbyint(v);
      if (std::abs(v - rv) > 1e-3L) plausible = false;
      coords.push_back(make_rational(Integer(std::to_string(static_cast<long long>(rv))), D));
    }
    if (plausible) {
      FieldElement cand = K.element(coords);
      if (cand.pow(static_cast<long>(p)) == c) return cand;
    }
    std::size_t k = 0;
    for (; k < n; ++k) {
      if (partner[k] >= 0) continue;
      if (++pick[k] < choices[k].size()) break;
      pick[k] = 0;
    }
    if (k == n) break;
  }
  if (uncertain) fail(ErrorKind::RootExtractionFailed, "p-th root of " + c.to_string() + " beyond numeric precision");
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// coset representatives

struct CosetReps {
  unsigned p = 0;
  int r = 0;                               // |reps| = p^r
  bool torsion_included = false;           // last generator is the torsion generator
  std::vector<FieldElement> generators;
  std::vector<FieldElement> reps;          // rep i has exponent digits of i in base p, generator 0 fastest
  std::vector<std::vector<int>> exponents;
};

/// Canonical representatives of O_S^* / (O_S^*)^p. For K = Q the generators
/// are the primes of S (and -1 when p = 2); otherwise they come from `units`.
inline CosetReps coset_reps(const PlaceSet& S, unsigned p, const std::optional<UnitGroupData>& units = std::nullopt) {
  require(is_prime(Integer(p)), ErrorKind::InvalidArgument, std::to_string(p) + " is not prime");
  const NumberField& K = S.field();
  CosetReps out;
  out.p = p;
  if (K.degree() == 1) {
    for (auto& q : S.rational_primes()) out.generators.push_back(K.from_rational(Rational(q)));
    if (p == 2) {
      out.generators.push_back(K.from_int(-1));
      out.torsion_included = true;
    }
  } else {
    require(units.has_value(), ErrorKind::MissingUnitData, "unit group data is required beyond the rationals");
    require(static_cast<int>(units->free_generators.size()) == S.s() - 1, ErrorKind::MissingUnitData,
            "expected " + std::to_string(S.s() - 1) + " free generators of O_S^*");
    for (auto& u : units->free_generators) {
      require(is_s_unit(u, S), ErrorKind::MissingUnitData, "generator " + u.to_string() + " is not an S-unit");
      out.generators.push_back(u);
    }
    const int w = torsion_order(units->torsion_generator);
    if (w % static_cast<int>(p) == 0) {
      out.generators.push_back(units->torsion_generator);
      out.torsion_included = true;
    }
  }
  out.r = static_cast<int>(out.generators.size());
  std::size_t total = 1;
  for (int i = 0; i < out.r; ++i) total *= p;
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::vector<int> ex(static_cast<std::size_t>(out.r));
    std::size_t rest = idx;
    FieldElement g = K.one();
    for (int j = 0; j < out.r; ++j) {
      ex[static_cast<std::size_t>(j)] = static_cast<int>(rest % p);
      rest /= p;
      if (ex[static_cast<std::size_t>(j)]) g = g * out.generators[static_cast<std::size_t>(j)].pow(ex[static_cast<std::size_t>(j)]);
    }
    out.reps.push_back(g);
    out.exponents.push_back(std::move(ex));
  }
  // t <= p^s
  require(out.r <= S.s(), ErrorKind::AssertionFailed, "more coset generators than |S|");
  return out;
}

struct PowerClass {
  std::size_t index;  // into CosetReps::reps
  FieldElement delta;  // u = reps[index]^-1 * delta^p
};

/// Writes the S-unit u as gamma^-1 * delta^p with gamma from the coset list.
inline PowerClass decompose_power_class(const FieldElement& u, const CosetReps& gamma, const PlaceSet& S) {
  require(is_s_unit(u, S), ErrorKind::NotSUnit, u.to_string() + " is not an S-unit");
  const NumberField& K = S.field();
  const unsigned p = gamma.p;
  if (K.degree() == 1) {
    const Rational& q = u.coords()[0];
    std::size_t index = 0, place = 1;
    const auto& primes = S.rational_primes();
    for (std::size_t j = 0; j < primes.size(); ++j) {
      long e = valuation(q, primes[j]);
      long digit = ((-e) % static_cast<long>(p) + static_cast<long>(p)) % static_cast<long>(p);
      index += static_cast<std::size_t>(digit) * place;
      place *= p;
    }
    if (gamma.torsion_included && sgn(q) < 0) index += place;
    FieldElement target = gamma.reps[index] * u;
    auto root = exact_root(target.coords()[0], p);
    require(root.has_value(), ErrorKind::AssertionFailed, "coset representative did not produce a p-th power");
    return {index, K.from_rational(*root)};
  }
  for (std::size_t i = 0; i < gamma.reps.size(); ++i) {
    if (auto root = pth_root(gamma.reps[i] * u, p)) return {i, *root};
  }
  fail(ErrorKind::RootExtractionFailed, "no coset representative makes " + u.to_string() + " a p-th power");
}

// ---------------------------------------------------------------------------
// S-unit enumeration

namespace detail {

inline void rational_s_units(const std::vector<Integer>& primes, std::size_t j, const Integer& num, const Integer& den,
                             const Integer& H, std::vector<Rational>& out) {
  if (j == primes.size()) {
    out.push_back(make_rational(num, den));
    out.push_back(make_rational(-num, den));
    return;
  }
  rational_s_units(primes, j + 1, num, den, H, out);
  for (Integer n = num * primes[j]; n <= H; n *= primes[j]) rational_s_units(primes, j + 1, n, den, H, out);
  for (Integer d = den * primes[j]; d <= H; d *= primes[j]) rational_s_units(primes, j + 1, num, d, H, out);
}

}  // namespace detail

/// Every S-unit of height <= H in canonical order: an exponent-vector box for
/// K = Q, a filtered height box otherwise.
inline std::vector<FieldElement> s_units_up_to_height(const PlaceSet& S, long H, unsigned threads = 1) {
  require(H >= 1, ErrorKind::InvalidArgument, "height bound must be >= 1");
  const NumberField& K = S.field();
  std::vector<FieldElement> out;
  if (K.degree() == 1) {
    std::vector<Rational> qs;
    detail::rational_s_units(S.rational_primes(), 0, Integer(1), Integer(1), Integer(H), qs);
    for (auto& q : qs) out.push_back(K.from_rational(q));
  } else {
    auto parts = run_sharded<std::vector<FieldElement>>(threads, [&](BoxShard shard, std::vector<FieldElement>& local) {
      for_each_in_box(K, H, shard, [&](const FieldElement& x) {
        if (is_s_unit(x, S)) local.push_back(x);
      });
    });
    for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

}  // namespace sunits
