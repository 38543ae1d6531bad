#pragma once

// Seeded invariant suites behind `sunits_cli verify`. Failures are collected
// as data; nothing here throws for a violated property.

#include <chrono>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "sunits/harness.hpp"

namespace sunits {

struct SuiteResult {
  std::string name;
  std::size_t checks = 0;
  std::vector<std::string> failures;
  double seconds = 0;
  bool passed() const { return failures.empty(); }
};

/// Uniform rationals a/b with |a| <= H and 1 <= b <= H.
inline Rational random_rational(std::mt19937_64& rng, long H) {
  std::uniform_int_distribution<long> num(-H, H), den(1, H);
  return make_rational(Integer(num(rng)), Integer(den(rng)));
}

inline FieldElement random_element(const NumberField& K, std::mt19937_64& rng, long H, bool nonzero = true) {
  for (;;) {
    std::vector<Rational> c;
    for (int i = 0; i < K.degree(); ++i) c.push_back(random_rational(rng, H));
    FieldElement x = K.element(std::move(c));
    if (!nonzero || !x.is_zero()) return x;
  }
}

/// Random map over Q of degree d with integer coefficients of size <= H and
/// gcd(num, den) = 1; den has degree < d or num has degree d.
inline RationalMap random_map_q(std::mt19937_64& rng, int d, long H) {
  const NumberField Q = NumberField::rationals();
  std::uniform_int_distribution<long> coef(-H, H);
  std::uniform_int_distribution<int> deg(0, d);
  for (;;) {
    const bool num_full = rng() % 2 == 0;
    const int dn = num_full ? d : deg(rng), dd = num_full ? deg(rng) : d;
    std::vector<Rational> a(static_cast<std::size_t>(dn + 1)), b(static_cast<std::size_t>(dd + 1));
    for (auto& x : a) x = Rational(coef(rng));
    for (auto& x : b) x = Rational(coef(rng));
    if (a.back() == 0 || b.back() == 0) continue;
    RationalMap phi = RationalMap::from_rationals(Q, a, b);
    if (phi.degree() == d) return phi;
  }
}

/// gamma (z - a)^d / (z - b)^e style maps with exactly two zeros/poles.
inline RationalMap random_two_point_map_q(std::mt19937_64& rng, int d, long H) {
  const NumberField Q = NumberField::rationals();
  std::uniform_int_distribution<long> coef(-H, H);
  for (;;) {
    long g = coef(rng), a = coef(rng), b = coef(rng);
    if (g == 0 || a == b) continue;
    KPoly za = pow(KPoly::linear_root(Q.from_int(a)), static_cast<unsigned>(d));
    KPoly zb = pow(KPoly::linear_root(Q.from_int(b)), static_cast<unsigned>(d));
    KPoly one = KPoly::constant(Q.one());
    const int kind = static_cast<int>(rng() % 3);
    KPoly num = (kind == 2 ? one : za).scaled(Q.from_int(g));
    KPoly den = kind == 1 ? one : zb;
    return RationalMap::create(num, den);
  }
}

namespace detail {

inline SuiteResult timed(const std::string& name, const std::function<void(SuiteResult&)>& body) {
  SuiteResult r;
  r.name = name;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const Error& e) {
    r.failures.push_back(std::string("unexpected ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline void check(SuiteResult& r, bool ok, const std::string& what) {
  ++r.checks;
  if (!ok) r.failures.push_back(what);
}

inline std::vector<NumberField> suite_fields() {
  return {NumberField::rationals(), NumberField::create({Integer(1), Integer(0), Integer(1)}),
          NumberField::create({Integer(-2), Integer(0), Integer(1)})};
}

}  // namespace detail

/// Field laws, norm multiplicativity, valuation additivity and the norm
/// product formula over Q, Q(i), Q(sqrt 2).
inline SuiteResult kernel_suite(int samples = 1000, std::uint64_t seed = 1) {
  return detail::timed("kernel", [&](SuiteResult& r) {
    std::mt19937_64 rng(seed);
    for (auto& K : detail::suite_fields()) {
      const std::string tag = "degree " + std::to_string(K.degree()) + " field: ";
      for (int k = 0; k < samples; ++k) {
        FieldElement a = random_element(K, rng, 30), b = random_element(K, rng, 30);
        detail::check(r, (a * b) / b == a, tag + "(ab)/b != a for " + a.to_string());
        detail::check(r, a * a.inverse() == K.one(), tag + "a a^-1 != 1 for " + a.to_string());
        detail::check(r, (a * b).norm() == a.norm() * b.norm(), tag + "norm not multiplicative");
        for (auto& P : support(a * b)) {
          detail::check(r, valuation(a * b, P) == valuation(a, P) + valuation(b, P), tag + "valuation not additive at " + P.label());
        }
        const Rational n = a.norm();
        for (auto& p : prime_divisors(n.get_num() * n.get_den())) {
          long sum = 0;
          for (auto& P : K.primes_above(p)) sum += static_cast<long>(P.f) * valuation(a, P);
          detail::check(r, sum == valuation(n, p), tag + "product formula fails at p = " + p.get_str() + " for " + a.to_string());
        }
      }
      for (auto p : primes_up_to(100)) {
        long ef = 0;
        for (auto& P : K.primes_above(Integer(p))) ef += static_cast<long>(P.e) * P.f;
        detail::check(r, ef == K.degree(), tag + "sum e f != n at p = " + std::to_string(p));
      }
    }
  });
}

/// S-integrality against valuations, power-class decomposition, pth_root.
inline SuiteResult places_suite(int samples = 300, std::uint64_t seed = 2) {
  return detail::timed("places", [&](SuiteResult& r) {
    std::mt19937_64 rng(seed);
    for (auto& K : detail::suite_fields()) {
      PlaceSet S = PlaceSet::above_primes(K, {Integer(2), Integer(3)});
      for (int k = 0; k < samples; ++k) {
        FieldElement a = random_element(K, rng, 12);
        bool integral = true, unit = true;
        for (auto& P : support(a)) {
          if (S.contains(P)) continue;
          long v = valuation(a, P);
          integral = integral && v >= 0;
          unit = unit && v == 0;
        }
        detail::check(r, is_s_integer(a, S) == integral, "is_s_integer disagrees with valuations for " + a.to_string());
        detail::check(r, is_s_unit(a, S) == unit, "is_s_unit disagrees with valuations for " + a.to_string());
        FieldElement c = a.pow(3);
        auto root = pth_root(c, 3);
        detail::check(r, root && root->pow(3) == c, "pth_root misses a cube " + c.to_string());
      }
    }
    const NumberField Q = NumberField::rationals();
    PlaceSet S = PlaceSet::above_primes(Q, {Integer(2), Integer(3)});
    CosetReps G = coset_reps(S, 5);
    for (auto& u : s_units_up_to_height(S, 500)) {
      PowerClass pc = decompose_power_class(u, G, S);
      detail::check(r, G.reps[pc.index] * u == pc.delta.pow(5), "power class decomposition fails for " + u.to_string());
    }
  });
}

/// m(phi^2) >= 3, and >= d + 1 when m(phi) = 2, over random maps.
inline SuiteResult lemma_poles_suite(int samples = 500, std::uint64_t seed = 3) {
  return detail::timed("lemma-poles", [&](SuiteResult& r) {
    std::mt19937_64 rng(seed);
    int done = 0;
    while (done < samples) {
      const int d = 2 + static_cast<int>(rng() % 4);
      RationalMap phi = done % 4 == 3 ? random_two_point_map_q(rng, d, 10) : random_map_q(rng, d, 10);
      if (is_beta_z_pm_d(phi) || phi.degree() < 2) continue;
      ++done;
      const int m1 = zero_pole_count(phi), m2 = zero_pole_count(iterate(phi, 2));
      detail::check(r, m2 >= 3, "m(phi^2) < 3 for " + phi.to_string());
      if (m1 == 2) detail::check(r, m2 >= phi.degree() + 1, "m(phi^2) < d + 1 for " + phi.to_string());
    }
  });
}

/// Composition against pointwise evaluation, orbit bookkeeping.
inline SuiteResult dynamics_suite(int samples = 100, std::uint64_t seed = 4) {
  return detail::timed("dynamics", [&](SuiteResult& r) {
    std::mt19937_64 rng(seed);
    const NumberField Q = NumberField::rationals();
    for (int k = 0; k < samples; ++k) {
      RationalMap phi = random_map_q(rng, 2 + static_cast<int>(rng() % 2), 6);
      RationalMap chi = random_map_q(rng, 2, 6);
      RationalMap pc = compose(phi, chi);
      detail::check(r, pc.degree() == phi.degree() * chi.degree(), "deg(phi o chi) != deg phi deg chi");
      for (int t = 0; t < 5; ++t) {
        ProjPoint x = ProjPoint::finite(Q.from_rational(random_rational(rng, 20)));
        detail::check(r, evaluate(pc, x) == evaluate(phi, evaluate(chi, x)), "(phi o chi)(x) != phi(chi(x)) for " + phi.to_string());
      }
      ProjPoint a = ProjPoint::finite(Q.from_rational(random_rational(rng, 5)));
      OrbitRecord rec = orbit(phi, a, 6);
      ProjPoint x = a;
      bool ok = true;
      for (auto& P : rec.points) {
        x = evaluate(phi, x);
        ok = ok && x == P;
      }
      detail::check(r, ok, "orbit points differ from repeated evaluation");
    }
  });
}

/// Image scan against the unit-equation route, curve roundtrip.
inline SuiteResult reduction_suite(std::uint64_t seed = 5) {
  return detail::timed("reduction", [&](SuiteResult& r) {
    std::mt19937_64 rng(seed);
    const NumberField Q = NumberField::rationals();
    PlaceSet S = PlaceSet::above_primes(Q, {Integer(2), Integer(3)});
    for (int k = 0; k < 6; ++k) {
      std::uniform_int_distribution<long> root(-4, 4);
      long a = root(rng), b = root(rng);
      if (a == b) {
        --k;
        continue;
      }
      RationalMap phi = RationalMap::polynomial(KPoly::linear_root(Q.from_int(a)) * KPoly::linear_root(Q.from_int(b)));
      ImageCount scan = count_image_sunits_box(phi, S, 300);
      UnitEquationInstance inst = monic_unit_reduction(phi, S);
      UnitEquationCrossCheck cc = cross_check_unit_equation(inst, scan);
      detail::check(r, cc.agree(), "routes disagree for " + phi.to_string());
      detail::check(r, Integer(static_cast<long>(cc.solutions)) <= evertse_bound(inst.ext.s()), "solution count above 256^s'");
      CurveBattery bat = build_curves(phi, S, 5);
      auto pts = curve_point_search_all(bat, 300);
      for (auto& [beta, v] : scan.hits) {
        auto [idx, pt] = map_sunit_to_curve(beta, bat);
        bool found = false;
        for (auto& q : pts[idx]) found = found || (q.z == pt.z && q.y == pt.y);
        detail::check(r, found, "curve scan misses the image of " + beta.to_string());
      }
    }
  });
}

/// Valuation growth of random unicritical certificates.
inline SuiteResult trajectory_suite(int samples = 40, std::uint64_t seed = 6) {
  return detail::timed("trajectory", [&](SuiteResult& r) {
    std::mt19937_64 rng(seed);
    const NumberField Q = NumberField::rationals();
    const PlaceSet S = PlaceSet::archimedean(Q);
    const long dens[] = {2, 3, 5, 4, 9};
    for (int k = 0; k < samples; ++k) {
      const int d = 2 + static_cast<int>(rng() % 3);
      std::vector<Rational> c(static_cast<std::size_t>(d + 1));
      for (int j = 0; j < d; ++j) c[static_cast<std::size_t>(j)] = Rational(static_cast<long>(rng() % 7) - 3);
      c.back() = 1;
      const int i = static_cast<int>(rng() % static_cast<unsigned>(d - 1));
      c[static_cast<std::size_t>(i)] = 0;
      const Rational beta = make_rational(Integer(1 + static_cast<long>(rng() % 5)), Integer(dens[rng() % 5]));
      if (beta.get_den() == 1) {
        --k;
        continue;
      }
      EscapeCertificate cert = unicritical_certificate(kpoly(Q, c), Q.from_rational(beta), i, S);
      const FieldElement gamma = Q.from_int(rng() % 2 ? 1 : -1);
      try {
        verify_valuation_growth(cert, gamma, 6);
        ++r.checks;
      } catch (const Error& e) {
        detail::check(r, false, std::string(e.what()) + " for " + cert.phi.to_string());
      }
      bool rejected = false;
      try {
        unicritical_certificate(kpoly(Q, c), Q.from_rational(beta), d - 1, S);
      } catch (const Error& e) {
        rejected = e.kind() == ErrorKind::HypothesisFailed;
      }
      detail::check(r, rejected, "i = d - 1 accepted");
    }
  });
}

/// Random chains through interpolation_construct.
inline SuiteResult interpolation_suite(int samples = 50, std::uint64_t seed = 7) {
  return detail::timed("interpolation", [&](SuiteResult& r) {
    std::mt19937_64 rng(seed);
    for (auto& K : detail::suite_fields()) {
      for (int k = 0; k < samples; ++k) {
        const int len = 2 + static_cast<int>(rng() % 4);
        std::vector<FieldElement> c;
        while (static_cast<int>(c.size()) < len) {
          FieldElement x = random_element(K, rng, 20, false);
          if (std::find(c.begin(), c.end(), x) == c.end()) c.push_back(x);
        }
        auto [r1, r2] = default_extra_roots(c);
        KPoly phi = interpolation_construct(c, r1, r2);
        bool ok = phi.degree() == len + 1 && phi(r1).is_zero() && phi(r2).is_zero();
        for (int j = 0; j + 1 < len; ++j) ok = ok && phi(c[static_cast<std::size_t>(j)]) == c[static_cast<std::size_t>(j + 1)];
        detail::check(r, ok, "interpolant fails a node");
        detail::check(r, !is_beta_z_pm_d(RationalMap::polynomial(phi)), "interpolant has monomial shape");
      }
    }
  });
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"kernel", "places", "lemma-poles", "dynamics", "reduction", "trajectory", "interpolation"};
  return names;
}

/// "all" or one suite name.
inline std::vector<SuiteResult> run_property_suites(const std::string& selector) {
  std::vector<SuiteResult> out;
  auto want = [&](const std::string& n) { return selector == "all" || selector == n; };
  bool known = selector == "all";
  for (auto& n : suite_names()) known = known || n == selector;
  require(known, ErrorKind::ConfigError, "unknown suite " + selector);
  if (want("kernel")) out.push_back(kernel_suite());
  if (want("places")) out.push_back(places_suite());
  if (want("lemma-poles")) out.push_back(lemma_poles_suite());
  if (want("dynamics")) out.push_back(dynamics_suite());
  if (want("reduction")) out.push_back(reduction_suite());
  if (want("trajectory")) out.push_back(trajectory_suite());
  if (want("interpolation")) out.push_back(interpolation_suite());
  return out;
}

inline json suites_json(const std::vector<SuiteResult>& results) {
  json out = json::array();
  for (auto& r : results) {
    json f = json::array();
    for (auto& s : r.failures) f.push_back(s);
    out.push_back(json{{"suite", r.name}, {"checks", r.checks}, {"passed", r.passed()}, {"failures", f}});
  }
  return out;
}

}  // namespace sunits
