#pragma once

// Valuation-escape certificates. A certificate names a finite place v outside
// S and a linear recurrence for v(phi^n(u)) along orbits of S-units u; once
// the valuation is negative it keeps falling, so an orbit meets O_S^* at most
// once. Everything is stated additively: |x|_v > 1 iff v(x) < 0.

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sunits/dynamics.hpp"
#include "sunits/places.hpp"

namespace sunits {

struct Hypothesis {
  std::string clause;
  std::string witness;
};

struct EscapeCertificate {
  std::string kind;  // "unicritical" or "laurent"
  RationalMap phi;
  PlaceSet S;
  PrimePlace place;
  long base_valuation = 0;  // v(beta), or v(gamma_d) for the Laurent class
  int growth_exponent = 0;  // d
  long multiplier = 0;      // v_{n+1} = multiplier * v_n + offset, v_1 = base_valuation
  long offset = 0;
  int exceptional_index = -1;
  std::vector<Hypothesis> hypotheses;
  std::vector<std::pair<int, long>> margins;  // (i, v(gamma_i) - v(gamma_d)) for the Laurent class
  std::string conclusion = "every orbit contains at most one S-unit";

  /// Expected v(phi^n(u)) for an S-unit u, n = 1..N.
  std::vector<long> expected_trajectory(int N) const {
    std::vector<long> out;
    long v = base_valuation;
    for (int n = 1; n <= N; ++n) {
      out.push_back(v);
      v = multiplier * v + offset;
    }
    return out;
  }
};

namespace detail {

[[noreturn]] inline void hypothesis_failed(const std::string& clause) { fail(ErrorKind::HypothesisFailed, clause); }

// Places outside S where x has negative valuation, in (p, index) order.
inline std::vector<PrimePlace> negative_places_outside(const FieldElement& x, const PlaceSet& S) {
  std::vector<PrimePlace> out;
  if (x.is_zero()) return out;
  for (auto& P : support(x))
    if (!S.contains(P) && valuation(x, P) < 0) out.push_back(P);
  return out;
}

}  // namespace detail

/// phi = phi0 + beta z^i with phi0 monic over O_S, i <= d - 2 and beta not
/// an S-integer.
inline EscapeCertificate unicritical_certificate(const KPoly& phi0, const FieldElement& beta, int i, const PlaceSet& S) {
  const int d = phi0.degree();
  if (d < 2) detail::hypothesis_failed("phi0 must have degree >= 2");
  if (phi0.leading() != S.field().one()) detail::hypothesis_failed("phi0 is not monic");
  for (std::size_t k = 0; k < phi0.size(); ++k)
    if (!is_s_integer(phi0[k], S)) detail::hypothesis_failed("coefficient of z^" + std::to_string(k) + " of phi0 is not an S-integer");
  if (i < 0 || i > d - 2)
    detail::hypothesis_failed("exceptional index i = " + std::to_string(i) + " must satisfy 0 <= i <= d - 2 = " + std::to_string(d - 2));
  auto places = detail::negative_places_outside(beta, S);
  if (places.empty()) detail::hypothesis_failed("beta = " + beta.to_string() + " is an S-integer");

  EscapeCertificate c;
  c.kind = "unicritical";
  c.phi = RationalMap::polynomial(phi0 + KPoly::monomial(beta, static_cast<std::size_t>(i)));
  c.S = S;
  c.place = places.front();
  c.base_valuation = valuation(beta, c.place);
  c.growth_exponent = d;
  c.multiplier = d;
  c.offset = 0;
  c.exceptional_index = i;
  c.hypotheses = {
      {"phi0 monic over O_S", poly_to_string(phi0)},
      {"0 <= i <= d - 2", "i = " + std::to_string(i) + ", d = " + std::to_string(d)},
      {"beta not in O_S", "v" + c.place.label() + "(beta) = " + std::to_string(c.base_valuation)},
  };
  return c;
}

struct LaurentShape {
  int d = 0;        // degree of the numerator
  int d_prime = 0;  // power of z in the denominator
};

inline LaurentShape laurent_shape(const RationalMap& phi) {
  require_nonconstant(phi);
  const KPoly& den = phi.den();
  for (int k = 0; k < den.degree(); ++k)
    if (!den[static_cast<std::size_t>(k)].is_zero()) detail::hypothesis_failed("denominator is not a power of z");
  return {phi.num_degree(), phi.den_degree()};
}

struct LaurentRestriction {
  LaurentShape shape;
  std::vector<FieldElement> inputs;  // S-units of height <= H
  std::vector<std::pair<FieldElement, FieldElement>> hits;  // (u, phi(u)) with phi(u) in O_S^*
  std::vector<FieldElement> values;  // distinct unit values
  long height_bound = 0;
  std::size_t count() const { return values.size(); }
};

/// For phi = (gamma_d z^d + ... + gamma_0) / z^d' with gamma_0, gamma_d
/// S-units, phi(beta) can only be an S-unit when beta is; counts the S-unit
/// values over S-unit inputs of height <= H.
inline LaurentRestriction laurent_unit_restriction(const RationalMap& phi, const PlaceSet& S, long H, unsigned threads = 1) {
  LaurentRestriction r;
  r.shape = laurent_shape(phi);
  r.height_bound = H;
  const KPoly& num = phi.num();
  if (r.shape.d_prime < 1) detail::hypothesis_failed("denominator must be z^d' with d' >= 1");
  if (r.shape.d == r.shape.d_prime) detail::hypothesis_failed("d = d' leaves |beta|_v > 1 unconstrained");
  const FieldElement& g0 = num[0];
  const FieldElement& gd = num.leading();
  if (!is_s_unit(g0, S)) detail::hypothesis_failed("gamma_0 = " + g0.to_string() + " is not an S-unit");
  if (!is_s_unit(gd, S)) detail::hypothesis_failed("gamma_d = " + gd.to_string() + " is not an S-unit");
  for (std::size_t k = 0; k < num.size(); ++k)
    if (!is_s_integer(num[k], S)) detail::hypothesis_failed("gamma_" + std::to_string(k) + " is not an S-integer");
  if (r.shape.d >= 2 && is_kth_power(RationalMap::polynomial(num), r.shape.d))
    detail::hypothesis_failed("numerator is a d-th power");
  r.inputs = s_units_up_to_height(S, H, threads);
  std::set<FieldElement, CanonicalLess> vals;
  for (auto& u : r.inputs) {
    auto v = phi(u);
    if (v && is_s_unit(*v, S)) {
      r.hits.emplace_back(u, *v);
      vals.insert(*v);
    }
  }
  r.values.assign(vals.begin(), vals.end());
  return r;
}

/// Laurent maps with d > d' whose leading coefficient dominates at some v
/// outside S: v(gamma_d) < min(0, v(gamma_i)) for every i < d.
inline EscapeCertificate laurent_escape_certificate(const RationalMap& phi, const PlaceSet& S) {
  const LaurentShape sh = laurent_shape(phi);
  if (sh.d <= sh.d_prime) detail::hypothesis_failed("need d > d'");
  const KPoly& num = phi.num();
  const FieldElement& gd = num.leading();
  auto candidates = detail::negative_places_outside(gd, S);
  if (candidates.empty()) detail::hypothesis_failed("gamma_d = " + gd.to_string() + " has v >= 0 at every place outside S");
  std::string first_offence;
  for (auto& P : candidates) {
    const long vd = valuation(gd, P);
    std::vector<std::pair<int, long>> margins;
    std::string offence;
    for (int i = 0; i < sh.d; ++i) {
      const FieldElement& gi = num[static_cast<std::size_t>(i)];
      if (gi.is_zero()) continue;
      const long vi = valuation(gi, P);
      if (!(vd < std::min(0L, vi))) {
        offence = "gamma_" + std::to_string(i) + " = " + gi.to_string() + " at " + P.label();
        break;
      }
      margins.emplace_back(i, vi - vd);
    }
    if (!offence.empty()) {
      if (first_offence.empty()) first_offence = offence;
      continue;
    }
    EscapeCertificate c;
    c.kind = "laurent";
    c.phi = phi;
    c.S = S;
    c.place = P;
    c.base_valuation = vd;
    c.growth_exponent = sh.d;
    c.multiplier = sh.d - sh.d_prime;
    c.offset = vd;
    c.margins = std::move(margins);
    c.hypotheses = {
        {"Laurent shape", "d = " + std::to_string(sh.d) + ", d' = " + std::to_string(sh.d_prime)},
        {"d > d'", std::to_string(sh.d) + " > " + std::to_string(sh.d_prime)},
        {"v(gamma_d) < min(0, v(gamma_i))", "v" + P.label() + "(gamma_d) = " + std::to_string(vd)},
    };
    return c;
  }
  detail::hypothesis_failed("leading coefficient not dominant: " + first_offence);
}

struct Trajectory {
  std::vector<long> valuations;
  std::vector<long> expected;
};

/// v(phi^n(gamma)) for n = 1..N against the certificate's growth law; any
/// mismatch throws TrajectoryMismatch.
inline Trajectory verify_valuation_growth(const EscapeCertificate& cert, const FieldElement& gamma, int N) {
  require(N >= 1, ErrorKind::InvalidArgument, "N must be >= 1");
  require(is_s_unit(gamma, cert.S), ErrorKind::InvalidArgument, gamma.to_string() + " is not an S-unit");
  Trajectory t;
  t.expected = cert.expected_trajectory(N);
  ProjPoint x = ProjPoint::finite(gamma);
  for (int n = 1; n <= N; ++n) {
    x = evaluate(cert.phi, x);
    if (x.is_infinity() || x.value().is_zero())
      fail(ErrorKind::TrajectoryMismatch, "orbit reached " + x.to_string() + " at step " + std::to_string(n));
    const long v = valuation(x.value(), cert.place);
    t.valuations.push_back(v);
    if (v != t.expected[static_cast<std::size_t>(n - 1)])
      fail(ErrorKind::TrajectoryMismatch, "step " + std::to_string(n) + ": valuation " + std::to_string(v) +
                                              ", expected " + std::to_string(t.expected[static_cast<std::size_t>(n - 1)]));
  }
  return t;
}

/// Distinct S-unit values among the orbit points (the start is not part of
/// the orbit).
inline std::vector<FieldElement> orbit_sunit_values(const OrbitRecord& rec, const PlaceSet& S) {
  std::set<FieldElement, CanonicalLess> vals;
  for (auto& P : rec.points)
    if (!P.is_infinity() && is_s_unit(P.value(), S)) vals.insert(P.value());
  return {vals.begin(), vals.end()};
}

struct CertificateCheck {
  bool covered = false;  // the start or some orbit point is an S-unit
  std::size_t unit_values = 0;
  bool holds = false;
};

/// Orbit scan of a certified map from alpha.
inline CertificateCheck check_certificate_on_orbit(const EscapeCertificate& cert, const ProjPoint& alpha, int N,
                                                   const std::optional<Integer>& hcap = default_height_cap()) {
  OrbitRecord rec = orbit(cert.phi, alpha, N, hcap);
  CertificateCheck c;
  c.unit_values = orbit_sunit_values(rec, cert.S).size();
  c.covered = c.unit_values > 0 || (!alpha.is_infinity() && is_s_unit(alpha.value(), cert.S));
  c.holds = c.unit_values <= 1;
  return c;
}

}  // namespace sunits
