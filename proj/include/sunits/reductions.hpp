#pragma once

// The two reduction pipelines: monic polynomials to S-unit equations, and
// arbitrary maps to batteries of superelliptic twists y^p = gamma_i psi(z).
// Also the explicit infinite families for maps with two zeros/poles and for
// power maps.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sunits/box.hpp"
#include "sunits/dynamics.hpp"
#include "sunits/places.hpp"
#include "sunits/qscan.hpp"

namespace sunits {

// ---------------------------------------------------------------------------
// image scan

struct ImageCount {
  std::vector<std::pair<FieldElement, FieldElement>> hits;  // (beta, phi(beta)) in canonical beta order
  std::vector<FieldElement> values;                         // distinct S-unit values, canonical order
  long height_bound = 0;
  std::size_t count() const { return values.size(); }
};

/// Scans beta of height <= H and keeps the distinct phi(beta) in O_S^*.
inline ImageCount count_image_sunits_box(const RationalMap& phi, const PlaceSet& S, long H, unsigned threads = 1) {
  require_nonconstant(phi);
  const NumberField& K = phi.field();
  ImageCount out;
  out.height_bound = H;
  if (K.is_rationals()) {
    for (auto& h : qscan::image_sunit_hits(phi, S.rational_primes(), H, threads))
      out.hits.emplace_back(K.from_rational(h.beta), K.from_rational(h.value));
  } else {
    using Hits = std::vector<std::pair<FieldElement, FieldElement>>;
    auto parts = run_sharded<Hits>(threads, [&](BoxShard shard, Hits& local) {
      for_each_in_box(K, H, shard, [&](const FieldElement& beta) {
        auto v = phi(beta);
        if (v && is_s_unit(*v, S)) local.emplace_back(beta, *v);
      });
    });
    for (auto& p : parts) out.hits.insert(out.hits.end(), p.begin(), p.end());
    std::sort(out.hits.begin(), out.hits.end(), [](auto& a, auto& b) { return canonical_less(a.first, b.first); });
  }
  std::set<FieldElement, CanonicalLess> vals;
  for (auto& h : out.hits) vals.insert(h.second);
  out.values.assign(vals.begin(), vals.end());
  return out;
}

// ---------------------------------------------------------------------------
// unit equation

/// K' = Q[x]/(poly) together with the images of the two roots; only used
/// when the base field is Q and the roots are not rational.
struct ExtensionData {
  std::vector<Integer> poly;
  std::vector<Rational> delta1, delta2;
  bool assert_monogenic = false;
};

struct UnitEquationInstance {
  RationalMap base_phi;        // over K
  RationalMap phi;             // over the working field (K, or K' when extended)
  FieldElement delta1, delta2;
  FieldElement gap;            // delta2 - delta1
  PlaceSet base;               // S over K
  PlaceSet ext;                // S' over the working field
  int extension_degree = 1;    // [K' : K]

  /// u1 = gamma - delta1, u2 = gamma - delta2.
  std::pair<FieldElement, FieldElement> units_of(const FieldElement& gamma) const {
    return {gamma - delta1, gamma - delta2};
  }
  FieldElement back_map(const FieldElement& u1) const { return u1 + delta1; }
};

/// Rational roots of a polynomial over Q, ascending.
inline std::vector<Rational> rational_roots(const KPoly& p) {
  require(!p.is_zero(), ErrorKind::InvalidArgument, "roots of the zero polynomial");
  require(p.leading().field().is_rationals(), ErrorKind::InvalidArgument, "rational roots need K = Q");
  Integer L = 1;
  for (auto& c : p.coeffs()) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), c.coords()[0].get_den_mpz_t());
  std::vector<Integer> a;
  for (auto& c : p.coeffs()) a.push_back(Rational(c.coords()[0] * L).get_num());
  std::set<Rational> roots;
  std::size_t low = 0;
  while (low < a.size() && a[low] == 0) ++low;
  if (low > 0) roots.insert(Rational(0));
  if (low + 1 < a.size()) {
    Poly<Rational> pq(std::vector<Rational>(a.begin(), a.end()));
    for (auto& num : divisors(a[low]))
      for (auto& den : divisors(a.back()))
        for (int s : {1, -1}) {
          Rational r = make_rational(Integer(num * s), den);
          if (pq(r) == 0) roots.insert(r);
        }
  }
  return {roots.begin(), roots.end()};
}

inline bool is_monic_over_os(const RationalMap& phi, const PlaceSet& S) {
  if (!phi.is_polynomial() || phi.num().is_zero() || phi.num().leading() != phi.field().one()) return false;
  for (auto& c : phi.num().coeffs())
    if (!is_s_integer(c, S)) return false;
  return true;
}

/// Sets up the unit equation u1 - u2 = delta2 - delta1 attached to two roots
/// of a monic phi over O_S. Roots must lie in K unless `ext` supplies K'.
inline UnitEquationInstance monic_unit_reduction(const RationalMap& phi, const PlaceSet& S, const FieldElement& delta1,
                                                 const FieldElement& delta2,
                                                 const std::optional<ExtensionData>& ext = std::nullopt) {
  require(is_monic_over_os(phi, S), ErrorKind::NotMonicOverOS, phi.to_string() + " is not monic over O_S");
  UnitEquationInstance inst;
  inst.base = S;
  inst.base_phi = phi;
  const int d = phi.degree();
  if (!ext) {
    require(delta1 != delta2, ErrorKind::RootsNotDistinct, "delta1 = delta2");
    require(phi.num()(delta1).is_zero() && phi.num()(delta2).is_zero(), ErrorKind::RootsNotInField,
            "supplied roots are not roots of phi in K");
    inst.phi = phi;
    inst.delta1 = delta1;
    inst.delta2 = delta2;
    inst.ext = S;
    inst.extension_degree = 1;
  } else {
    require(S.field().is_rationals(), ErrorKind::Unsupported, "extension data is only supported over Q");
    NumberField Kp = NumberField::create(ext->poly, ext->assert_monogenic);
    inst.extension_degree = Kp.degree();
    require(inst.extension_degree <= d * (d - 1), ErrorKind::InvalidArgument, "[K':K] exceeds d(d-1)");
    std::vector<Rational> num;
    for (auto& c : phi.num().coeffs()) num.push_back(c.coords()[0]);
    inst.phi = RationalMap::from_rationals(Kp, num);
    inst.delta1 = Kp.element(ext->delta1);
    inst.delta2 = Kp.element(ext->delta2);
    require(inst.delta1 != inst.delta2, ErrorKind::RootsNotDistinct, "delta1 = delta2");
    require(inst.phi.num()(inst.delta1).is_zero() && inst.phi.num()(inst.delta2).is_zero(), ErrorKind::RootsNotInField,
            "supplied roots are not roots of phi in K'");
    inst.ext = PlaceSet::above_primes(Kp, S.rational_primes());
  }
  require(inst.ext.s() <= inst.extension_degree * S.s(), ErrorKind::AssertionFailed, "|S'| > [K':K] |S|");
  inst.gap = inst.delta2 - inst.delta1;
  return inst;
}

/// Uses the two smallest rational roots of phi (K = Q) or the K-roots found
/// in the box of height 20 for other fields.
inline UnitEquationInstance monic_unit_reduction(const RationalMap& phi, const PlaceSet& S) {
  const NumberField& K = phi.field();
  std::vector<FieldElement> roots;
  if (K.is_rationals()) {
    for (auto& r : rational_roots(phi.num())) roots.push_back(K.from_rational(r));
  } else {
    for_each_in_box(K, 20, [&](const FieldElement& x) {
      if (roots.size() < 2 && phi.num()(x).is_zero()) roots.push_back(x);
    });
  }
  require(roots.size() >= 2, ErrorKind::RootsNotInField, "phi does not have two distinct roots in K");
  return monic_unit_reduction(phi, S, roots[0], roots[1]);
}

struct UnitSolution {
  FieldElement u1, u2;
};

/// All (u1, u2) in O_S'^* with u1 - u2 = gap and height(u1) <= H.
inline std::vector<UnitSolution> solve_unit_equation_box(const UnitEquationInstance& inst, long H, unsigned threads = 1) {
  require(!inst.gap.is_zero(), ErrorKind::RootsNotDistinct, "gap is zero");
  std::vector<UnitSolution> out;
  for (auto& u1 : s_units_up_to_height(inst.ext, H, threads)) {
    FieldElement u2 = u1 - inst.gap;
    if (is_s_unit(u2, inst.ext)) out.push_back({u1, u2});
  }
  return out;
}

inline Integer evertse_bound(long s_prime) {
  require(s_prime >= 1, ErrorKind::InvalidArgument, "s' must be >= 1");
  return ipow(Integer(256), static_cast<unsigned long>(s_prime));
}


struct UnitEquationCrossCheck {
  bool exact = false;  // degree 2 with S' = S: the two routes must give the same set
  std::vector<FieldElement> scan_betas, route_betas;
  std::vector<FieldElement> scan_values, route_values;
  std::size_t solutions = 0;  // unit-equation solutions with height(u1) <= route_height
  long route_height = 0;
  Integer ceiling;
  std::vector<std::string> problems;
  bool agree() const { return problems.empty(); }
};

/// Compares the image scan with the unit-equation route on the region
/// height(beta) <= H, witness by witness. Solutions are searched with
/// height(u1) <= 2 H height(delta1), which contains beta - delta1 for every
/// beta of the region.
inline UnitEquationCrossCheck cross_check_unit_equation(const UnitEquationInstance& inst, const ImageCount& scan,
                                                        unsigned threads = 1) {
  UnitEquationCrossCheck cc;
  const long H = scan.height_bound;
  const Integer hd = inst.delta1.height();
  const Integer route_h = Integer(2) * H * hd;
  require(route_h.fits_slong_p(), ErrorKind::Unsupported, "route height too large");
  cc.route_height = route_h.get_si();
  const auto sols = solve_unit_equation_box(inst, cc.route_height, threads);
  cc.solutions = sols.size();
  cc.ceiling = evertse_bound(inst.ext.s());
  if (Integer(std::to_string(cc.solutions)) > cc.ceiling) cc.problems.push_back("solution count exceeds 256^s'");
  const NumberField& K = inst.base.field();
  const bool extended = inst.extension_degree > 1;
  cc.exact = inst.phi.degree() == 2 && !extended;

  std::set<FieldElement, CanonicalLess> route, route_vals;
  std::size_t in_region = 0;
  for (auto& s : sols) {
    if (s.u1 - s.u2 != inst.gap) cc.problems.push_back("u1 - u2 != gap for u1 = " + s.u1.to_string());
    FieldElement beta = inst.back_map(s.u1);
    if (extended) {
      if (!beta.is_rational()) continue;
      beta = K.from_rational(beta.coords()[0]);
    }
    if (beta.height() > H) continue;
    ++in_region;
    route.insert(beta);
  }
  if (in_region != route.size()) cc.problems.push_back("two solutions map back to the same beta");
  for (auto& beta : route) {
    auto v = inst.base_phi(beta);
    if (v && is_s_unit(*v, inst.base)) {
      cc.route_betas.push_back(beta);
      route_vals.insert(*v);
    } else if (cc.exact) {
      cc.problems.push_back("route beta " + beta.to_string() + " has a non-unit value");
    }
  }
  cc.route_values.assign(route_vals.begin(), route_vals.end());
  for (auto& h : scan.hits) {
    cc.scan_betas.push_back(h.first);
    if (!route.count(h.first)) cc.problems.push_back("scan beta " + h.first.to_string() + " missing from the route");
  }
  cc.scan_values = scan.values;
  if (cc.route_betas != cc.scan_betas) cc.problems.push_back("witness lists differ");
  if (cc.route_values != cc.scan_values) cc.problems.push_back("value sets differ");
  return cc;
}

// ---------------------------------------------------------------------------
// prime selection and genus

/// Smallest prime p > d with (p - 1)(m - 2) > 2.
inline long select_prime(int d, int m) {
  require(d >= 2 && m >= 3, ErrorKind::InvalidArgument, "select_prime needs d >= 2 and m >= 3");
  long p = d + 1;
  while (!is_prime(Integer(p)) || (p - 1) * (m - 2) <= 2) ++p;
  if (d == 2 && m == 3) require(p == 5, ErrorKind::AssertionFailed, "expected p = 5 for (d, m) = (2, 3)");
  else require(p < 2 * d, ErrorKind::AssertionFailed, "expected p < 2d");
  return p;
}

inline long genus_of(long p, long m) {
  require(p >= 2 && m >= 2, ErrorKind::InvalidArgument, "genus_of needs p >= 2 and m >= 2");
  const long twice = (p - 1) * (m - 2);
  require(twice % 2 == 0, ErrorKind::InvalidArgument, "(p-1)(m-2) is odd");
  return twice / 2;
}

/// Twice the upper end of the genus range, (5d/2 - 1)(2d - 2).
inline long twice_genus_ceiling(int d) { return static_cast<long>(5 * d - 2) * (d - 1); }

// ---------------------------------------------------------------------------
// superelliptic twists

struct SuperellipticModel {
  std::size_t index = 0;
  unsigned p = 0;
  FieldElement gamma;
  RationalMap psi;
  int m = 0;
  long genus = 0;
  int max_multiplicity = 0;  // certificate: < p, so gamma psi is no p-th power in Kbar(z)
};

struct CurveBattery {
  PlaceSet S;
  CosetReps gamma;
  RationalMap psi;
  unsigned p = 0;
  bool prime_selected = false;  // p == select_prime(deg psi, m)
  std::vector<SuperellipticModel> models;
};

inline CurveBattery build_curves(const RationalMap& psi, const PlaceSet& S, unsigned p,
                                 const std::optional<UnitGroupData>& units = std::nullopt) {
  require_nonconstant(psi);
  const int d = psi.degree();
  require(static_cast<int>(p) > d, ErrorKind::PrimeTooSmall, "p must exceed deg psi");
  const int m = zero_pole_count(psi);
  require(m >= 2, ErrorKind::AssertionFailed, "a nonconstant map has m >= 2");
  CurveBattery bat;
  bat.S = S;
  bat.psi = psi;
  bat.p = p;
  bat.gamma = coset_reps(S, p, units);
  require(Integer(std::to_string(bat.gamma.reps.size())) <= ipow(Integer(p), static_cast<unsigned long>(S.s())),
          ErrorKind::AssertionFailed, "t > p^s");
  const long g = genus_of(p, m);
  const int mult = max_multiplicity(psi);
  require(mult < static_cast<int>(p), ErrorKind::AssertionFailed, "multiplicity bound fails");
  if (d >= 2 && m >= 3 && select_prime(d, m) == static_cast<long>(p)) {
    bat.prime_selected = true;
    require(g >= 2 && 2 * g <= twice_genus_ceiling(d), ErrorKind::AssertionFailed, "genus outside the proved range");
  }
  for (std::size_t i = 0; i < bat.gamma.reps.size(); ++i)
    bat.models.push_back({i, p, bat.gamma.reps[i], psi, m, g, mult});
  return bat;
}

struct CurvePoint {
  FieldElement z, y;
};

inline bool on_curve(const SuperellipticModel& model, const CurvePoint& pt) {
  auto v = model.psi(pt.z);
  return v && !pt.y.is_zero() && pt.y.pow(static_cast<long>(model.p)) == model.gamma * *v;
}

/// The point (beta, delta) on the unique twist containing beta, where
/// psi(beta) = gamma_i^-1 delta^p.
inline std::pair<std::size_t, CurvePoint> map_sunit_to_curve(const FieldElement& beta, const CurveBattery& bat) {
  auto v = bat.psi(beta);
  require(v && is_s_unit(*v, bat.S), ErrorKind::NotSUnitValue, "psi(" + beta.to_string() + ") is not an S-unit");
  PowerClass pc = decompose_power_class(*v, bat.gamma, bat.S);
  CurvePoint pt{beta, pc.delta};
  require(on_curve(bat.models[pc.index], pt), ErrorKind::AssertionFailed, "mapped point is not on its curve");
  return {pc.index, pt};
}

/// Points with y != 0 and height(z) <= H on one twist, straight from the
/// definition: an exact p-th root of gamma psi(z) for every z in the box.
inline std::vector<CurvePoint> curve_point_search(const SuperellipticModel& model, long H, unsigned threads = 1) {
  const NumberField& K = model.psi.field();
  auto parts = run_sharded<std::vector<CurvePoint>>(threads, [&](BoxShard shard, std::vector<CurvePoint>& local) {
    for_each_in_box(K, H, shard, [&](const FieldElement& z) {
      auto v = model.psi(z);
      if (!v || v->is_zero()) return;
      if (auto y = pth_root(model.gamma * *v, model.p)) local.push_back({z, *y});
    });
  });
  std::vector<CurvePoint> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return canonical_less(a.z, b.z); });
  return out;
}

/// curve_point_search for every model in one pass over the box; over Q the
/// twist containing z is read off the S-exponent vector of psi(z).
inline std::vector<std::vector<CurvePoint>> curve_point_search_all(const CurveBattery& bat, long H, unsigned threads = 1) {
  std::vector<std::vector<CurvePoint>> out(bat.models.size());
  const NumberField& K = bat.psi.field();
  if (K.is_rationals()) {
    for (auto& h : qscan::curve_hits_all_models(bat.psi, bat.gamma, bat.S.rational_primes(), H, threads))
      out[h.model].push_back({K.from_rational(h.z), K.from_rational(h.y)});
    return out;
  }
  for (std::size_t i = 0; i < bat.models.size(); ++i) out[i] = curve_point_search(bat.models[i], H, threads);
  return out;
}

// ---------------------------------------------------------------------------
// explicit families

struct FamilyMember {
  FieldElement u;         // the S'-unit fed through mu^-1
  FieldElement preimage;  // beta with phi(beta) = value
  FieldElement value;     // gamma u^(+-d)
};

struct InfiniteFamily {
  GammaMuD shape;
  PlaceSet S_prime;
  Integer generator;  // rational prime all of whose places lie in S'
  std::vector<FamilyMember> members;
};

/// N distinct elements of phi(K) in O_S'^* for phi = gamma mu^(+-d).
inline InfiniteFamily infinite_family(const RationalMap& phi, const PlaceSet& S, int N) {
  require(N >= 1, ErrorKind::InvalidArgument, "N must be >= 1");
  InfiniteFamily fam;
  try {
    fam.shape = decompose_gamma_mu_d(phi);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotTotallyRamifiedShape) fail(ErrorKind::ShapeMismatch, e.what());
    throw;
  }
  const NumberField& K = phi.field();
  fam.S_prime = S.united(support(fam.shape.gamma));
  std::optional<Integer> gen;
  for (auto& q : fam.S_prime.rational_primes())
    if (fam.S_prime.covers_prime(q)) {
      gen = q;
      break;
    }
  if (!gen || fam.S_prime.s() == 1) {
    Integer q = 2;
    const auto& used = fam.S_prime.rational_primes();
    while (std::find(used.begin(), used.end(), q) != used.end()) q = next_prime(q);
    fam.S_prime = fam.S_prime.united(K.primes_above(q));
    if (!gen) gen = q;
  }
  fam.generator = *gen;
  const RationalMap inv = mobius_inverse(fam.shape.mu);
  const FieldElement q = K.from_rational(Rational(*gen));
  std::set<FieldElement, CanonicalLess> seen;
  for (long j = 0; static_cast<int>(fam.members.size()) < N; ++j) {
    FieldElement u = q.pow(j);
    auto beta = inv(u);
    if (!beta) continue;  // u = 1 when mu has a finite pole
    FieldElement value = fam.shape.gamma * u.pow(fam.shape.exponent);
    auto check = phi(*beta);
    require(check && *check == value, ErrorKind::AssertionFailed, "preimage does not map to the family element");
    require(is_s_unit(value, fam.S_prime), ErrorKind::AssertionFailed, "family element is not an S'-unit");
    require(seen.insert(value).second, ErrorKind::AssertionFailed, "family elements repeat");
    fam.members.push_back({u, *beta, value});
  }
  return fam;
}

inline std::optional<int> root_of_unity_order(const FieldElement& x) {
  if (x.is_zero()) return std::nullopt;
  const int n = x.field().degree();
  const int bound = 6 * n * n + 6;
  FieldElement acc = x;
  for (int k = 1; k <= bound; ++k) {
    if (acc == x.field().one()) return k;
    acc = acc * x;
  }
  return std::nullopt;
}

struct PowerMapFamily {
  RationalMap phi;
  PlaceSet S;
  OrbitRecord orbit;
  bool all_units = false;
  std::optional<int> torsion_order;  // alpha is a root of unity: the orbit is finite
};

/// For phi = beta z^(+-d): S = S_inf + supp(alpha) + supp(beta) contains the
/// whole orbit of alpha; verifies the first N points.
inline PowerMapFamily power_map_family(const FieldElement& beta, int exponent, const FieldElement& alpha, int N,
                                       const std::optional<Integer>& hcap = std::nullopt) {
  require(!beta.is_zero() && !alpha.is_zero(), ErrorKind::InvalidArgument, "beta and alpha must be nonzero");
  require(std::abs(exponent) >= 2, ErrorKind::InvalidArgument, "need d >= 2");
  const NumberField& K = beta.field();
  PowerMapFamily fam;
  const unsigned d = static_cast<unsigned>(std::abs(exponent));
  KPoly zd = pow(kpoly_z(K), d);
  fam.phi = exponent > 0 ? RationalMap::create(zd.scaled(beta), KPoly::constant(K.one()))
                         : RationalMap::create(KPoly::constant(beta), zd);
  std::vector<PrimePlace> places = support(alpha);
  for (auto& P : support(beta)) places.push_back(P);
  std::sort(places.begin(), places.end());
  places.erase(std::unique(places.begin(), places.end()), places.end());
  fam.S = PlaceSet(K, places);
  fam.orbit = orbit(fam.phi, ProjPoint::finite(alpha), N, hcap);
  fam.all_units = std::all_of(fam.orbit.points.begin(), fam.orbit.points.end(),
                              [&](const ProjPoint& P) { return !P.is_infinity() && is_s_unit(P.value(), fam.S); });
  fam.torsion_order = root_of_unity_order(alpha);
  return fam;
}

}  // namespace sunits
