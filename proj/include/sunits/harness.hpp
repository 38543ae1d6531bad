#pragma once

// Experiment configuration, the experiment drivers behind the CLI, the
// interpolation construction, and JSON/CSV report emission.

#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sunits/dynamics.hpp"
#include "sunits/escape.hpp"
#include "sunits/places.hpp"
#include "sunits/reductions.hpp"

namespace sunits {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// interpolation

/// Monic phi of degree k + 2 with phi(c_j) = c_{j+1} for j < k and
/// phi(r1) = phi(r2) = 0: the Lagrange interpolant through those k + 2 nodes
/// plus the product of (z - node).
inline KPoly interpolation_construct(const std::vector<FieldElement>& c, const FieldElement& r1, const FieldElement& r2) {
  require(c.size() >= 2, ErrorKind::InvalidArgument, "need at least two chain values");
  const NumberField& K = c.front().field();
  std::vector<FieldElement> all = c;
  all.push_back(r1);
  all.push_back(r2);
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      require(all[i] != all[j], ErrorKind::DuplicateNodes, "repeated value " + all[i].to_string());
  std::vector<FieldElement> xs(c.begin(), c.end() - 1), ys(c.begin() + 1, c.end());
  xs.push_back(r1);
  ys.push_back(K.zero());
  xs.push_back(r2);
  ys.push_back(K.zero());
  KPoly lagrange, vanish = KPoly::constant(K.one());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    vanish = vanish * KPoly::linear_root(xs[i]);
    if (ys[i].is_zero()) continue;
    KPoly basis = KPoly::constant(K.one());
    FieldElement denom = K.one();
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (j == i) continue;
      basis = basis * KPoly::linear_root(xs[j]);
      denom = denom * (xs[i] - xs[j]);
    }
    lagrange = lagrange + basis.scaled(ys[i] / denom);
  }
  KPoly phi = lagrange + vanish;
  for (std::size_t i = 0; i < xs.size(); ++i)
    require(phi(xs[i]) == ys[i], ErrorKind::AssertionFailed, "interpolant misses node " + xs[i].to_string());
  return phi;
}

/// The two smallest positive integers not among the chain values.
inline std::pair<FieldElement, FieldElement> default_extra_roots(const std::vector<FieldElement>& c) {
  const NumberField& K = c.front().field();
  std::vector<FieldElement> out;
  for (long k = 1; out.size() < 2; ++k) {
    FieldElement x = K.from_int(k);
    if (std::find(c.begin(), c.end(), x) == c.end()) out.push_back(x);
  }
  return {out[0], out[1]};
}

// ---------------------------------------------------------------------------
// JSON <-> library values

inline json element_json(const FieldElement& x) {
  if (x.degree() == 1) return to_string(x.coords()[0]);
  json a = json::array();
  for (auto& s : x.to_strings()) a.push_back(s);
  return a;
}

inline json point_json(const ProjPoint& P) { return P.is_infinity() ? json("inf") : element_json(P.value()); }

inline json poly_json(const KPoly& p) {
  json a = json::array();
  for (auto& c : p.coeffs()) a.push_back(element_json(c));
  return a;
}

inline json map_json(const RationalMap& phi) {
  return json{{"num", poly_json(phi.num())}, {"den", poly_json(phi.den())}, {"text", phi.to_string()}};
}

inline json places_json(const PlaceSet& S) {
  json a = json::array();
  for (auto& P : S.finite_places())
    a.push_back(json{{"p", P.p.get_str()}, {"factor_index", P.index}, {"e", P.e}, {"f", P.f}, {"label", P.label()}});
  return json{{"archimedean", S.archimedean_count()}, {"finite", a}, {"s", S.s()}};
}

namespace detail {

inline Rational json_rational(const json& j) {
  if (j.is_number_integer()) return Rational(Integer(j.get<long>()));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  fail(ErrorKind::ConfigError, "expected a rational, got " + j.dump());
}

inline Integer json_integer(const json& j) {
  Rational q = json_rational(j);
  require(q.get_den() == 1, ErrorKind::ConfigError, "expected an integer, got " + j.dump());
  return q.get_num();
}

}  // namespace detail

/// "a/b", an integer, an array of coordinates, or "inf" is not allowed here.
inline FieldElement parse_element(const NumberField& K, const json& j) {
  if (j.is_array()) {
    require(static_cast<int>(j.size()) <= K.degree(), ErrorKind::ConfigError, "element has too many coordinates");
    std::vector<Rational> c;
    for (auto& x : j) c.push_back(detail::json_rational(x));
    return K.element(std::move(c));
  }
  return K.from_rational(detail::json_rational(j));
}

inline ProjPoint parse_point(const NumberField& K, const json& j) {
  if (j.is_string() && (j == "inf" || j == "infinity")) return ProjPoint::infinity(K);
  return ProjPoint::finite(parse_element(K, j));
}

inline std::vector<FieldElement> parse_elements(const NumberField& K, const json& j) {
  require(j.is_array(), ErrorKind::ConfigError, "expected an array of elements");
  std::vector<FieldElement> out;
  for (auto& x : j) out.push_back(parse_element(K, x));
  return out;
}

inline KPoly parse_poly(const NumberField& K, const json& j) {
  require(j.is_array() && !j.empty(), ErrorKind::ConfigError, "expected a coefficient array");
  return KPoly(parse_elements(K, j));
}

inline NumberField parse_field(const json& j) {
  if (j.is_null()) return NumberField::rationals();
  require(j.is_object() && j.contains("poly"), ErrorKind::ConfigError, "field needs a \"poly\" array");
  std::vector<Integer> f;
  for (auto& c : j["poly"]) f.push_back(detail::json_integer(c));
  return NumberField::create(f, j.value("assert_monogenic", false));
}

/// {"primes": [{"p": 2, "factor_index": 0}, {"p": 3}]}; without factor_index
/// every place above p is taken.
inline PlaceSet parse_places(const NumberField& K, const json& j) {
  if (j.is_null()) return PlaceSet::archimedean(K);
  require(j.is_object(), ErrorKind::ConfigError, "places must be an object");
  std::vector<PrimePlace> out;
  for (auto& e : j.value("primes", json::array())) {
    Integer p = detail::json_integer(e.at("p"));
    require(is_prime(p), ErrorKind::ConfigError, p.get_str() + " is not prime");
    const auto& above = K.primes_above(p);
    if (e.contains("factor_index")) {
      int idx = e["factor_index"].get<int>();
      require(idx >= 0 && idx < static_cast<int>(above.size()), ErrorKind::ConfigError,
              "factor_index out of range for p = " + p.get_str());
      out.push_back(above[static_cast<std::size_t>(idx)]);
    } else {
      out.insert(out.end(), above.begin(), above.end());
    }
  }
  return PlaceSet(K, out);
}

inline std::optional<UnitGroupData> parse_units(const NumberField& K, const json& j) {
  if (j.is_null()) return std::nullopt;
  UnitGroupData u;
  u.torsion_generator = parse_element(K, j.at("torsion"));
  u.free_generators = parse_elements(K, j.value("free", json::array()));
  return u;
}

inline RationalMap parse_map(const NumberField& K, const json& j) {
  require(j.is_object() && j.contains("num"), ErrorKind::ConfigError, "map needs a \"num\" array");
  KPoly num = parse_poly(K, j["num"]);
  KPoly den = j.contains("den") ? parse_poly(K, j["den"]) : KPoly::constant(K.one());
  return RationalMap::create(num, den);
}

// ---------------------------------------------------------------------------

struct Overrides {
  std::optional<long> height;
  std::optional<int> steps;
  std::optional<unsigned> threads;
};

struct Config {
  json raw;
  NumberField K;
  PlaceSet S;
  std::optional<UnitGroupData> units;
  std::optional<RationalMap> map;
  long height = 1000;
  int steps = 15;
  Integer height_cap = default_height_cap();
  unsigned threads = 1;

  const RationalMap& need_map() const {
    require(map.has_value(), ErrorKind::ConfigError, "config has no \"map\"");
    return *map;
  }
};

inline Config load_config(const json& j, const Overrides& o = {}) {
  require(j.is_object(), ErrorKind::ConfigError, "config must be a JSON object");
  Config c;
  c.raw = j;
  c.K = parse_field(j.value("field", json()));
  c.S = parse_places(c.K, j.value("places", json()));
  c.units = parse_units(c.K, j.value("units", json()));
  if (j.contains("map")) c.map = parse_map(c.K, j["map"]);
  c.height = o.height.value_or(j.value("height", 1000L));
  c.steps = o.steps.value_or(j.value("steps", 15));
  c.threads = o.threads.value_or(j.value("threads", 1u));
  if (j.contains("height_cap")) {
    const auto& hc = j["height_cap"];
    if (hc.is_string() && hc.get<std::string>().rfind("10^", 0) == 0)
      c.height_cap = ipow(Integer(10), std::stoul(hc.get<std::string>().substr(3)));
    else
      c.height_cap = detail::json_integer(hc);
  }
  require(c.height >= 1, ErrorKind::ConfigError, "height must be >= 1");
  require(c.steps >= 1, ErrorKind::ConfigError, "steps must be >= 1");
  return c;
}

inline Config load_config_file(const std::string& path, const Overrides& o = {}) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::ConfigError, "cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::ConfigError, std::string("malformed JSON: ") + e.what());
  }
  return load_config(j, o);
}

// ---------------------------------------------------------------------------
// reports

inline json new_report(const std::string& pipeline, const Config& c) {
  json r;
  r["pipeline"] = pipeline;
  r["count"] = 0;
  r["witnesses"] = json::array();
  r["ceiling"] = nullptr;
  r["height_bound"] = nullptr;
  r["truncated"] = true;
  r["warnings"] = json::array();
  for (auto& w : c.K.warnings()) r["warnings"].push_back(w);
  r["inputs"] = c.raw;
  return r;
}

/// The report without run-dependent keys; equal configs give equal bodies.
inline json comparable_body(json report) {
  report.erase("timing");
  return report;
}

inline std::string csv_cell(const json& v) {
  std::string s;
  if (v.is_string()) s = v.get<std::string>();
  else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + csv_cell(v[i]);
  } else s = v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  return s;
}

/// Witness table as CSV; columns are the keys of the first witness.
inline std::string witnesses_csv(const json& report) {
  std::ostringstream out;
  const json& w = report.at("witnesses");
  if (w.empty()) return "";
  std::vector<std::string> cols;
  for (auto& [k, v] : w[0].items()) cols.push_back(k);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  for (auto& row : w) {
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << (row.contains(cols[i]) ? csv_cell(row[cols[i]]) : "");
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// experiments

inline json certificate_json(const EscapeCertificate& c) {
  json h = json::array();
  for (auto& x : c.hypotheses) h.push_back(json{{"clause", x.clause}, {"witness", x.witness}});
  json m = json::array();
  for (auto& [i, v] : c.margins) m.push_back(json{{"i", i}, {"margin", v}});
  return json{{"kind", c.kind},
              {"map", map_json(c.phi)},
              {"place", json{{"p", c.place.p.get_str()}, {"factor_index", c.place.index}, {"label", c.place.label()}}},
              {"base_valuation", c.base_valuation},
              {"growth_exponent", c.growth_exponent},
              {"growth_law", "v_1 = " + std::to_string(c.base_valuation) + ", v_{n+1} = " + std::to_string(c.multiplier) +
                                 " v_n + " + std::to_string(c.offset)},
              {"exceptional_index", c.exceptional_index},
              {"hypotheses", h},
              {"margins", m},
              {"dictionary", "|x|_v > 1 iff v(x) < 0"},
              {"conclusion", c.conclusion}};
}

/// phi = phi0 + beta z^i with phi0 monic over O_S and exactly one
/// coefficient (index <= d - 2) outside O_S.
inline std::optional<EscapeCertificate> find_unicritical(const RationalMap& phi, const PlaceSet& S) {
  if (!phi.is_polynomial() || phi.degree() < 2) return std::nullopt;
  const KPoly& f = phi.num();
  const NumberField& K = phi.field();
  int bad = -1;
  for (int k = 0; k <= f.degree(); ++k) {
    if (is_s_integer(f[static_cast<std::size_t>(k)], S)) continue;
    if (bad >= 0) return std::nullopt;
    bad = k;
  }
  if (bad < 0 || bad > f.degree() - 2) return std::nullopt;
  std::vector<FieldElement> c = f.coeffs();
  FieldElement beta = c[static_cast<std::size_t>(bad)];
  c[static_cast<std::size_t>(bad)] = K.zero();
  try {
    return unicritical_certificate(KPoly(c), beta, bad, S);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::HypothesisFailed) return std::nullopt;
    throw;
  }
}

inline std::optional<EscapeCertificate> find_certificate(const RationalMap& phi, const PlaceSet& S) {
  if (auto c = find_unicritical(phi, S)) return c;
  try {
    return laurent_escape_certificate(phi, S);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::HypothesisFailed) return std::nullopt;
    throw;
  }
}

/// Image count |phi(K) cap O_S^*| on a height box, with the unit-equation and curve
/// pipelines run on the same region when they apply.
inline json image_count_experiment(const Config& c) {
  const RationalMap& phi = c.need_map();
  json r = new_report("image-count", c);
  const int d = phi.degree();
  if (d >= 2 && is_kth_power(phi, d)) r["warnings"].push_back("d-th power hypothesis violated");
  ImageCount scan = count_image_sunits_box(phi, c.S, c.height, c.threads);
  r["count"] = scan.count();
  r["height_bound"] = c.height;
  for (auto& [beta, v] : scan.hits) r["witnesses"].push_back(json{{"beta", element_json(beta)}, {"value", element_json(v)}});
  r["values"] = json::array();
  for (auto& v : scan.values) r["values"].push_back(element_json(v));
  json table = json::array();
  table.push_back(json{{"pipeline", "image scan"}, {"values", scan.count()}, {"witnesses", scan.hits.size()}});

  if (is_monic_over_os(phi, c.S) && d >= 2) {
    try {
      UnitEquationInstance inst = monic_unit_reduction(phi, c.S);
      UnitEquationCrossCheck cc = cross_check_unit_equation(inst, scan, c.threads);
      r["ceiling"] = cc.ceiling.get_str();
      json problems = json::array();
      for (auto& p : cc.problems) problems.push_back(p);
      r["unit_equation"] = json{{"delta1", element_json(inst.delta1)},
                                {"delta2", element_json(inst.delta2)},
                                {"s_prime", inst.ext.s()},
                                {"route_height", cc.route_height},
                                {"solutions", cc.solutions},
                                {"exact_comparison", cc.exact},
                                {"agree", cc.agree()},
                                {"problems", problems}};
      table.push_back(json{{"pipeline", "unit equation"}, {"values", cc.route_values.size()}, {"witnesses", cc.route_betas.size()}});
      if (!cc.agree()) r["warnings"].push_back("unit-equation route disagrees with the image scan");
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::RootsNotInField) throw;
      r["warnings"].push_back(std::string("unit-equation route skipped: ") + e.what());
    }
  }
  const int m = zero_pole_count(phi);
  if (d >= 2 && m >= 3 && (c.K.is_rationals() || c.units)) {
    const long p = select_prime(d, m);
    CurveBattery bat = build_curves(phi, c.S, static_cast<unsigned>(p), c.units);
    auto pts = curve_point_search_all(bat, c.height, c.threads);
    std::size_t total = 0;
    for (auto& v : pts) total += v.size();
    r["curves"] = json{{"p", p}, {"m", m}, {"genus", genus_of(p, m)}, {"models", bat.models.size()}, {"points", total}};
    table.push_back(json{{"pipeline", "curve twists"}, {"points", total}, {"models", bat.models.size()}});
    if (total < scan.count()) r["warnings"].push_back("curve points fewer than image values");
  }
  r["comparison"] = table;
  return r;
}

/// Orbit count |O_phi(alpha) cap O_S^*|. Shapes beta z^{+-d} go to the power
/// map family instead.
inline json orbit_count_experiment(const Config& c) {
  const RationalMap& phi = c.need_map();
  require(c.raw.contains("alpha"), ErrorKind::ConfigError, "orbit-count needs \"alpha\"");
  const ProjPoint alpha = parse_point(c.K, c.raw["alpha"]);
  json r = new_report("orbit-count", c);
  r["height_bound"] = c.height_cap.get_str();
  r["steps"] = c.steps;
  r["counts_exclude_alpha"] = true;
  if (auto shape = is_beta_z_pm_d(phi); shape && !alpha.is_infinity() && !alpha.value().is_zero()) {
    const int e = shape->sign * phi.degree();
    if (phi.degree() >= 2) {
      PowerMapFamily fam = power_map_family(shape->beta, e, alpha.value(), c.steps, c.height_cap);
      r["routed_to"] = "power-map family";
      r["family_places"] = places_json(fam.S);
      r["all_units"] = fam.all_units;
      r["torsion_order"] = fam.torsion_order ? json(*fam.torsion_order) : json(nullptr);
      for (std::size_t k = 0; k < fam.orbit.points.size(); ++k)
        r["witnesses"].push_back(json{{"n", k + 1}, {"value", point_json(fam.orbit.points[k])}});
      r["count"] = orbit_sunit_values(fam.orbit, fam.S).size();
      r["truncated"] = fam.orbit.reason != Truncation::EnteredCycle;
      r["truncation"] = to_string(fam.orbit.reason);
      return r;
    }
  }
  OrbitRecord rec = orbit(phi, alpha, c.steps, c.height_cap);
  std::set<FieldElement, CanonicalLess> seen;
  for (std::size_t k = 0; k < rec.points.size(); ++k) {
    const ProjPoint& P = rec.points[k];
    if (P.is_infinity() || !is_s_unit(P.value(), c.S)) continue;
    if (!seen.insert(P.value()).second) continue;
    r["witnesses"].push_back(json{{"n", k + 1}, {"value", point_json(P)}});
  }
  r["count"] = seen.size();
  r["truncated"] = rec.reason != Truncation::EnteredCycle;
  r["truncation"] = to_string(rec.reason);
  r["orbit_length"] = rec.points.size();
  r["cycle_entry"] = rec.cycle_entry ? json(*rec.cycle_entry) : json(nullptr);
  if (auto cert = find_certificate(phi, c.S)) {
    r["certificate"] = certificate_json(*cert);
    r["ceiling"] = 1;
    const bool covered = !seen.empty() || (!alpha.is_infinity() && is_s_unit(alpha.value(), c.S));
    r["certificate_covers_orbit"] = covered;
    if (seen.size() > 1) fail(ErrorKind::AssertionFailed, "certified map has two S-unit values in one orbit");
  }
  return r;
}

inline json unit_eq_experiment(const Config& c) {
  const RationalMap& phi = c.need_map();
  json r = new_report("unit-eq", c);
  UnitEquationInstance inst = [&] {
    if (c.raw.contains("extension")) {
      const json& e = c.raw["extension"];
      ExtensionData ext;
      for (auto& x : e.at("poly")) ext.poly.push_back(detail::json_integer(x));
      for (auto& x : e.at("delta1")) ext.delta1.push_back(detail::json_rational(x));
      for (auto& x : e.at("delta2")) ext.delta2.push_back(detail::json_rational(x));
      ext.assert_monogenic = e.value("assert_monogenic", false);
      return monic_unit_reduction(phi, c.S, c.K.zero(), c.K.one(), ext);
    }
    if (c.raw.contains("roots")) {
      auto rs = parse_elements(c.K, c.raw["roots"]);
      require(rs.size() == 2, ErrorKind::ConfigError, "\"roots\" needs two elements");
      return monic_unit_reduction(phi, c.S, rs[0], rs[1]);
    }
    return monic_unit_reduction(phi, c.S);
  }();
  auto sols = solve_unit_equation_box(inst, c.height, c.threads);
  r["count"] = sols.size();
  r["height_bound"] = c.height;
  r["ceiling"] = evertse_bound(inst.ext.s()).get_str();
  r["gap"] = element_json(inst.gap);
  r["extension_degree"] = inst.extension_degree;
  r["places_extended"] = places_json(inst.ext);
  for (auto& s : sols) r["witnesses"].push_back(json{{"u1", element_json(s.u1)}, {"u2", element_json(s.u2)}});
  if (Integer(std::to_string(sols.size())) > evertse_bound(inst.ext.s()))
    fail(ErrorKind::AssertionFailed, "unit-equation solutions exceed 256^s'");
  return r;
}

inline json curves_experiment(const Config& c) {
  const RationalMap& psi = c.need_map();
  json r = new_report("curves", c);
  const int d = psi.degree(), m = zero_pole_count(psi);
  long p = c.raw.contains("p") ? c.raw["p"].get<long>() : 0;
  if (p == 0) {
    require(d >= 2 && m >= 3, ErrorKind::ConfigError, "give \"p\" when deg psi < 2 or m < 3");
    p = select_prime(d, m);
  }
  CurveBattery bat = build_curves(psi, c.S, static_cast<unsigned>(p), c.units);
  auto pts = curve_point_search_all(bat, c.height, c.threads);
  r["height_bound"] = c.height;
  r["ceiling"] = ipow(Integer(p), static_cast<unsigned long>(c.S.s())).get_str();
  r["p"] = p;
  r["m"] = m;
  r["genus"] = genus_of(p, m);
  r["prime_selected"] = bat.prime_selected;
  r["t"] = bat.models.size();
  json models = json::array();
  std::size_t total = 0;
  for (std::size_t i = 0; i < bat.models.size(); ++i) {
    const auto& mdl = bat.models[i];
    models.push_back(json{{"index", i}, {"gamma", element_json(mdl.gamma)}, {"genus", mdl.genus}, {"max_multiplicity", mdl.max_multiplicity},
                          {"points", pts[i].size()}});
    for (auto& pt : pts[i]) r["witnesses"].push_back(json{{"model", i}, {"z", element_json(pt.z)}, {"y", element_json(pt.y)}});
    total += pts[i].size();
  }
  r["models"] = models;
  r["count"] = total;
  return r;
}

inline json escape_cert_experiment(const Config& c) {
  json r = new_report("escape-cert", c);
  EscapeCertificate cert;
  const std::string kind = c.raw.value("kind", std::string("unicritical"));
  if (kind == "unicritical") {
    require(c.raw.contains("phi0") && c.raw.contains("beta"), ErrorKind::ConfigError, "unicritical needs phi0 and beta");
    cert = unicritical_certificate(parse_poly(c.K, c.raw["phi0"]), parse_element(c.K, c.raw["beta"]), c.raw.value("i", 0), c.S);
  } else if (kind == "laurent") {
    cert = laurent_escape_certificate(c.need_map(), c.S);
  } else {
    fail(ErrorKind::ConfigError, "unknown certificate kind " + kind);
  }
  r["certificate"] = certificate_json(cert);
  r["ceiling"] = 1;
  const FieldElement gamma = c.raw.contains("gamma") ? parse_element(c.K, c.raw["gamma"]) : c.K.one();
  const int N = std::min(c.steps, 12);
  Trajectory t = verify_valuation_growth(cert, gamma, N);
  for (std::size_t n = 0; n < t.valuations.size(); ++n)
    r["witnesses"].push_back(json{{"n", n + 1}, {"valuation", t.valuations[n]}, {"expected", t.expected[n]}});
  r["count"] = t.valuations.size();
  r["height_bound"] = nullptr;
  // oracle: orbit scans from S-unit starts
  std::mt19937_64 rng(c.raw.value("seed", 20240611ull));
  auto starts = s_units_up_to_height(c.S, c.raw.value("start_height", 30L), c.threads);
  const int samples = c.raw.value("samples", 50);
  std::size_t worst = 0;
  for (int k = 0; k < samples; ++k) {
    const FieldElement& u = starts[rng() % starts.size()];
    auto chk = check_certificate_on_orbit(cert, ProjPoint::finite(u), c.steps, c.height_cap);
    worst = std::max(worst, chk.unit_values);
  }
  r["oracle"] = json{{"starts", samples}, {"max_unit_values_per_orbit", worst}};
  if (worst > 1) fail(ErrorKind::AssertionFailed, "certified orbit met two S-units");
  return r;
}

inline json families_experiment(const Config& c) {
  json r = new_report("families", c);
  const std::string kind = c.raw.value("family", std::string("infinite"));
  const int N = c.raw.value("count", 20);
  if (kind == "infinite") {
    InfiniteFamily fam = infinite_family(c.need_map(), c.S, N);
    r["gamma"] = element_json(fam.shape.gamma);
    r["mu"] = map_json(fam.shape.mu);
    r["exponent"] = fam.shape.exponent;
    r["places_extended"] = places_json(fam.S_prime);
    r["generator"] = fam.generator.get_str();
    for (auto& m : fam.members)
      r["witnesses"].push_back(json{{"u", element_json(m.u)}, {"preimage", element_json(m.preimage)}, {"value", element_json(m.value)}});
    r["count"] = fam.members.size();
  } else if (kind == "power") {
    const FieldElement beta = parse_element(c.K, c.raw.at("beta"));
    const int e = c.raw.value("exponent", 2);
    const FieldElement alpha = parse_element(c.K, c.raw.at("alpha"));
    PowerMapFamily fam = power_map_family(beta, e, alpha, N);
    r["map"] = map_json(fam.phi);
    r["places"] = places_json(fam.S);
    r["all_units"] = fam.all_units;
    r["torsion_order"] = fam.torsion_order ? json(*fam.torsion_order) : json(nullptr);
    for (std::size_t k = 0; k < fam.orbit.points.size(); ++k)
      r["witnesses"].push_back(json{{"n", k + 1}, {"value", point_json(fam.orbit.points[k])}});
    r["count"] = fam.orbit.points.size();
    if (!fam.all_units) fail(ErrorKind::AssertionFailed, "power-map orbit left O_S^*");
  } else {
    fail(ErrorKind::ConfigError, "unknown family " + kind);
  }
  return r;
}

inline json interpolate_experiment(const Config& c) {
  json r = new_report("interpolate", c);
  require(c.raw.contains("values"), ErrorKind::ConfigError, "interpolate needs \"values\"");
  auto vals = parse_elements(c.K, c.raw["values"]);
  auto roots = default_extra_roots(vals);
  if (c.raw.contains("extra_roots")) {
    auto rs = parse_elements(c.K, c.raw["extra_roots"]);
    require(rs.size() == 2, ErrorKind::ConfigError, "\"extra_roots\" needs two elements");
    roots = {rs[0], rs[1]};
  }
  KPoly phi = interpolation_construct(vals, roots.first, roots.second);
  RationalMap map = RationalMap::polynomial(phi);
  r["polynomial"] = poly_json(phi);
  r["text"] = map.to_string();
  r["degree"] = phi.degree();
  r["extra_roots"] = json::array({element_json(roots.first), element_json(roots.second)});
  r["monomial_shape"] = is_beta_z_pm_d(map).has_value();
  for (std::size_t j = 0; j + 1 < vals.size(); ++j)
    r["witnesses"].push_back(json{{"z", element_json(vals[j])}, {"phi(z)", element_json(phi(vals[j]))}});
  for (auto& x : {roots.first, roots.second}) r["witnesses"].push_back(json{{"z", element_json(x)}, {"phi(z)", element_json(phi(x))}});
  r["count"] = r["witnesses"].size();
  r["truncated"] = false;
  return r;
}

}  // namespace sunits
