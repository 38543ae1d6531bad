#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "sunits/harness.hpp"
#include "sunits/suites.hpp"

using namespace sunits;

namespace {

const NumberField& Q() {
  static const NumberField K = NumberField::rationals();
  return K;
}

FieldElement q(const Rational& x) { return Q().from_rational(x); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Unsupported;
}

json cfg(const char* text) { return json::parse(text); }

}  // namespace

TEST(Config, Defaults) {
  auto c = load_config(cfg(R"({"map": {"num": ["0", "-1", "1"]}})"));
  EXPECT_TRUE(c.K.is_rationals());
  EXPECT_EQ(c.S.s(), 1);
  EXPECT_EQ(c.height, 1000);
  EXPECT_EQ(c.steps, 15);
  EXPECT_EQ(c.height_cap, ipow(Integer(10), 80));
  EXPECT_EQ(c.need_map().to_string(), RationalMap::from_rationals(Q(), {0, -1, 1}).to_string());
}

TEST(Config, OverridesAndFields) {
  auto j = cfg(R"({"field": {"poly": ["1", "0", "1"]}, "places": {"primes": [{"p": 5, "factor_index": 1}]},
                   "map": {"num": [["0","0"], ["1","0"], ["1","0"]], "den": [["0","1"]]}, "height": 20, "height_cap": "10^9"})");
  auto c = load_config(j, Overrides{50L, 3, 2u});
  EXPECT_EQ(c.K.degree(), 2);
  EXPECT_EQ(c.S.s(), 2);
  EXPECT_EQ(c.height, 50);
  EXPECT_EQ(c.steps, 3);
  EXPECT_EQ(c.threads, 2u);
  EXPECT_EQ(c.height_cap, Integer(1000000000));
  EXPECT_EQ(c.need_map().degree(), 2);
}

TEST(Config, Errors) {
  EXPECT_EQ(kind_of([] { load_config(cfg("[1, 2]")); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { load_config(cfg(R"({"height": 0})")); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { load_config(cfg(R"({})")).need_map(); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { load_config_file("/nonexistent/config.json"); }), ErrorKind::ConfigError);
  const std::string path = testing::TempDir() + "bad_config.json";
  std::ofstream(path) << "{ not json";
  EXPECT_EQ(kind_of([&] { load_config_file(path); }), ErrorKind::ConfigError);
  std::remove(path.c_str());
  EXPECT_EQ(kind_of([] { load_config(cfg(R"({"field": {"poly": ["1", "0", "2"]}})")); }), ErrorKind::NotMonic);
  EXPECT_EQ(kind_of([] { orbit_count_experiment(load_config(cfg(R"({"map": {"num": ["0", "0", "1"]}})"))); }),
            ErrorKind::ConfigError);
}

TEST(Interpolation, CubicExample) {
  auto phi = interpolation_construct({q(1), q(2)}, q(5), q(7));
  // (z - 5)(z - 7)(z - 11/12) from the Lagrange form by hand
  EXPECT_EQ(phi, kpoly(Q(), {Rational(-385, 12), 46, Rational(-155, 12), 1}));
  EXPECT_EQ(phi(q(1)), q(2));
  EXPECT_EQ(phi(q(5)), q(0));
  EXPECT_EQ(phi(q(7)), q(0));
}

TEST(Interpolation, ChainExample) {
  std::vector<FieldElement> c = {q(1), q(5), q(25), q(7)};
  auto roots = default_extra_roots(c);
  EXPECT_EQ(roots.first, q(2));
  EXPECT_EQ(roots.second, q(3));
  auto phi = interpolation_construct(c, roots.first, roots.second);
  EXPECT_EQ(phi.degree(), 5);
  for (std::size_t j = 0; j + 1 < c.size(); ++j) EXPECT_EQ(phi(c[j]), c[j + 1]);
  EXPECT_EQ(phi(q(2)), q(0));
  EXPECT_EQ(phi(q(3)), q(0));
  EXPECT_FALSE(is_beta_z_pm_d(RationalMap::polynomial(phi)).has_value());
}

TEST(Interpolation, DuplicateNodes) {
  EXPECT_EQ(kind_of([] { interpolation_construct({q(1), q(2), q(1)}, q(5), q(7)); }), ErrorKind::DuplicateNodes);
  EXPECT_EQ(kind_of([] { interpolation_construct({q(1), q(2)}, q(5), q(5)); }), ErrorKind::DuplicateNodes);
  EXPECT_EQ(kind_of([] { interpolation_construct({q(1), q(2)}, q(1), q(5)); }), ErrorKind::DuplicateNodes);
}

TEST(Interpolation, GaussianNodes) {
  auto K = NumberField::create({Integer(1), Integer(0), Integer(1)});
  auto i = K.theta();
  std::vector<FieldElement> c = {i, K.one() + i, K.from_rational(3)};
  auto phi = interpolation_construct(c, K.from_rational(-1), K.from_rational(2) * i);
  EXPECT_EQ(phi(c[0]), c[1]);
  EXPECT_EQ(phi(c[1]), c[2]);
  EXPECT_TRUE(phi(K.from_rational(-1)).is_zero());
}

TEST(ImageCountExperiment, Examples) {
  auto none = image_count_experiment(load_config(cfg(R"({"places": {"primes": []}, "map": {"num": ["7", "0", "1"]}, "height": 50})")));
  EXPECT_EQ(none["count"], 0);
  auto sq = image_count_experiment(load_config(cfg(R"({"map": {"num": ["0", "0", "1"]}, "height": 20})")));
  bool warned = false;
  for (auto& w : sq["warnings"]) warned = warned || w.get<std::string>() == "d-th power hypothesis violated";
  EXPECT_TRUE(warned);
  auto r = image_count_experiment(
      load_config(cfg(R"({"places": {"primes": [{"p": 2}, {"p": 3}]}, "map": {"num": ["0", "-1", "1"]}, "height": 200})")));
  EXPECT_TRUE(r["unit_equation"]["agree"].get<bool>());
  EXPECT_EQ(r["curves"]["models"], 25);
  EXPECT_EQ(r["comparison"].size(), 3u);
  EXPECT_EQ(r["ceiling"], "16777216");
}

TEST(ImageCountExperiment, Deterministic) {
  auto c = load_config(cfg(R"({"places": {"primes": [{"p": 2}, {"p": 5}]}, "map": {"num": ["1", "-3", "0", "1"]}, "height": 80})"));
  auto a = image_count_experiment(c);
  a["timing"] = 1.0;
  auto b = image_count_experiment(c);
  b["timing"] = 2.0;
  EXPECT_EQ(comparable_body(a).dump(), comparable_body(b).dump());
}

TEST(ImageCountExperiment, MonotoneInHeight) {
  long prev = 0;
  for (long H : {5L, 25L, 125L}) {
    auto c = load_config(cfg(R"({"places": {"primes": [{"p": 2}, {"p": 3}]}, "map": {"num": ["2", "-3", "1"]}})"), Overrides{H, {}, {}});
    long n = image_count_experiment(c)["count"].get<long>();
    EXPECT_GE(n, prev);
    prev = n;
  }
}

TEST(OrbitCountExperiment, Examples) {
  auto r = orbit_count_experiment(load_config(cfg(R"({"map": {"num": ["-1", "0", "1"]}, "alpha": "0", "steps": 6})")));
  EXPECT_EQ(r["count"], 1);
  EXPECT_EQ(r["witnesses"][0]["value"], "-1");
  EXPECT_FALSE(r["truncated"].get<bool>());
  auto half = orbit_count_experiment(load_config(cfg(R"({"map": {"num": ["1/2", "0", "1"]}, "alpha": "1", "steps": 10})")));
  EXPECT_EQ(half["count"], 0);
  EXPECT_EQ(half["ceiling"], 1);
  EXPECT_EQ(half["certificate"]["kind"], "unicritical");
  EXPECT_TRUE(half["certificate_covers_orbit"].get<bool>());
  auto pw = orbit_count_experiment(load_config(cfg(R"({"map": {"num": ["0", "0", "2"]}, "alpha": "3", "steps": 6})")));
  EXPECT_EQ(pw["routed_to"], "power-map family");
  EXPECT_TRUE(pw["all_units"].get<bool>());
  EXPECT_EQ(pw["count"], 6);
}

TEST(OrbitCountExperiment, MonotoneInSteps) {
  long prev = 0;
  for (int N = 1; N <= 8; ++N) {
    auto c = load_config(cfg(R"({"places": {"primes": [{"p": 2}, {"p": 3}]}, "map": {"num": ["-2", "1", "1"]}, "alpha": "1/2"})"),
                         Overrides{{}, N, {}});
    long n = orbit_count_experiment(c)["count"].get<long>();
    EXPECT_GE(n, prev);
    prev = n;
  }
}

TEST(OtherExperiments, EscapeCertAndFamilies) {
  auto e = escape_cert_experiment(load_config(
      cfg(R"({"places": {"primes": []}, "kind": "unicritical", "phi0": ["0", "0", "1"], "beta": "1/2", "i": 0, "gamma": "1", "steps": 10, "samples": 10})")));
  ASSERT_EQ(e["witnesses"].size(), 10u);
  EXPECT_EQ(e["witnesses"][9]["valuation"], -512);
  EXPECT_LE(e["oracle"]["max_unit_values_per_orbit"].get<long>(), 1);
  EXPECT_EQ(kind_of([] {
              escape_cert_experiment(load_config(cfg(R"({"kind": "unicritical", "phi0": ["0", "0", "1"], "beta": "1/2", "i": 1})")));
            }),
            ErrorKind::HypothesisFailed);
  auto f = families_experiment(load_config(cfg(R"({"family": "infinite", "map": {"num": ["0", "0", "2"]}, "count": 5})")));
  EXPECT_EQ(f["count"], 5);
  auto p = families_experiment(load_config(cfg(R"({"family": "power", "beta": "2", "exponent": 2, "alpha": "3", "count": 3})")));
  EXPECT_EQ(p["witnesses"][1]["value"], "648");
}

TEST(OtherExperiments, UnitEqAndCurves) {
  auto u = unit_eq_experiment(
      load_config(cfg(R"({"places": {"primes": [{"p": 2}, {"p": 3}]}, "map": {"num": ["0", "-1", "1"]}, "height": 50})")));
  EXPECT_GE(u["count"].get<long>(), 6);
  EXPECT_EQ(u["ceiling"], "16777216");
  auto cv = curves_experiment(
      load_config(cfg(R"({"places": {"primes": [{"p": 2}, {"p": 3}]}, "map": {"num": ["0", "-1", "1"]}, "height": 20})")));
  EXPECT_EQ(cv["p"], 5);
}

TEST(Reports, Csv) {
  auto r = interpolate_experiment(load_config(cfg(R"({"values": ["1", "5", "25", "7"]})")));
  auto csv = witnesses_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "z,phi(z)");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
  EXPECT_NE(csv.find("25,7\n"), std::string::npos);
  EXPECT_EQ(csv_cell(json::array({"1", "2"})), "1;2");
  EXPECT_EQ(csv_cell(json("a,b")), "\"a,b\"");
}

TEST(Suites, Selector) {
  auto r = run_property_suites("lemma-poles");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].name, "lemma-poles");
  EXPECT_TRUE(r[0].passed());
  EXPECT_EQ(kind_of([] { run_property_suites("nope"); }), ErrorKind::ConfigError);
}

TEST(Suites, ReproducibleFuzz) {
  auto a = lemma_poles_suite(100, 9);
  auto b = lemma_poles_suite(100, 9);
  EXPECT_EQ(a.checks, b.checks);
  EXPECT_EQ(a.failures, b.failures);
}
