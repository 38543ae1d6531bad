#include <gtest/gtest.h>

#include <random>

#include "sunits/escape.hpp"
#include "sunits/suites.hpp"

using namespace sunits;

namespace {

const NumberField& Q() {
  static const NumberField K = NumberField::rationals();
  return K;
}

FieldElement q(const Rational& x) { return Q().from_rational(x); }

PlaceSet q_places(std::vector<long> ps) {
  std::vector<Integer> v(ps.begin(), ps.end());
  return PlaceSet::above_primes(Q(), v);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Unsupported;
}

}  // namespace

TEST(Unicritical, Certificates) {
  auto S = q_places({});
  auto c = unicritical_certificate(kpoly(Q(), {0, 0, 1}), q(Rational(1, 2)), 0, S);
  EXPECT_EQ(c.place.p, Integer(2));
  EXPECT_EQ(c.base_valuation, -1);
  EXPECT_EQ(c.growth_exponent, 2);
  EXPECT_FALSE(S.contains(c.place));
  EXPECT_EQ(c.hypotheses.size(), 3u);
  auto c3 = unicritical_certificate(kpoly(Q(), {0, 0, 0, 1}), q(Rational(1, 3)), 1, S);
  EXPECT_EQ(c3.place.p, Integer(3));
  EXPECT_EQ(c3.exceptional_index, 1);
}

TEST(Unicritical, SmallestPlaceChosen) {
  auto c = unicritical_certificate(kpoly(Q(), {0, 0, 1}), q(Rational(1, 30)), 0, q_places({2}));
  EXPECT_EQ(c.place.p, Integer(3));
}

TEST(Unicritical, HypothesisFailures) {
  auto S = q_places({});
  EXPECT_EQ(kind_of([&] { unicritical_certificate(kpoly(Q(), {0, 0, 1}), q(Rational(1, 2)), 1, S); }),
            ErrorKind::HypothesisFailed);
  EXPECT_EQ(kind_of([&] { unicritical_certificate(kpoly(Q(), {0, 0, 1}), q(3), 0, S); }), ErrorKind::HypothesisFailed);
  EXPECT_EQ(kind_of([&] { unicritical_certificate(kpoly(Q(), {0, 0, 1}), q(Rational(1, 2)), 0, q_places({2})); }),
            ErrorKind::HypothesisFailed);
  EXPECT_EQ(kind_of([&] { unicritical_certificate(kpoly(Q(), {0, 0, 2}), q(Rational(1, 3)), 0, S); }),
            ErrorKind::HypothesisFailed);
  EXPECT_EQ(kind_of([&] { unicritical_certificate(kpoly(Q(), {Rational(1, 5), 0, 1}), q(Rational(1, 3)), 0, S); }),
            ErrorKind::HypothesisFailed);
  for (int d = 2; d <= 6; ++d) {
    std::vector<Rational> c(static_cast<std::size_t>(d + 1), Rational(0));
    c.back() = 1;
    EXPECT_EQ(kind_of([&] { unicritical_certificate(kpoly(Q(), c), q(Rational(1, 7)), d - 1, S); }),
              ErrorKind::HypothesisFailed)
        << d;
  }
}

TEST(Trajectory, QuadraticExample) {
  auto c = unicritical_certificate(kpoly(Q(), {0, 0, 1}), q(Rational(1, 2)), 0, q_places({}));
  auto t = verify_valuation_growth(c, q(1), 10);
  ASSERT_EQ(t.valuations.size(), 10u);
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(t.valuations[static_cast<std::size_t>(n - 1)], -(1L << (n - 1)));
  auto tm = verify_valuation_growth(c, q(-1), 6);
  EXPECT_EQ(tm.valuations, std::vector<long>(t.valuations.begin(), t.valuations.begin() + 6));
}

TEST(Trajectory, CubicExample) {
  auto c = unicritical_certificate(kpoly(Q(), {0, 0, 0, 1}), q(Rational(1, 5)), 1, q_places({}));
  auto t = verify_valuation_growth(c, q(1), 5);
  EXPECT_EQ(t.valuations, (std::vector<long>{-1, -3, -9, -27, -81}));
}

TEST(Trajectory, GrowthLawAcrossPlaces) {
  auto S = q_places({2, 3});
  auto c = unicritical_certificate(kpoly(Q(), {1, -1, 1}), q(Rational(1, 25)), 0, S);
  for (Rational g : {Rational(1), Rational(2), Rational(-3, 4), Rational(9, 8)}) {
    auto t = verify_valuation_growth(c, q(g), 5);
    EXPECT_EQ(t.valuations[0], c.base_valuation);
    for (std::size_t n = 1; n < t.valuations.size(); ++n) EXPECT_EQ(t.valuations[n], 2 * t.valuations[n - 1]);
  }
}

TEST(Trajectory, Mismatch) {
  auto c = unicritical_certificate(kpoly(Q(), {0, 0, 1}), q(Rational(1, 2)), 0, q_places({}));
  c.multiplier = 3;
  EXPECT_EQ(kind_of([&] { verify_valuation_growth(c, q(1), 4); }), ErrorKind::TrajectoryMismatch);
  EXPECT_EQ(kind_of([&] { verify_valuation_growth(c, q(2), 4); }), ErrorKind::InvalidArgument);
}

TEST(Laurent, UnitRestrictionExample) {
  auto phi = RationalMap::from_rationals(Q(), {1, 1, 1}, {0, 1});
  auto r = laurent_unit_restriction(phi, q_places({}), 10);
  EXPECT_EQ(r.inputs.size(), 2u);
  ASSERT_EQ(r.count(), 1u);
  EXPECT_EQ(r.values[0], q(-1));
}

TEST(Laurent, UltrametricSamples) {
  auto phi = RationalMap::from_rationals(Q(), {1, 1, 1}, {0, 1});
  auto S = q_places({});
  std::mt19937_64 rng(11);
  int checked = 0;
  while (checked < 100) {
    auto b = random_element(Q(), rng, 40);
    if (is_s_unit(b, S)) continue;
    auto v = phi(b);
    ASSERT_TRUE(v.has_value());
    for (auto& P : support(b)) EXPECT_NE(valuation(*v, P), 0) << b.to_string();
    EXPECT_FALSE(is_s_unit(*v, S));
    ++checked;
  }
}

TEST(Laurent, RestrictionHypotheses) {
  auto S = q_places({});
  EXPECT_EQ(kind_of([&] { laurent_unit_restriction(RationalMap::from_rationals(Q(), {2, 1, 1}, {0, 1}), S, 5); }),
            ErrorKind::HypothesisFailed);
  EXPECT_EQ(kind_of([&] { laurent_unit_restriction(RationalMap::from_rationals(Q(), {1, 1, 3}, {0, 1}), S, 5); }),
            ErrorKind::HypothesisFailed);
  EXPECT_EQ(kind_of([&] { laurent_unit_restriction(RationalMap::from_rationals(Q(), {1, 2, 1}, {0, 0, 0, 1}), S, 5); }),
            ErrorKind::HypothesisFailed);
  EXPECT_EQ(kind_of([&] { laurent_unit_restriction(RationalMap::from_rationals(Q(), {1, 1, 1}, {1, 1}), S, 5); }),
            ErrorKind::HypothesisFailed);
  EXPECT_EQ(kind_of([&] { laurent_unit_restriction(RationalMap::from_rationals(Q(), {1, 1, 1}, {0, 0, 1}), S, 5); }),
            ErrorKind::HypothesisFailed);
}

TEST(Laurent, RestrictionMatchesFullScan) {
  auto S = q_places({2, 3});
  auto phi = RationalMap::from_rationals(Q(), {3, 0, 0, 1}, {0, 1});
  auto r = laurent_unit_restriction(phi, S, 200);
  auto full = count_image_sunits_box(phi, S, 200);
  for (auto& [b, v] : full.hits) EXPECT_TRUE(is_s_unit(b, S)) << b.to_string();
  for (auto& [u, v] : r.hits) EXPECT_EQ(phi(u), v);
}

TEST(Laurent, Certificates) {
  auto S = q_places({});
  EXPECT_EQ(kind_of([&] { laurent_escape_certificate(RationalMap::from_rationals(Q(), {1, 1, 0, 4}, {0, 1}), S); }),
            ErrorKind::HypothesisFailed);
  auto c = laurent_escape_certificate(RationalMap::from_rationals(Q(), {0, 1, Rational(1, 2)}), S);
  EXPECT_EQ(c.place.p, Integer(2));
  EXPECT_EQ(c.base_valuation, -1);
  ASSERT_EQ(c.margins.size(), 1u);
  EXPECT_EQ(c.margins[0], (std::pair<int, long>{1, 1}));
  auto t = verify_valuation_growth(c, q(1), 6);
  EXPECT_EQ(t.valuations, (std::vector<long>{-1, -3, -7, -15, -31, -63}));
  EXPECT_EQ(kind_of([&] { laurent_escape_certificate(RationalMap::from_rationals(Q(), {1, Rational(1, 4), Rational(1, 2)}), S); }),
            ErrorKind::HypothesisFailed);
  EXPECT_EQ(kind_of([&] { laurent_escape_certificate(RationalMap::from_rationals(Q(), {1, 0, Rational(1, 2)}, {0, 0, 1}), S); }),
            ErrorKind::HypothesisFailed);
}

TEST(Laurent, CertificateWithPoleAtZero) {
  auto S = q_places({});
  auto c = laurent_escape_certificate(RationalMap::from_rationals(Q(), {1, 0, 0, Rational(1, 3)}, {0, 1}), S);
  EXPECT_EQ(c.multiplier, 2);
  auto t = verify_valuation_growth(c, q(-1), 5);
  for (std::size_t n = 0; n < t.valuations.size(); ++n) EXPECT_LT(t.valuations[n], 0);
}

TEST(Oracle, CertifiedOrbitsMeetUnitsAtMostOnce) {
  auto S = q_places({3});
  auto c = unicritical_certificate(kpoly(Q(), {-1, 0, 1}), q(Rational(1, 2)), 0, S);
  std::mt19937_64 rng(5);
  auto units = s_units_up_to_height(S, 30);
  for (int k = 0; k < 50; ++k) {
    auto& u = units[rng() % units.size()];
    auto chk = check_certificate_on_orbit(c, ProjPoint::finite(u), 15);
    EXPECT_TRUE(chk.covered);
    EXPECT_TRUE(chk.holds) << u.to_string();
  }
  auto lc = laurent_escape_certificate(RationalMap::from_rationals(Q(), {0, 1, Rational(1, 2)}), q_places({}));
  for (auto u : {q(1), q(-1)}) {
    auto chk = check_certificate_on_orbit(lc, ProjPoint::finite(u), 12);
    EXPECT_EQ(chk.unit_values, 0u);
    EXPECT_TRUE(chk.holds);
  }
}

TEST(Oracle, UncoveredOrbit) {
  auto c = unicritical_certificate(kpoly(Q(), {0, 0, 1}), q(Rational(1, 2)), 0, q_places({}));
  auto chk = check_certificate_on_orbit(c, ProjPoint::finite(q(Rational(1, 3))), 8);
  EXPECT_FALSE(chk.covered);
  EXPECT_TRUE(chk.holds);
}

TEST(Oracle, GaussianUnicritical) {
  auto K = NumberField::create({Integer(1), Integer(0), Integer(1)});
  auto S = PlaceSet::above_primes(K, {Integer(2)});
  auto beta = K.from_rational(Rational(1, 3));
  auto c = unicritical_certificate(kpoly(K, {0, 0, 1}), beta, 0, S);
  EXPECT_EQ(c.place.p, Integer(3));
  auto t = verify_valuation_growth(c, K.one() + K.theta(), 6);
  for (std::size_t n = 1; n < t.valuations.size(); ++n) EXPECT_EQ(t.valuations[n], 2 * t.valuations[n - 1]);
}
