#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <set>

#include "sunits/reductions.hpp"

using namespace sunits;

namespace {

const NumberField& Q() {
  static const NumberField K = NumberField::rationals();
  return K;
}

FieldElement q(const Rational& x) { return Q().from_rational(x); }

RationalMap qmap(std::vector<Rational> num, std::vector<Rational> den = {Rational(1)}) {
  return RationalMap::from_rationals(Q(), num, den);
}

PlaceSet q_places(std::vector<long> ps) {
  std::vector<Integer> v(ps.begin(), ps.end());
  return PlaceSet::above_primes(Q(), v);
}

bool smooth_over(Integer n, const std::vector<long>& ps) {
  n = abs(n);
  if (n == 0) return false;
  for (long p : ps)
    while (n % p == 0) n /= p;
  return n == 1;
}

// independent image scan: double loop over a/d, plain Rational arithmetic
std::set<Rational> brute_image_values(const std::vector<Rational>& num, const std::vector<Rational>& den, long H,
                                      const std::vector<long>& ps) {
  auto ev = [](const std::vector<Rational>& c, const Rational& x) {
    Rational acc = 0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
  };
  std::set<Rational> out;
  for (long d = 1; d <= H; ++d)
    for (long a = -H; a <= H; ++a) {
      if (std::gcd(std::labs(a), d) != 1) continue;
      Rational x = make_rational(Integer(a), Integer(d));
      Rational dv = ev(den, x);
      if (dv == 0) continue;
      Rational v = ev(num, x) / dv;
      if (v != 0 && smooth_over(v.get_num(), ps) && smooth_over(v.get_den(), ps)) out.insert(v);
    }
  return out;
}

}  // namespace

TEST(UnitEquation, ReductionExamples) {
  auto S = q_places({2, 3});
  auto inst = monic_unit_reduction(qmap({0, -1, 1}), S, q(0), q(1));
  EXPECT_EQ(inst.gap, q(1));
  auto [u1, u2] = inst.units_of(q(3));
  EXPECT_EQ(u1, q(3));
  EXPECT_EQ(u2, q(2));
  EXPECT_EQ(inst.back_map(u1), q(3));
  auto [v1, v2] = inst.units_of(q(2));
  EXPECT_EQ(v1, q(2));
  EXPECT_EQ(v2, q(1));
}

TEST(UnitEquation, ReductionErrors) {
  auto S = q_places({2, 3});
  auto kind = [&](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Unsupported;
  };
  EXPECT_EQ(kind([&] { monic_unit_reduction(qmap({0, -1, 2}), S, q(0), q(Rational(1, 2))); }), ErrorKind::NotMonicOverOS);
  EXPECT_EQ(kind([&] { monic_unit_reduction(qmap({0, Rational(-1, 5), 1}), S, q(0), q(Rational(1, 5))); }),
            ErrorKind::NotMonicOverOS);
  EXPECT_EQ(kind([&] { monic_unit_reduction(qmap({0, -1, 1}), S, q(0), q(0)); }), ErrorKind::RootsNotDistinct);
  EXPECT_EQ(kind([&] { monic_unit_reduction(qmap({0, -1, 1}), S, q(0), q(2)); }), ErrorKind::RootsNotInField);
  EXPECT_EQ(kind([&] { monic_unit_reduction(qmap({1, 0, 1}), S); }), ErrorKind::RootsNotInField);
}

TEST(UnitEquation, SolutionsContainKnownPairs) {
  auto S = q_places({2, 3});
  auto inst = monic_unit_reduction(qmap({0, -1, 1}), S, q(0), q(1));
  auto sols = solve_unit_equation_box(inst, 100);
  std::set<std::pair<Rational, Rational>> got;
  for (auto& s : sols) {
    EXPECT_EQ(s.u1 - s.u2, inst.gap);
    got.insert({s.u1.rational_value(), s.u2.rational_value()});
  }
  for (auto pr : std::vector<std::pair<Rational, Rational>>{
           {2, 1}, {3, 2}, {4, 3}, {9, 8}, {Rational(1, 2), Rational(-1, 2)}, {Rational(1, 3), Rational(-2, 3)}})
    EXPECT_TRUE(got.count(pr)) << pr.first << " " << pr.second;
  EXPECT_LE(Integer(static_cast<long>(sols.size())), evertse_bound(3));
}

TEST(UnitEquation, EvertseBound) {
  EXPECT_EQ(evertse_bound(1), Integer(256));
  EXPECT_EQ(evertse_bound(3), Integer(16777216));
  EXPECT_THROW(evertse_bound(0), Error);
}

TEST(UnitEquation, GaussianExtension) {
  auto S = q_places({2});
  ExtensionData ext{{Integer(1), Integer(0), Integer(1)}, {Rational(0), Rational(1)}, {Rational(0), Rational(-1)}, false};
  auto inst = monic_unit_reduction(qmap({-1, 0, 0, 0, 1}), S, q(0), q(1), ext);
  EXPECT_EQ(inst.extension_degree, 2);
  EXPECT_LE(inst.ext.s(), inst.extension_degree * S.s());
  auto sols = solve_unit_equation_box(inst, 6);
  EXPECT_FALSE(sols.empty());
  for (auto& s : sols) {
    EXPECT_EQ(s.u1 - s.u2, inst.gap);
    EXPECT_TRUE(is_s_unit(s.u1, inst.ext));
    EXPECT_TRUE(is_s_unit(s.u2, inst.ext));
  }
}

TEST(ImageCount, SpecValues) {
  auto S = q_places({2, 3});
  auto r = count_image_sunits_box(qmap({0, -1, 1}), S, 100);
  std::set<Rational> vals;
  for (auto& v : r.values) vals.insert(v.rational_value());
  for (Rational x : {Rational(2), Rational(6), Rational(12), Rational(72)}) EXPECT_TRUE(vals.count(x)) << x;
  auto sq = count_image_sunits_box(qmap({0, 0, 1}), q_places({}), 50);
  ASSERT_EQ(sq.count(), 1u);
  EXPECT_EQ(sq.values[0], q(1));
  auto none = count_image_sunits_box(qmap({7, 0, 1}), q_places({}), 50);
  EXPECT_EQ(none.count(), 0u);
}

TEST(ImageCount, MatchesBruteForce) {
  struct Case {
    std::vector<Rational> num, den;
    std::vector<long> ps;
  };
  std::vector<Case> cases = {
      {{0, -1, 1}, {1}, {2, 3}},
      {{-1, 0, 1}, {0, 1}, {2, 3}},
      {{1}, {0, 0, 1, 1}, {2, 3, 5}},
      {{2, 0, 0, 1}, {1, 1}, {2, 5}},
      {{Rational(1, 2), 0, 1}, {1}, {2, 3}},
      {{0, 6, -5, 1}, {1}, {2, 3}},
      {{3, 0, 1}, {-1, 0, 0, 0, 1}, {2, 3, 7}},
  };
  for (auto& c : cases) {
    auto phi = qmap(c.num, c.den);
    const long H = 120;
    auto r = count_image_sunits_box(phi, q_places(c.ps), H);
    std::set<Rational> got;
    for (auto& v : r.values) got.insert(v.rational_value());
    EXPECT_EQ(got, brute_image_values(c.num, c.den, H, c.ps)) << phi.to_string();
    for (auto& [b, v] : r.hits) EXPECT_EQ(phi(b), v);
  }
}

TEST(ImageCount, GaussianBox) {
  auto K = NumberField::create({Integer(1), Integer(0), Integer(1)});
  auto S = PlaceSet::above_primes(K, {Integer(2)});
  auto phi = RationalMap::from_rationals(K, {0, -1, 1});
  auto r = count_image_sunits_box(phi, S, 3);
  for (auto& [b, v] : r.hits) {
    EXPECT_EQ(phi(b), v);
    EXPECT_TRUE(is_s_unit(v, S));
  }
  EXPECT_FALSE(r.values.empty());
}

TEST(ImageCount, ThreadCountDoesNotChangeResult) {
  auto S = q_places({2, 3});
  auto phi = qmap({0, -1, 1});
  auto a = count_image_sunits_box(phi, S, 400, 1);
  auto b = count_image_sunits_box(phi, S, 400, 3);
  ASSERT_EQ(a.hits.size(), b.hits.size());
  for (std::size_t i = 0; i < a.hits.size(); ++i) EXPECT_EQ(a.hits[i].first, b.hits[i].first);
  EXPECT_EQ(a.values, b.values);
}

TEST(ImageCount, MonotoneInHeight) {
  auto S = q_places({2, 3, 5});
  auto phi = qmap({1, -3, 0, 1});
  std::size_t prev = 0;
  for (long H : {10L, 40L, 160L}) {
    auto r = count_image_sunits_box(phi, S, H);
    EXPECT_GE(r.count(), prev);
    prev = r.count();
  }
}

TEST(CrossCheck, RoutesAgree) {
  auto S = q_places({2, 3});
  for (auto c : std::vector<std::vector<Rational>>{{0, -1, 1}, {2, -3, 1}, {-6, 1, 1}, {0, -1, 0, 1}}) {
    auto phi = qmap(c);
    auto scan = count_image_sunits_box(phi, S, 300);
    auto inst = monic_unit_reduction(phi, S);
    auto cc = cross_check_unit_equation(inst, scan);
    EXPECT_TRUE(cc.agree()) << phi.to_string() << ": " << (cc.problems.empty() ? "" : cc.problems[0]);
    EXPECT_EQ(cc.exact, phi.degree() == 2);
    for (auto& b : cc.scan_betas) EXPECT_NE(std::find(cc.route_betas.begin(), cc.route_betas.end(), b), cc.route_betas.end());
  }
}

TEST(Curves, PrimeAndGenus) {
  EXPECT_EQ(select_prime(2, 3), 5);
  EXPECT_EQ(select_prime(2, 4), 3);
  EXPECT_EQ(select_prime(3, 4), 5);
  EXPECT_EQ(genus_of(5, 3), 2);
  EXPECT_EQ(genus_of(3, 4), 2);
  EXPECT_EQ(genus_of(7, 2), 0);
  for (int d = 2; d <= 6; ++d)
    for (int m = 3; m <= 2 * d; ++m) {
      long p = select_prime(d, m);
      EXPECT_TRUE(is_prime(Integer(p)));
      EXPECT_GT(p, d);
      EXPECT_GT((p - 1) * (m - 2), 2);
      for (long r = d + 1; r < p; ++r) EXPECT_FALSE(is_prime(Integer(r)) && (r - 1) * (m - 2) > 2);
      long g = genus_of(p, m);
      EXPECT_GE(g, 2);
      EXPECT_LE(2 * g, twice_genus_ceiling(d));
      if (!(d == 2 && m == 3)) {
        EXPECT_LT(p, 2 * d);
      }
    }
}

TEST(Curves, BuildBattery) {
  auto S = q_places({2, 3});
  auto bat = build_curves(qmap({0, -1, 1}), S, 5);
  EXPECT_EQ(bat.models.size(), 25u);
  EXPECT_TRUE(bat.prime_selected);
  for (auto& m : bat.models) {
    EXPECT_EQ(m.genus, 2);
    EXPECT_EQ(m.max_multiplicity, 2);
    EXPECT_LT(m.max_multiplicity, 5);
  }
  EXPECT_LE(Integer(static_cast<long>(bat.models.size())), ipow(Integer(5), S.s()));
  try {
    build_curves(qmap({0, -1, 0, 0, 0, 1}), S, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PrimeTooSmall);
  }
}

TEST(Curves, MapSUnitToCurve) {
  auto S = q_places({2, 3});
  auto bat = build_curves(qmap({0, -1, 1}), S, 5);
  auto [i3, p3] = map_sunit_to_curve(q(3), bat);
  EXPECT_EQ(bat.models[i3].gamma, q(1296));
  EXPECT_EQ(p3.y, q(6));
  auto [i2, p2] = map_sunit_to_curve(q(2), bat);
  EXPECT_EQ(bat.models[i2].gamma, q(16));
  EXPECT_EQ(p2.y, q(2));
  EXPECT_TRUE(on_curve(bat.models[i2], p2));
  EXPECT_THROW(map_sunit_to_curve(q(5), bat), Error);
}

TEST(Curves, PointSearchFindsForwardImage) {
  auto S = q_places({2, 3});
  auto bat = build_curves(qmap({0, -1, 1}), S, 5);
  auto [i3, p3] = map_sunit_to_curve(q(3), bat);
  auto pts = curve_point_search(bat.models[i3], 10);
  bool found = false;
  for (auto& pt : pts) {
    EXPECT_TRUE(on_curve(bat.models[i3], pt));
    found = found || (pt.z == q(3) && pt.y == q(6));
  }
  EXPECT_TRUE(found);
}

TEST(Curves, BatchScanEqualsPerModelSearch) {
  auto S = q_places({2, 3});
  for (auto c : std::vector<std::pair<std::vector<Rational>, std::vector<Rational>>>{
           {{0, -1, 1}, {1}}, {{-1, 0, 1}, {0, 1}}, {{1, 1}, {0, 0, 1}}}) {
    auto psi = qmap(c.first, c.second);
    auto bat = build_curves(psi, S, 5);
    const long H = 60;
    auto batch = curve_point_search_all(bat, H);
    for (std::size_t i = 0; i < bat.models.size(); ++i) {
      auto single = curve_point_search(bat.models[i], H);
      ASSERT_EQ(batch[i].size(), single.size()) << psi.to_string() << " model " << i;
      for (std::size_t k = 0; k < single.size(); ++k) {
        EXPECT_EQ(batch[i][k].z, single[k].z);
        EXPECT_EQ(batch[i][k].y, single[k].y);
      }
    }
  }
}

TEST(Curves, PointsBoundImageValues) {
  auto S = q_places({2, 3});
  auto psi = qmap({0, -1, 1});
  auto bat = build_curves(psi, S, 5);
  const long H = 300;
  auto pts = curve_point_search_all(bat, H);
  std::size_t total = 0;
  for (auto& v : pts) total += v.size();
  EXPECT_GE(total, count_image_sunits_box(psi, S, H).count());
}

TEST(Curves, GaussianBattery) {
  auto K = NumberField::create({Integer(1), Integer(0), Integer(1)});
  auto S = PlaceSet::above_primes(K, {Integer(2)});
  UnitGroupData units{K.theta(), {K.one() + K.theta()}};
  auto psi = RationalMap::from_rationals(K, {0, -1, 1});
  EXPECT_THROW(build_curves(psi, S, 3), Error);
  auto bat = build_curves(psi, S, 3, units);
  EXPECT_EQ(bat.models.size(), 3u);
  auto r = count_image_sunits_box(psi, S, 2);
  for (auto& [b, v] : r.hits) {
    auto [i, pt] = map_sunit_to_curve(b, bat);
    EXPECT_TRUE(on_curve(bat.models[i], pt));
  }
}

TEST(Families, InfiniteFamily) {
  auto fam = infinite_family(qmap({0, 0, 2}), q_places({}), 6);
  EXPECT_EQ(fam.S_prime.rational_primes(), (std::vector<Integer>{2}));
  std::vector<FieldElement> want = {q(2), q(8), q(32), q(128), q(512), q(2048)};
  ASSERT_EQ(fam.members.size(), want.size());
  for (std::size_t k = 0; k < want.size(); ++k) {
    EXPECT_EQ(fam.members[k].value, want[k]);
    EXPECT_EQ(qmap({0, 0, 2})(fam.members[k].preimage), want[k]);
  }
  EXPECT_THROW(infinite_family(qmap({1, 0, 1}), q_places({}), 3), Error);
}

TEST(Families, InfiniteFamilyNeedsSecondPlace) {
  // gamma = 1: S' = {inf} would have s' = 1, so a prime is added
  auto fam = infinite_family(qmap({-1, 1}, {1, 1}), q_places({}), 10);
  EXPECT_GT(fam.S_prime.s(), 1);
  std::set<std::string> seen;
  for (auto& m : fam.members) {
    EXPECT_TRUE(is_s_unit(m.value, fam.S_prime));
    seen.insert(m.value.to_string());
  }
  EXPECT_EQ(seen.size(), 10u);
}

TEST(Families, PowerMap) {
  auto fam = power_map_family(q(2), 2, q(3), 8);
  EXPECT_EQ(fam.S.rational_primes(), (std::vector<Integer>{2, 3}));
  EXPECT_TRUE(fam.all_units);
  ASSERT_EQ(fam.orbit.points.size(), 8u);
  EXPECT_EQ(fam.orbit.points[0].value(), q(18));
  EXPECT_EQ(fam.orbit.points[1].value(), q(648));
  auto one = power_map_family(q(1), 2, q(1), 5);
  EXPECT_EQ(one.orbit.points.size(), 1u);
  auto neg = power_map_family(q(1), 2, q(-1), 5);
  ASSERT_TRUE(neg.torsion_order.has_value());
  EXPECT_EQ(*neg.torsion_order, 2);
  auto inv = power_map_family(q(3), -2, q(2), 5);
  EXPECT_TRUE(inv.all_units);
}
