#include <gtest/gtest.h>

#include "ergopt/shadow.hpp"
#include "oracle.hpp"

using namespace ergopt;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an ergopt::Error";
  return Errc::InvalidArgument;
}

SymbolicPoint pt(const char* pre, const char* cyc) { return SymbolicPoint::parse(pre, cyc); }

}  // namespace

TEST(PseudoOrbit, JumpsAndDelta) {
  const MetricParams m;
  const auto po = make_pseudo_orbit(SubshiftSpec::full_shift(2), {pt("", "0"), pt("0001", "0"), pt("001", "0")}, m);
  EXPECT_EQ(po.steps(), 2u);
  EXPECT_EQ(po.jumps, (std::vector<std::size_t>{0}));
  EXPECT_DOUBLE_EQ(po.delta, 0.125);
  EXPECT_FALSE(po.closed);
  const auto cl = make_pseudo_orbit(SubshiftSpec::full_shift(2), {pt("", "01"), pt("", "10"), pt("", "01")}, m);
  EXPECT_TRUE(cl.closed);
  EXPECT_TRUE(cl.jumps.empty());
  EXPECT_EQ(cl.delta, 0.0);
  EXPECT_EQ(code_of([&] { make_pseudo_orbit(SubshiftSpec::golden_mean(), {pt("", "1")}, m); }),
            Errc::InadmissiblePoint);
}

TEST(Shadow, ClosedOrbitGivesPeriodicPoint) {
  const MetricParams m;
  const auto spec = SubshiftSpec::full_shift(2);
  // 0(1) jumps back to 0001(1) ... then closes at the start.
  const auto po = make_pseudo_orbit(spec, {pt("", "001"), pt("", "010"), pt("1000", "1"), pt("", "001")}, m);
  ASSERT_TRUE(po.closed);
  const auto p = shadow(po, spec, m);
  EXPECT_EQ(p, SymbolicPoint::periodic(parse_word("001")));
}

TEST(Shadow, OpenOrbitEndsOnLastPoint) {
  const MetricParams m;
  const auto spec = SubshiftSpec::golden_mean();
  const auto po = make_pseudo_orbit(spec, {pt("", "0"), pt("000", "01"), pt("00", "10"), pt("0", "10")}, m);
  const auto p = shadow(po, spec, m);
  EXPECT_EQ(p.shift(po.steps()), po.points.back());
  EXPECT_TRUE(p.admissible_in(spec));
  for (std::size_t i = 0; i <= po.steps(); ++i)
    EXPECT_LE(distance(p.shift(i), po.points[i], m), m.lambda * po.delta / (1 - m.lambda) + 1e-15);
}

TEST(Shadow, DeltaAtEpsilonOneIsRejected) {
  const MetricParams m;
  EXPECT_DOUBLE_EQ(shadow_epsilon1(m), 0.5);
  EXPECT_DOUBLE_EQ(shadow_epsilon1({0.25, 1.0}), 0.75);
  const auto spec = SubshiftSpec::full_shift(2);
  const auto po = make_pseudo_orbit(spec, {pt("", "0"), pt("01", "0")}, m);
  EXPECT_DOUBLE_EQ(po.delta, 0.5);
  EXPECT_EQ(code_of([&] { shadow(po, spec, m); }), Errc::DeltaTooLarge);
}

TEST(Shadow, RandomPseudoOrbitsAreReproducible) {
  const MetricParams m;
  const auto spec = SubshiftSpec::golden_mean();
  const auto a = random_pseudo_orbit(spec, m, 15, 4, 0.1, 42);
  const auto b = random_pseudo_orbit(spec, m, 15, 4, 0.1, 42);
  EXPECT_EQ(a.points, b.points);
  EXPECT_EQ(a.steps(), 15u);
  EXPECT_LE(a.jumps.size(), 4u);
  EXPECT_LE(a.delta, 0.1);
  for (const auto& x : a.points) EXPECT_TRUE(x.admissible_in(spec));
}

TEST(Certify, BoundsHoldOnRandomOrbits) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 60; ++i) {
    const MetricParams m{i % 2 ? 0.5 : 0.3, 1.0};
    const auto spec = i % 3 ? SubshiftSpec::golden_mean() : SubshiftSpec::full_shift(3);
    const auto a = oracle::random_potential(spec, 1 + i % 6, rng()).with_metric(m);
    const auto po = random_pseudo_orbit(spec, m, 10 + i % 7, 1 + i % 4, 0.2, rng());
    const auto p = shadow(po, spec, m);
    const auto c = certify(po, p, a);
    EXPECT_LE(c.measured_max_distance, c.shadow_radius + 1e-15);
    EXPECT_LE(c.measured_sum_deviation, c.birkhoff_bound + 1e-12);
    EXPECT_NEAR(c.k1, c.k1_expansion_form, 1e-12 * (1 + c.k1));
    EXPECT_DOUBLE_EQ(c.expansion_rate, 1.0 / m.lambda);
    EXPECT_EQ(c.jumps, po.jumps.size());
  }
}

TEST(Certify, WrongPointIsCaught) {
  const MetricParams m;
  const auto spec = SubshiftSpec::full_shift(2);
  const auto a = Potential(spec, 1, {0.0, 1.0});
  const auto po = make_pseudo_orbit(spec, {pt("", "0"), pt("0001", "0"), pt("001", "0")}, m);
  EXPECT_NO_THROW(certify(po, shadow(po, spec, m), a));
  EXPECT_EQ(code_of([&] { certify(po, pt("", "1"), a); }), Errc::BoundViolated);
}
