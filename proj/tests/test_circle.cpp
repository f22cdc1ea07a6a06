#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ergopt/circle.hpp"
#include "ergopt/thermo.hpp"
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

Word binary(std::uint64_t code, int len) {
  Word w(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i) w[i] = static_cast<Symbol>((code >> (len - 1 - i)) & 1);
  return w;
}

double circle_gap(double x, double y) {
  const double d = std::abs(x - y);
  return std::min(d, 1.0 - d);
}

}  // namespace

TEST(CircleMap, DoublingBasics) {
  const auto f = CircleMap::doubling();
  EXPECT_EQ(f.lift(0.0), 0.0);
  EXPECT_EQ(f.lift(1.0), 2.0);
  EXPECT_DOUBLE_EQ(f.lift(1.25), 2.5);
  EXPECT_DOUBLE_EQ(f(0.75), 0.5);
  EXPECT_DOUBLE_EQ(f.derivative(0.3), 2.0);
  EXPECT_DOUBLE_EQ(f.branch(1, 0.5), 0.75);
  EXPECT_DOUBLE_EQ(f.min_derivative(), 2.0);
}

TEST(CircleMap, PerturbedPreimagesInvertTheLift) {
  const auto f = CircleMap::perturbed_doubling(0.7);
  for (double t = 0.0; t <= 2.0; t += 0.0625) EXPECT_NEAR(f.lift(f.preimage(t)), t, 1e-14);
  EXPECT_NEAR(f.derivative(0.0), 2.7, 1e-15);
  EXPECT_NEAR(f.min_derivative(), 1.3, 1e-6);
  EXPECT_EQ(code_of([] { CircleMap::perturbed_doubling(2.0); }), Errc::InvalidArgument);
}

TEST(CircleMap, Tables) {
  const auto t = CircleMap::table({{0.0, 0.0}, {0.5, 0.75}, {1.0, 2.0}});
  EXPECT_TRUE(t.is_table());
  EXPECT_DOUBLE_EQ(t.derivative(0.25), 1.5);
  EXPECT_DOUBLE_EQ(t.derivative(0.75), 2.5);
  EXPECT_DOUBLE_EQ(t.preimage(1.375), 0.75);
  // The knot belongs to the segment on its right.
  EXPECT_DOUBLE_EQ(t.derivative(0.5), 2.5);
  EXPECT_EQ(code_of([] { CircleMap::table({{0.0, 0.0}, {0.5, 1.5}, {0.4, 1.0}, {1.0, 2.0}}); }), Errc::InvalidArgument);
  EXPECT_EQ(code_of([] { CircleMap::table({{0.0, 0.0}, {1.0, 1.5}}); }), Errc::InvalidArgument);
  EXPECT_EQ(code_of([] { CircleMap::table({{0.0, 0.0}, {0.5, 1.5}, {1.0, 2.0}}, {1.0}); }), Errc::InvalidArgument);
}

TEST(CircleMap, TableIsRotatedOntoFixedPoint) {
  const auto t = CircleMap::table({{0.0, 0.25}, {1.0, 2.25}});
  EXPECT_NE(t.rotation(), 0.0);
  EXPECT_NEAR(t.lift(0.0), 0.0, 1e-15);
  EXPECT_NEAR(t.lift(1.0), 2.0, 1e-15);
  EXPECT_NEAR(t(0.3), std::fmod(0.6, 1.0), 1e-15);
}

TEST(CircleMap, CallbackDerivative) {
  const auto f = CircleMap::from_lift([](double x) { return 2 * x + 0.1 * std::sin(2 * std::numbers::pi * x); });
  EXPECT_TRUE(f.finite_difference());
  EXPECT_NEAR(f.derivative(0.0), 2.0 + 0.2 * std::numbers::pi, 1e-7);
  EXPECT_EQ(code_of([] { CircleMap::from_lift([](double x) { return x; }); }), Errc::InvalidArgument);
}

TEST(Coding, DoublingCodesDyadics) {
  const auto tab = coding_table(CircleMap::doubling(), 6);
  EXPECT_EQ(tab.depth, 6);
  for (int m = 1; m <= 7; ++m)
    for (std::uint64_t j = 0; j <= (1u << m); ++j) EXPECT_DOUBLE_EQ(tab.theta(j, m), std::ldexp(double(j), -m));
  // 0.w1 for w = 011 is 0.0111 = 7/16.
  EXPECT_DOUBLE_EQ(tab.anchor(parse_word("011")), 7.0 / 16.0);
  EXPECT_EQ(code_of([] { coding_table(CircleMap::doubling(), 25); }), Errc::BudgetExceeded);
}

TEST(Coding, TreeAndConjugacyProperties) {
  for (double eps : {-1.2, 0.4, 1.5}) {
    const auto f = CircleMap::perturbed_doubling(eps);
    const auto tab = coding_table(f, 10);
    EXPECT_TRUE(tab.order_preserved());
    EXPECT_LE(tab.tree_residual(f), 1e-13);
    // f maps the coded point of 0.w1 to that of 0.w_2..w_m 1.
    for (int m = 2; m <= 8; ++m)
      for (std::uint64_t code = 0; code < (1u << m); code += 3) {
        const Word w = binary(code, m);
        EXPECT_NEAR(circle_gap(f(tab.anchor(w)), tab.anchor(std::span<const Symbol>(w).subspan(1))), 0.0, 1e-13);
      }
  }
}

TEST(MapPotential, DoublingIsConstant) {
  const auto mp = potential_from_map(CircleMap::doubling(), 4);
  for (double v : mp.potential.values()) EXPECT_DOUBLE_EQ(v, -std::log(2.0));
  EXPECT_NEAR(mp.pressure, 0.0, 1e-14);
  EXPECT_TRUE(mp.pressure_ok);
  EXPECT_EQ(mp.tail_bound, 0.0);
}

TEST(MapPotential, PerturbedPressureVanishesWithDepth) {
  const auto f = CircleMap::perturbed_doubling(0.8);
  double prev = 1.0;
  for (int k : {2, 4, 6, 8}) {
    const auto mp = potential_from_map(f, k);
    EXPECT_TRUE(mp.pressure_ok) << k;
    EXPECT_LE(std::abs(mp.pressure), mp.tail_bound + 1e-9);
    EXPECT_LE(mp.tail_bound, prev);
    prev = mp.tail_bound;
  }
  const auto mp = potential_from_map(f, 8);
  EXPECT_NEAR(mp.potential.value(parse_word("00000000")), -std::log(2.8), 1e-2);
  EXPECT_GT(mp.holder_estimate, 0.0);
}

TEST(Lyapunov, PerturbedDoublingPrefersSteepFixedPoint) {
  const auto r = lyapunov_maximize(CircleMap::perturbed_doubling(0.5), 6, 8);
  EXPECT_EQ(to_string(r.word), "0");
  EXPECT_NEAR(r.exponent, std::log(2.5), 1e-12);
  EXPECT_NEAR(r.points.at(0), 0.0, 1e-14);
  EXPECT_TRUE(r.brute_force_agrees);
  EXPECT_FALSE(r.ambiguous);
}

TEST(Lyapunov, NegativePerturbationMovesMaximizer) {
  const auto f = CircleMap::perturbed_doubling(-0.5);
  const auto r = lyapunov_maximize(f, 8, 10);
  // The steepest point is 1/2, which is not periodic; the maximizer avoids 0.
  EXPECT_NE(to_string(r.word), "0");
  double mean = 0.0;
  for (double x : r.points) mean += std::log(f.derivative(x));
  EXPECT_NEAR(mean / static_cast<double>(r.points.size()), r.exponent, 1e-12);
  EXPECT_GT(r.exponent, std::log(2.0));
}

TEST(Lyapunov, PeriodicPoints) {
  EXPECT_NEAR(coded_periodic_point(CircleMap::doubling(), parse_word("01")), 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(coded_periodic_point(CircleMap::doubling(), parse_word("001")), 1.0 / 7.0, 1e-14);
  const auto f = CircleMap::perturbed_doubling(0.9);
  const double x = coded_periodic_point(f, parse_word("011"));
  EXPECT_NEAR(circle_gap(f(f(f(x))), x), 0.0, 1e-13);
}

TEST(MapFromPotential, Validation) {
  const auto zero = Potential::constant(SubshiftSpec::full_shift(2), 2, -std::log(2.0));
  EXPECT_EQ(code_of([&] { map_from_potential(Potential::constant(SubshiftSpec::golden_mean(), 1, 0), 4); }),
            Errc::InvalidArgument);
  EXPECT_EQ(code_of([&] { map_from_potential(zero, 1); }), Errc::ResolutionTooCoarse);
  EXPECT_EQ(code_of([&] { map_from_potential(zero, 25); }), Errc::BudgetExceeded);
  EXPECT_EQ(code_of([&] { map_from_potential(Potential::constant(SubshiftSpec::full_shift(2), 1, 0.0), 3); }),
            Errc::PressureNotZero);
}

TEST(MapFromPotential, ConstantGivesDoubling) {
  const auto m = map_from_potential(Potential::constant(SubshiftSpec::full_shift(2), 1, -std::log(2.0)), 5);
  ASSERT_EQ(m.theta.size(), 33u);
  for (std::size_t j = 0; j < m.theta.size(); ++j) EXPECT_NEAR(m.theta[j], j / 32.0, 1e-15);
  for (double x = 0.0; x <= 1.0; x += 0.1) EXPECT_NEAR(m.map.lift(x), 2 * x, 1e-14);
}

TEST(MapFromPotential, RoundTripRecoversPotential) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int depth = 1 + static_cast<int>(seed % 3);
    const auto a = normalize_pressure(oracle::random_potential(SubshiftSpec::full_shift(2), depth, seed));
    const auto m = map_from_potential(a, depth + 4);
    double total = 0.0;
    for (double x : m.masses) total += x;
    EXPECT_NEAR(total, 1.0, 1e-13);
    const auto back = potential_from_map(m.map, depth);
    EXPECT_LE(sup_distance(back.potential, a), 1e-12) << seed;
    EXPECT_TRUE(coding_table(m.map, depth + 4).order_preserved());
  }
}
