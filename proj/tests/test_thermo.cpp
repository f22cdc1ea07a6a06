#include <gtest/gtest.h>

#include <cmath>

#include "ergopt/optimize.hpp"
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

const double kLogPhi = std::log((1.0 + std::sqrt(5.0)) / 2.0);

struct Frozen {
  SubshiftSpec spec;
  int depth;
  std::uint64_t seed;
  double pressure;
};

// Dense eigenvalue oracle, frozen.
const Frozen kFrozen[] = {
    {SubshiftSpec::golden_mean(), 2, 101, -0.047050154362233719},
    {SubshiftSpec::full_shift(3), 2, 202, 1.5841453263041008},
    {SubshiftSpec::full_shift(2), 3, 303, 0.80579899687915535},
};

SubshiftSpec random_mixing(std::mt19937_64& rng) {
  for (;;) {
    const int n = 2 + static_cast<int>(rng() % 2);
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (auto& row : t)
      for (int& x : row) x = rng() % 4 != 0;
    try {
      SubshiftSpec s(n, t);
      if (s.mixing()) return s;
    } catch (const Error&) {
    }
  }
}

}  // namespace

TEST(Pressure, ClosedForms) {
  EXPECT_NEAR(pressure(Potential::constant(SubshiftSpec::golden_mean(), 1, 0.0)), kLogPhi, 1e-15);
  EXPECT_NEAR(pressure(Potential::constant(SubshiftSpec::full_shift(3), 2, 0.5)), std::log(3.0) + 0.5, 1e-14);
  const auto a = Potential(SubshiftSpec::full_shift(2), 1, {0.3, -1.2});
  EXPECT_NEAR(pressure(a), std::log(std::exp(0.3) + std::exp(-1.2)), 1e-15);
  EXPECT_NEAR(pressure(a, 0.0), std::log(2.0), 1e-15);
}

TEST(Pressure, FrozenOracleValues) {
  for (const auto& f : kFrozen) {
    const auto a = oracle::random_potential(f.spec, f.depth, f.seed);
    EXPECT_NEAR(pressure(a), f.pressure, 1e-12) << f.seed;
    EXPECT_NEAR(pressure(a.lifted(f.depth + 2)), f.pressure, 1e-12) << f.seed;
  }
}

TEST(Pressure, AgreesWithDenseEigenvalues) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 40; ++i) {
    const auto spec = random_mixing(rng);
    const auto a = oracle::random_potential(spec, 1 + static_cast<int>(rng() % 3), rng(), -2.0, 2.0);
    for (double t : {0.0, 0.5, 1.0, 7.0}) EXPECT_NEAR(pressure(a, t), oracle::dense_pressure(a, t), 1e-12 * (1 + std::abs(oracle::dense_pressure(a, t))));
  }
}

TEST(Pressure, ReducibleTakesLargestComponent) {
  const SubshiftSpec upper(2, {{1, 1}, {0, 1}});
  EXPECT_FALSE(upper.mixing());
  const auto a = Potential(upper, 2, {1.0, 0.0, 2.0});
  EXPECT_NEAR(pressure(a), 2.0, 1e-14);
  EXPECT_EQ(code_of([&] { equilibrium(a); }), Errc::InvalidArgument);
}

TEST(Pressure, StructuralProperties) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 30; ++i) {
    const auto spec = random_mixing(rng);
    const auto a = oracle::random_potential(spec, 1 + static_cast<int>(rng() % 3), rng());
    const double c = std::uniform_real_distribution<double>(-3, 3)(rng);
    EXPECT_NEAR(pressure(affine_combine(a, 1.0, c)), pressure(a) + c, 1e-11);
    // Convex in t, bounded by t m0 and t m0 + topological entropy.
    const double m0 = max_mean(a).m0, htop = pressure(a, 0.0);
    for (double t : {0.5, 2.0, 9.0}) {
      const double p = pressure(a, t);
      EXPECT_LE(p, (pressure(a, t - 0.5) + pressure(a, t + 0.5)) / 2 + 1e-11);
      EXPECT_GE(p, t * m0 - 1e-11);
      EXPECT_LE(p, t * m0 + htop + 1e-11);
    }
    EXPECT_NEAR(pressure(normalize_pressure(a)), 0.0, 1e-11);
  }
}

TEST(Equilibrium, ParryMeasure) {
  const auto st = equilibrium(Potential::constant(SubshiftSpec::golden_mean(), 1, 0.0));
  EXPECT_NEAR(st.entropy, kLogPhi, 1e-12);
  EXPECT_NEAR(st.pressure, kLogPhi, 1e-14);
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  EXPECT_NEAR(st.equilibrium.mass(parse_word("1")), 1.0 / (1.0 + phi * phi), 1e-12);
}

TEST(Equilibrium, VariationalPrincipleAndEigenvectors) {
  std::mt19937_64 rng(44);
  for (int i = 0; i < 30; ++i) {
    const auto spec = random_mixing(rng);
    const auto a = oracle::random_potential(spec, 1 + static_cast<int>(rng() % 3), rng());
    const double t = 0.5 + static_cast<double>(i % 5);
    const auto st = equilibrium(a, t);
    EXPECT_LE(st.variational_residual, 1e-10);
    EXPECT_LE(st.eigen_residual, 1e-10);
    EXPECT_NEAR(st.pressure, st.entropy + t * st.energy, 1e-10);
    EXPECT_GE(st.entropy, -1e-12);
    EXPECT_LE(st.entropy, pressure(a, 0.0) + 1e-10);
    EXPECT_LE(st.energy, max_mean(a).m0 + 1e-12);
    EXPECT_NEAR(st.equilibrium.integrate(a), st.energy, 1e-12);

    const auto l = oracle::dense_transfer(a, t);
    const double rho = std::exp(st.pressure);
    const auto n = static_cast<Eigen::Index>(st.log_right.size());
    Eigen::VectorXd r(n), lf(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      r[j] = std::exp(st.log_right[static_cast<std::size_t>(j)]);
      lf[j] = std::exp(st.log_left[static_cast<std::size_t>(j)]);
    }
    EXPECT_LE((l * r - rho * r).cwiseAbs().maxCoeff(), 1e-9 * rho);
    EXPECT_LE((l.transpose() * lf - rho * lf).cwiseAbs().maxCoeff(), 1e-9 * rho);
  }
}

TEST(Equilibrium, LargeTemperatureStaysFinite) {
  const auto a = oracle::random_potential(SubshiftSpec::full_shift(3), 3, 77);
  const double m0 = max_mean(a).m0;
  for (double t : {64.0, 512.0, 4096.0}) {
    const auto st = equilibrium(a, t);
    EXPECT_TRUE(std::isfinite(st.energy));
    EXPECT_LE(st.energy, m0 + 1e-12);
    EXPECT_GE(st.energy, m0 - 10.0 / t);
  }
}

TEST(Derivative, CentralDifferenceConverges) {
  const auto spec = SubshiftSpec::golden_mean();
  const auto a = oracle::random_potential(spec, 2, 1), b = oracle::random_potential(spec, 3, 2);
  const auto rep = pressure_derivative_check(a, b, 1e-2);
  EXPECT_TRUE(rep.passes);
  ASSERT_EQ(rep.steps.size(), 3u);
  EXPECT_NEAR(rep.derivative, equilibrium(a).equilibrium.integrate(b), 1e-12);
  // Derivative of t -> P(tA) is the energy.
  const auto st = equilibrium(a, 2.0);
  const double h = 1e-5;
  EXPECT_NEAR((pressure(a, 2.0 + h) - pressure(a, 2.0 - h)) / (2 * h), st.energy, 1e-8);
}

TEST(MeasureDistance, Examples) {
  const auto spec = SubshiftSpec::full_shift(2);
  const auto zero = InvariantMeasure::periodic(spec, parse_word("0"));
  const auto one = InvariantMeasure::periodic(spec, parse_word("1"));
  EXPECT_EQ(measure_distance(zero, zero, 4), 0.0);
  EXPECT_DOUBLE_EQ(measure_distance(zero, one, 1), 0.25 + 0.125);
  EXPECT_DOUBLE_EQ(measure_distance(zero, one, 3), measure_distance(one, zero, 3));
  const auto alt = InvariantMeasure::periodic(spec, parse_word("01"));
  EXPECT_LE(measure_distance(zero, alt, 3), measure_distance(zero, alt, 2) + 1.0 / 64 * 8);
  EXPECT_LE(measure_distance(zero, alt, 2), measure_distance(zero, one, 2) + measure_distance(one, alt, 2) + 1e-15);
}

TEST(ZeroTemperature, ScanConvergesToMaximizingOrbit) {
  const auto a = Potential::from_words(SubshiftSpec::full_shift(2), 2, {{"00", 0.1}, {"01", 0.9}, {"10", 0.3}, {"11", 0.2}});
  const std::vector<double> grid{1, 4, 16, 64, 256};
  const auto scan = zero_temp_scan(a, grid);
  EXPECT_NEAR(scan.m0, 0.6, 1e-15);
  ASSERT_TRUE(scan.unique_candidate);
  EXPECT_EQ(to_string(scan.candidate_cycle), "01");
  EXPECT_TRUE(scan.energy_nondecreasing);
  ASSERT_EQ(scan.distances.size(), grid.size());
  for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_LE(scan.distances[i], scan.distances[i - 1] + 1e-15);
  EXPECT_LE(scan.distances.back(), 1e-6);
  EXPECT_LE(scan.final_energy_gap, 1e-6);
  EXPECT_GE(scan.final_energy_gap, -1e-12);
}

TEST(ZeroTemperature, TiesAreNotUnique) {
  const auto a = Potential(SubshiftSpec::full_shift(2), 1, {1.0, 1.0});
  const auto scan = zero_temp_scan(a, {1, 2});
  EXPECT_FALSE(scan.unique_candidate);
  for (double d : scan.distances) EXPECT_TRUE(std::isnan(d));
}

TEST(ZeroTemperature, GridValidation) {
  const auto a = Potential(SubshiftSpec::full_shift(2), 1, {1.0, 0.0});
  EXPECT_EQ(code_of([&] { zero_temp_scan(a, {}); }), Errc::InvalidArgument);
  EXPECT_EQ(code_of([&] { zero_temp_scan(a, {2, 1}); }), Errc::InvalidArgument);
  EXPECT_EQ(code_of([&] { zero_temp_scan(a, {0, 1}); }), Errc::InvalidArgument);
}
