#include <gtest/gtest.h>

#include <cmath>

#include "ergopt/measure.hpp"
#include "ergopt/potential.hpp"
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

// Pairwise definition over cylinder words; the first disagreement fixes the distance.
double naive_holder(const Potential& a, double alpha) {
  const auto& g = a.graph();
  const double lambda = a.metric().lambda;
  double best = 0.0;
  for (VertexId u = 0; u < g.vertex_count(); ++u)
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      if (u == v) continue;
      const auto wu = g.word(u), wv = g.word(v);
      std::size_t n = 0;
      while (wu[n] == wv[n]) ++n;
      best = std::max(best, std::abs(a.value(u) - a.value(v)) / std::pow(lambda, alpha * static_cast<double>(n)));
    }
  return best;
}

}  // namespace

TEST(Potential, ConstructionValidates) {
  const auto f2 = SubshiftSpec::full_shift(2);
  EXPECT_EQ(code_of([&] { Potential(f2, 2, {1.0, 2.0}); }), Errc::InvalidArgument);
  EXPECT_EQ(code_of([&] { Potential(f2, 1, {1.0, NAN}); }), Errc::InvalidArgument);
  EXPECT_EQ(code_of([&] { Potential::from_words(f2, 1, {{"0", 1.0}}); }), Errc::ParseError);
  EXPECT_EQ(code_of([&] { Potential::from_words(f2, 1, {{"0", 1.0}, {"1", 1.0}, {"00", 3.0}}); }), Errc::ParseError);
  EXPECT_EQ(code_of([&] { Potential::from_words(SubshiftSpec::golden_mean(), 2, {{"11", 1.0}}); }),
            Errc::InadmissiblePoint);
}

TEST(Potential, ValueLookup) {
  const auto a = Potential::from_words(SubshiftSpec::golden_mean(), 2, {{"00", 0.5}, {"01", -1.0}, {"10", 2.0}});
  EXPECT_EQ(a.size(), 3u);
  EXPECT_EQ(a.value(parse_word("0101")), -1.0);
  EXPECT_EQ(a.eval(SymbolicPoint::parse("1", "0")), 2.0);
  EXPECT_EQ(code_of([&] { a.eval(SymbolicPoint::periodic(parse_word("1"))); }), Errc::InadmissiblePoint);
  const auto by_code = a.values_by_code();
  ASSERT_EQ(by_code.size(), 4u);
  EXPECT_TRUE(std::isnan(by_code[3]));
  EXPECT_EQ(by_code[2], 2.0);
}

TEST(Potential, LiftingPreservesValues) {
  const auto a = oracle::random_potential(SubshiftSpec::golden_mean(), 2, 11);
  const auto b = a.lifted(5);
  EXPECT_EQ(b.depth(), 5);
  for (VertexId v = 0; v < b.size(); ++v) EXPECT_EQ(b.value(v), a.value(b.graph().word(v)));
  EXPECT_EQ(sup_distance(a, b), 0.0);
  EXPECT_EQ(holder_constant(a), holder_constant(b));
  EXPECT_EQ(code_of([&] { b.lifted(3); }), Errc::InvalidArgument);
}

TEST(Potential, EdgeWeightsAreSourceValues) {
  const auto a = oracle::random_potential(SubshiftSpec::full_shift(3), 2, 5);
  const auto w = a.edge_weights();
  ASSERT_EQ(w.size(), a.graph().edge_count());
  for (std::size_t e = 0; e < w.size(); ++e) EXPECT_EQ(w[e], a.value(a.graph().edge(e).source));
}

TEST(Potential, HolderMatchesPairwiseDefinition) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto spec = seed % 2 ? SubshiftSpec::golden_mean() : SubshiftSpec::full_shift(3);
    const auto a = oracle::random_potential(spec, 1 + seed % 3, seed);
    EXPECT_NEAR(holder_constant(a), naive_holder(a, 1.0), 1e-12);
    EXPECT_NEAR(holder_constant(a, 0.5), naive_holder(a, 0.5), 1e-12);
  }
  // Depth 1: neighbors differ at index 0, so the constant is the oscillation.
  const auto b = Potential(SubshiftSpec::full_shift(2), 1, {0.25, -0.5});
  EXPECT_DOUBLE_EQ(holder_constant(b), 0.75);
  EXPECT_EQ(holder_constant(Potential::constant(SubshiftSpec::full_shift(2), 3, 4.0)), 0.0);
}

TEST(Potential, AffineCombine) {
  const auto f2 = SubshiftSpec::full_shift(2);
  const auto a = Potential(f2, 1, {1.0, 2.0});
  const auto b = Potential(f2, 2, {0.0, 0.5, 1.0, 1.5});
  const auto c = affine_combine(a, 2.0, -1.0, b);
  EXPECT_EQ(c.depth(), 2);
  EXPECT_EQ(std::vector<double>(c.values().begin(), c.values().end()), (std::vector<double>{1.0, 1.5, 4.0, 4.5}));
  EXPECT_DOUBLE_EQ(sup_norm(c), 4.5);
  EXPECT_DOUBLE_EQ(sup_distance(a, b), 1.0);
  EXPECT_EQ(code_of([&] { affine_combine(a, 1, 0, Potential(SubshiftSpec::golden_mean(), 1, {0, 0})); }),
            Errc::SubshiftMismatch);
}

TEST(Discretize, ExactForLocallyConstantSampler) {
  const auto spec = SubshiftSpec::golden_mean();
  const auto truth = oracle::random_potential(spec, 3, 3);
  DiscretizeOptions opt;
  opt.modulus = [](double r) { return 2.0 * r; };
  const auto d = discretize([&](const SymbolicPoint& x) { return truth.eval(x); }, spec, 3, opt);
  EXPECT_EQ(sup_distance(d.potential, truth), 0.0);
  EXPECT_EQ(d.report.tail_bound, 0.0);
  ASSERT_TRUE(d.report.certified_bound.has_value());
  EXPECT_DOUBLE_EQ(*d.report.certified_bound, 0.25);
}

TEST(Discretize, TailBoundSeesFinerStructure) {
  const auto spec = SubshiftSpec::full_shift(2);
  const auto fine = Potential(spec, 3, {0, 0, 0, 1, 0, 0, 0, 1});
  DiscretizeOptions opt;
  opt.probes_per_cylinder = 32;
  const auto d = discretize([&](const SymbolicPoint& x) { return fine.eval(x); }, spec, 1, opt);
  EXPECT_EQ(d.report.tail_bound, 1.0);
}

TEST(Discretize, SamplerFailures) {
  const auto spec = SubshiftSpec::full_shift(2);
  EXPECT_EQ(code_of([&] { discretize([](const SymbolicPoint&) -> double { throw std::runtime_error("x"); }, spec, 1); }),
            Errc::SamplerFailure);
  EXPECT_EQ(code_of([&] { discretize([](const SymbolicPoint&) { return NAN; }, spec, 1); }), Errc::SamplerFailure);
}

TEST(Measure, PeriodicMasses) {
  const auto spec = SubshiftSpec::golden_mean();
  const auto mu = InvariantMeasure::periodic(spec, parse_word("100"));
  EXPECT_EQ(to_string(mu.cycle()), "001");
  EXPECT_DOUBLE_EQ(mu.mass(parse_word("0")), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(mu.mass(parse_word("01")), 1.0 / 3.0);
  EXPECT_EQ(mu.mass(parse_word("11")), 0.0);
  EXPECT_EQ(mu.support_words(2).size(), 3u);
  const auto a = oracle::random_potential(spec, 2, 4);
  EXPECT_NEAR(mu.integrate(a), oracle::cycle_average(a, parse_word("001")), 1e-15);
  EXPECT_EQ(code_of([&] { InvariantMeasure::periodic(spec, parse_word("11")); }), Errc::InadmissibleCycle);
  // Non-primitive input is reduced to its root.
  EXPECT_EQ(to_string(InvariantMeasure::periodic(spec, parse_word("0101")).cycle()), "01");
}

TEST(Measure, MarkovValidationAndMasses) {
  const auto g = std::make_shared<const WordGraph>(SubshiftSpec::golden_mean(), 1);
  // Parry measure of the golden mean shift.
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const double p0 = phi * phi / (1.0 + phi * phi), p1 = 1.0 / (1.0 + phi * phi);
  const std::vector<double> trans{1.0 / phi, 1.0 / (phi * phi), 1.0};
  const auto mu = InvariantMeasure::markov(g, {p0, p1}, trans);
  EXPECT_NEAR(mu.mass(parse_word("01")), p0 / (phi * phi), 1e-15);
  EXPECT_NEAR(mu.mass(parse_word("0")), mu.mass(parse_word("00")) + mu.mass(parse_word("01")), 1e-15);
  EXPECT_EQ(mu.mass(parse_word("11")), 0.0);
  EXPECT_EQ(code_of([&] { InvariantMeasure::markov(g, {0.5, 0.5}, trans); }), Errc::InvalidArgument);
  EXPECT_EQ(code_of([&] { InvariantMeasure::markov(g, {p0, p1}, {0.5, 0.4, 1.0}); }), Errc::InvalidArgument);
}

TEST(Measure, ShiftInvarianceOfCylinderMasses) {
  const auto g = std::make_shared<const WordGraph>(SubshiftSpec::golden_mean(), 1);
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const auto mu = InvariantMeasure::markov(g, {phi * phi / (1 + phi * phi), 1 / (1 + phi * phi)},
                                           {1.0 / phi, 1.0 / (phi * phi), 1.0});
  // mu[w] = sum_a mu[a w] for every word w.
  for (int n = 1; n <= 5; ++n)
    for (const auto& w : mu.support_words(n)) {
      double pre = 0.0;
      for (Symbol a = 0; a < 2; ++a) {
        Word aw{a};
        aw.insert(aw.end(), w.begin(), w.end());
        pre += mu.mass(aw);
      }
      EXPECT_NEAR(pre, mu.mass(w), 1e-14) << to_string(w);
    }
}
