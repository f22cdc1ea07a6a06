#include "ergopt/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "ergopt/thermo.hpp"

namespace ergopt {

void PerturbationParams::validate() const {
  if (!(delta > 0.0)) throw Error(Errc::InvalidArgument, "delta must be positive");
  if (!(beta > 0.0 && beta < gamma && gamma <= 1.0))
    throw Error(Errc::InvalidArgument, "exponents must satisfy 0 < beta < gamma <= 1");
  if (max_period < 1) throw Error(Errc::InvalidArgument, "max_period must be >= 1");
}

namespace {

std::size_t common_prefix(std::span<const Symbol> a, std::span<const Symbol> b) {
  std::size_t n = 0;
  while (n < a.size() && n < b.size() && a[n] == b[n]) ++n;
  return n;
}

}  // namespace

LockResult lock_orbit(const Potential& a, std::span<const Symbol> cycle, const PerturbationParams& params) {
  params.validate();
  const SubshiftSpec& spec = a.subshift();
  if (cycle.empty() || !spec.cyclically_admissible(cycle))
    throw Error(Errc::InadmissibleCycle, "cycle " + to_string(cycle) + " is not admissible");
  const Word p = least_rotation(primitive_root(cycle));
  const std::size_t period = p.size();
  const MetricParams& metric = a.metric();
  const double lam = metric.lambda, alpha = metric.alpha;
  const int k = a.depth();

  // Orbit points and their separation.
  std::vector<SymbolicPoint> orbit;
  for (std::size_t i = 0; i < period; ++i) orbit.push_back(SymbolicPoint::periodic(p).shift(i));
  double separation = 1.0;
  for (std::size_t i = 0; i < period; ++i)
    for (std::size_t j = i + 1; j < period; ++j) separation = std::min(separation, distance(orbit[i], orbit[j], metric));
  if (!(params.delta < separation / 2.0))
    throw Error(Errc::SeparationTooSmall, "delta must be below half the orbit separation " + std::to_string(separation));

  const int resolve = static_cast<int>(std::ceil(std::log(params.delta) / std::log(lam)));
  const int depth = std::max({resolve + k, static_cast<int>(period) + 1, k + 1});
  {
    double words = 1.0;
    for (int i = 0; i < depth; ++i) words *= spec.alphabet_size();
    if (words > static_cast<double>(kDefaultVertexBudget))
      throw Error(Errc::DepthBudget, "working depth " + std::to_string(depth) + " exceeds the vertex budget");
  }

  const MaxResult r = max_mean(a);
  const SubAction sa = subaction(a, r);
  const Deficiency def = deficiency(a, sa);
  const Potential b = def.as_potential(metric).lifted(depth);

  LockCertificate c;
  c.cycle = p;
  c.depth = depth;
  c.delta = params.delta;
  c.beta = params.beta;
  c.gamma = params.gamma;
  c.eta = (1.0 - lam) / 2.0;
  c.k1 = std::max(1.0, 2.0 * holder_constant(a, alpha) / ((1.0 - std::pow(lam, alpha)) * std::pow(1.0 - lam, alpha)));
  c.q = c.k1 * std::pow(4.0 / c.eta, params.gamma);
  c.separation = separation;
  const double db = std::pow(params.delta, params.beta);
  const double slope = 3.0 * c.q * std::pow(params.delta, params.gamma - params.beta);
  c.orbit_level = 3.0 * c.q * std::pow(params.delta, params.gamma);

  std::vector<Word> orbit_words;
  std::vector<double> orbit_b;
  for (const auto& q : orbit) {
    orbit_words.push_back(q.prefix(depth));
    orbit_b.push_back(b.value(orbit_words.back()));
  }

  const auto graph = b.graph_ptr();
  std::vector<double> phi(graph->vertex_count(), 0.0);
  std::vector<char> on_orbit(graph->vertex_count(), 0);
  for (VertexId v = 0; v < graph->vertex_count(); ++v) {
    const auto w = graph->word(v);
    std::size_t best = 0, nearest = 0;
    for (std::size_t i = 0; i < period; ++i) {
      const std::size_t l = common_prefix(w, orbit_words[i]);
      if (l > best) {
        best = l;
        nearest = i;
      }
    }
    on_orbit[v] = best >= static_cast<std::size_t>(depth);
    const double dist = on_orbit[v] ? 0.0 : std::pow(lam, static_cast<double>(best));
    phi[v] = std::max(0.0, (slope - orbit_b[nearest] / db) * (db - std::pow(dist, params.beta)));
  }
  const Potential phi_pot(graph, phi, metric);

  double other_max = -std::numeric_limits<double>::infinity();
  for (VertexId v = 0; v < graph->vertex_count(); ++v) {
    const double level = b.value(v) + phi[v];
    if (on_orbit[v])
      c.orbit_residual = std::max(c.orbit_residual, std::abs(level - c.orbit_level));
    else
      other_max = std::max(other_max, level);
  }
  c.orbit_strict = other_max < c.orbit_level;

  const Potential with_phi = affine_combine(a, 1.0, 0.0, phi_pot);
  c.shift = pressure(a) - pressure(with_phi);
  Potential psi = affine_combine(phi_pot, 1.0, c.shift);
  c.phi_sup = sup_norm(phi_pot);
  c.psi_sup = sup_norm(psi);
  c.psi_holder = holder_constant(psi, params.beta);
  c.bound_sup = 4.0 * c.q * std::pow(params.delta, params.gamma);
  c.bound_two_phi = 2.0 * c.phi_sup;
  c.bound_holder = 4.0 * c.q * std::pow(params.delta, params.gamma - params.beta);
  c.bounds_hold = c.psi_sup <= c.bound_two_phi + 1e-12 && c.psi_sup <= c.bound_sup + 1e-12 &&
                  c.psi_holder <= c.bound_holder + 1e-12;

  Potential perturbed = affine_combine(a, 1.0, 0.0, psi);
  const BruteForceResult bf = brute_force(perturbed, std::max(params.max_period, static_cast<int>(period)));
  c.best = bf.best;
  c.runner_up = bf.runner_up;
  c.gap = bf.best - bf.runner_up;
  if (bf.argmax.size() != 1 || bf.argmax.front() != p || !(c.gap > 0.0))
    throw Error(Errc::LockFailed, "brute force does not confirm " + to_string(p) + " as the unique maximizer");
  return {std::move(psi), std::move(perturbed), std::move(c)};
}

Potential support_penalty(const Potential& a, const InvariantMeasure& mu, double strength, double beta) {
  if (!(a.subshift() == mu.subshift())) throw Error(Errc::SubshiftMismatch, "measure lives on another subshift");
  if (!(beta > 0.0 && beta <= 1.0)) throw Error(Errc::InvalidArgument, "beta must lie in (0, 1]");
  const int support_depth = mu.kind() == InvariantMeasure::Kind::Periodic
                                ? static_cast<int>(mu.cycle().size()) + 1
                                : mu.graph().depth() + 1;
  const int depth = std::max(a.depth(), support_depth);
  const double lam = a.metric().lambda;
  auto penalty = [&](std::span<const Symbol> w) {
    std::size_t j = 0;
    while (j < w.size() && mu.mass(w.first(j + 1)) > 0.0) ++j;
    if (j == w.size()) return 0.0;
    return -strength * std::pow(std::pow(lam, static_cast<double>(j)), beta);
  };
  const Potential psi = Potential::from_function(a.subshift(), depth, penalty, a.metric());
  return affine_combine(a, 1.0, 0.0, psi);
}

namespace {

// Least-norm point of the convex hull of the columns of p (Wolfe's method).
Eigen::VectorXd min_norm_point(const Eigen::MatrixXd& p) {
  const double scale = std::max(1.0, p.colwise().squaredNorm().maxCoeff());
  const double tol = 1e-12 * scale;
  Eigen::Index first = 0;
  p.colwise().squaredNorm().minCoeff(&first);
  std::vector<Eigen::Index> set = {first};
  std::vector<double> weights = {1.0};
  Eigen::VectorXd x = p.col(first);

  for (int major = 0; major < 1000; ++major) {
    Eigen::Index j = 0;
    (p.transpose() * x).minCoeff(&j);
    if (x.dot(p.col(j)) > x.squaredNorm() - tol) break;
    if (std::find(set.begin(), set.end(), j) != set.end()) break;
    set.push_back(j);
    weights.push_back(0.0);
    for (int minor = 0; minor < 1000; ++minor) {
      const Eigen::Index s = static_cast<Eigen::Index>(set.size());
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(s + 1, s + 1);
      for (Eigen::Index u = 0; u < s; ++u) {
        for (Eigen::Index v = 0; v < s; ++v) kkt(u, v) = p.col(set[u]).dot(p.col(set[v]));
        kkt(u, s) = kkt(s, u) = 1.0;
      }
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s + 1);
      rhs(s) = 1.0;
      const Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
      const Eigen::VectorXd v = sol.head(s);
      if (v.minCoeff() > 1e-14) {
        for (Eigen::Index u = 0; u < s; ++u) weights[u] = v(u);
        break;
      }
      double theta = 1.0;
      for (Eigen::Index u = 0; u < s; ++u)
        if (v(u) <= 1e-14) theta = std::min(theta, weights[u] / (weights[u] - v(u)));
      std::vector<Eigen::Index> keep_set;
      std::vector<double> keep_w;
      for (Eigen::Index u = 0; u < s; ++u) {
        const double w = weights[u] + theta * (v(u) - weights[u]);
        if (w > 1e-14) {
          keep_set.push_back(set[u]);
          keep_w.push_back(w);
        }
      }
      set = std::move(keep_set);
      weights = std::move(keep_w);
      if (set.size() <= 1) break;
    }
    double total = 0.0;
    for (double w : weights) total += w;
    x.setZero();
    for (std::size_t u = 0; u < set.size(); ++u) x += (weights[u] / total) * p.col(set[u]);
  }
  return x;
}

}  // namespace

SeparatingFunctional separating_functional(const std::vector<InvariantMeasure>& measures,
                                           const std::vector<Potential>& tests, std::size_t target) {
  if (measures.size() < 2) throw Error(Errc::InvalidArgument, "need at least two measures");
  if (tests.empty()) throw Error(Errc::InvalidArgument, "need at least one test potential");
  if (target >= measures.size()) throw Error(Errc::InvalidArgument, "target index out of range");
  const Eigen::Index dim = static_cast<Eigen::Index>(tests.size());
  Eigen::MatrixXd moments(dim, static_cast<Eigen::Index>(measures.size()));
  for (std::size_t i = 0; i < measures.size(); ++i)
    for (std::size_t j = 0; j < tests.size(); ++j) moments(j, i) = measures[i].integrate(tests[j]);

  Eigen::MatrixXd diffs(dim, static_cast<Eigen::Index>(measures.size() - 1));
  Eigen::Index col = 0;
  for (std::size_t i = 0; i < measures.size(); ++i)
    if (i != target) diffs.col(col++) = moments.col(i) - moments.col(target);
  const Eigen::VectorXd d = min_norm_point(diffs);
  if (d.norm() <= 1e-10) throw Error(Errc::NotExtreme, "target moment vector is in the hull of the others");

  SeparatingFunctional out;
  out.target = target;
  const Eigen::VectorXd lambda = -d;
  out.coefficients.assign(lambda.data(), lambda.data() + lambda.size());
  double other = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < measures.size(); ++i) {
    out.values.push_back(lambda.dot(moments.col(static_cast<Eigen::Index>(i))));
    if (i != target) other = std::max(other, out.values.back());
  }
  out.margin = out.values[target] - other;
  if (!(out.margin > 1e-12)) throw Error(Errc::NotExtreme, "no functional separates the target");
  return out;
}

Potential genericity_potential(const SubshiftSpec& spec, int depth, std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  auto graph = std::make_shared<const WordGraph>(spec, depth);
  std::vector<double> values(graph->vertex_count());
  for (double& v : values) v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return Potential(graph, std::move(values));
}

GenericityStats genericity_experiment(const SubshiftSpec& spec, int depth, std::size_t samples, int max_period,
                                      std::uint64_t seed) {
  GenericityStats stats;
  stats.samples.resize(samples);
  std::vector<std::exception_ptr> errors(samples);
  const std::int64_t n = static_cast<std::int64_t>(samples);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      const Potential a = genericity_potential(spec, depth, seed, static_cast<std::size_t>(i));
      const MaxResult r = max_mean(a, {.backend = Backend::Serial});
      const BruteForceResult bf = brute_force(a, max_period, {.backend = Backend::Serial});
      GenericitySample& s = stats.samples[i];
      s.id = static_cast<std::size_t>(i);
      s.m0 = r.m0;
      s.gap = bf.best - bf.runner_up;
      s.period = bf.argmax.empty() ? 0 : static_cast<int>(bf.argmax.front().size());
      s.unique = bf.argmax.size() == 1 && r.critical_words.size() == 1 && s.gap > 1e-6 &&
                 std::abs(r.m0 - bf.best) <= 1e-9;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (const auto& s : stats.samples) stats.unique_count += s.unique;
  stats.frequency = samples ? static_cast<double>(stats.unique_count) / static_cast<double>(samples) : 0.0;
  return stats;
}

}  // namespace ergopt
