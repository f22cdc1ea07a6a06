#include "ergopt/shadow.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ergopt {

PseudoOrbit make_pseudo_orbit(const SubshiftSpec& spec, std::vector<SymbolicPoint> points, const MetricParams& metric) {
  if (points.empty()) throw Error(Errc::InvalidArgument, "pseudo-orbit needs at least one point");
  for (const auto& x : points)
    if (!x.admissible_in(spec)) throw Error(Errc::InadmissiblePoint, "point " + x.to_string() + " is not admissible");
  PseudoOrbit po;
  po.points = std::move(points);
  for (std::size_t i = 0; i + 1 < po.points.size(); ++i) {
    SymbolicPoint next = po.points[i].shift();
    if (next == po.points[i + 1]) continue;
    po.jumps.push_back(i);
    po.delta = std::max(po.delta, distance(next, po.points[i + 1], metric));
  }
  po.closed = po.points.size() > 1 && po.points.back() == po.points.front();
  return po;
}

namespace {

// Random admissible walk of `len` symbols continuing `prefix` (or starting anywhere when empty).
Word random_walk(const SubshiftSpec& spec, std::mt19937_64& rng, Word prefix, std::size_t len) {
  const int a = spec.alphabet_size();
  for (std::size_t i = 0; i < len; ++i) {
    std::vector<Symbol> next;
    for (int s = 0; s < a; ++s)
      if (prefix.empty() || spec.allowed(prefix.back(), static_cast<Symbol>(s))) next.push_back(static_cast<Symbol>(s));
    prefix.push_back(next[rng() % next.size()]);
  }
  return prefix;
}

SymbolicPoint random_point(const SubshiftSpec& spec, std::mt19937_64& rng, const Word& prefix) {
  Word pre = random_walk(spec, rng, prefix, 1 + rng() % 6);
  Word head = random_walk(spec, rng, {pre.back()}, 1 + rng() % 4);
  head.erase(head.begin());
  const SymbolicPoint tail = periodic_extension(spec, head);
  return SymbolicPoint(std::move(pre), tail.cycle());
}

}  // namespace

PseudoOrbit random_pseudo_orbit(const SubshiftSpec& spec, const MetricParams& metric, std::size_t steps,
                                std::size_t jumps, double delta_max, std::uint64_t seed) {
  metric.validate();
  if (!(delta_max > 0.0 && delta_max < 1.0)) throw Error(Errc::InvalidArgument, "delta_max must lie in (0, 1)");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 rng(seq);
  std::size_t agree = 1;
  while (std::pow(metric.lambda, static_cast<double>(agree)) > delta_max) ++agree;

  std::vector<char> jump_at(steps, 0);
  for (std::size_t placed = 0; placed < std::min(jumps, steps);) {
    const std::size_t i = rng() % steps;
    if (!jump_at[i]) {
      jump_at[i] = 1;
      ++placed;
    }
  }
  std::vector<SymbolicPoint> points = {random_point(spec, rng, {})};
  for (std::size_t i = 0; i < steps; ++i) {
    SymbolicPoint next = points.back().shift();
    if (jump_at[i])
      for (int attempt = 0; attempt < 16; ++attempt) {
        SymbolicPoint alt = random_point(spec, rng, next.prefix(agree));
        if (!(alt == next)) {
          next = std::move(alt);
          break;
        }
      }
    points.push_back(std::move(next));
  }
  return make_pseudo_orbit(spec, std::move(points), metric);
}

double shadow_epsilon1(const MetricParams& metric) { return (1.0 - metric.lambda) * MetricParams::epsilon0(); }

SymbolicPoint shadow(const PseudoOrbit& po, const SubshiftSpec& spec, const MetricParams& metric) {
  if (po.points.empty()) throw Error(Errc::InvalidArgument, "empty pseudo-orbit");
  const double eps1 = shadow_epsilon1(metric);
  if (!(po.delta < eps1))
    throw Error(Errc::DeltaTooLarge, "delta " + std::to_string(po.delta) + " is not below epsilon1 " + std::to_string(eps1));
  const std::size_t n = po.steps();
  if (n == 0) return po.points.front();

  // Branch at step i prepends x_i[0]; delta < 1 forces x_{i+1}[0] == x_i[1].
  Word itinerary(n);
  for (std::size_t i = 0; i < n; ++i) itinerary[i] = po.points[i].at(0);
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!spec.allowed(itinerary[i], itinerary[i + 1]))
      throw Error(Errc::BranchMissing, "no admissible inverse branch at step " + std::to_string(i));
  if (po.closed) {
    if (!spec.allowed(itinerary.back(), itinerary.front()))
      throw Error(Errc::BranchMissing, "closing branch is not admissible");
    return SymbolicPoint::periodic(std::move(itinerary));
  }
  if (!spec.allowed(itinerary.back(), po.points.back().at(0)))
    throw Error(Errc::BranchMissing, "last branch is not admissible");
  return po.points.back().prepend(itinerary);
}

ShadowingCertificate certify(const PseudoOrbit& po, const SymbolicPoint& p, const Potential& a) {
  const MetricParams& m = a.metric();
  const double lam = m.lambda, alpha = m.alpha;
  ShadowingCertificate c;
  c.p = p;
  c.jumps = po.jumps.size();
  c.delta = po.delta;
  c.epsilon1 = shadow_epsilon1(m);
  c.shadow_radius = lam * po.delta / (1.0 - lam);
  const double hold = holder_constant(a);
  const double mp1 = static_cast<double>(c.jumps + 1);
  c.k1 = mp1 * hold / (1.0 - std::pow(lam, alpha)) / std::pow(1.0 - lam, alpha);
  c.birkhoff_bound = static_cast<double>(c.jumps) * c.k1 * std::pow(po.delta, alpha);
  c.expansion_rate = 1.0 / lam;
  c.k1_expansion_form = mp1 * hold / (1.0 - std::pow(c.expansion_rate, -alpha)) *
                        std::pow(1.0 / (1.0 - 1.0 / c.expansion_rate), alpha);

  // Prefix sums of A(shift^k p) - A(x_k); the largest window is max - min over prefixes.
  const std::size_t n = po.steps();
  double prefix = 0.0, lo = 0.0, hi = 0.0;
  std::size_t lo_at = 0, hi_at = 0;
  double best_span = 0.0;
  SymbolicPoint orbit = p;
  for (std::size_t k = 0; k <= n; ++k) {
    c.measured_max_distance = std::max(c.measured_max_distance, distance(orbit, po.points[k], m));
    prefix += a.eval(orbit) - a.eval(po.points[k]);
    if (prefix - lo > best_span) {
      best_span = prefix - lo;
      c.worst_i = lo_at;
      c.worst_j = k;
    }
    if (hi - prefix > best_span) {
      best_span = hi - prefix;
      c.worst_i = hi_at;
      c.worst_j = k;
    }
    if (prefix < lo) {
      lo = prefix;
      lo_at = k + 1;
    }
    if (prefix > hi) {
      hi = prefix;
      hi_at = k + 1;
    }
    orbit = orbit.shift();
  }
  c.measured_sum_deviation = best_span;

  constexpr double kSlack = 1e-12;
  if (c.measured_max_distance > c.shadow_radius + kSlack)
    throw Error(Errc::BoundViolated, "shadow distance " + std::to_string(c.measured_max_distance) + " exceeds " +
                                         std::to_string(c.shadow_radius));
  if (c.measured_sum_deviation > c.birkhoff_bound + kSlack)
    throw Error(Errc::BoundViolated, "Birkhoff deviation " + std::to_string(c.measured_sum_deviation) + " over [" +
                                         std::to_string(c.worst_i) + ", " + std::to_string(c.worst_j) + "] exceeds " +
                                         std::to_string(c.birkhoff_bound));
  return c;
}

}  // namespace ergopt
