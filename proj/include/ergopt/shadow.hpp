#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ergopt/potential.hpp"

namespace ergopt {

/// x_0 .. x_N where d(shift x_i, x_{i+1}) <= delta; `jumps` lists the i with x_{i+1} != shift x_i.
struct PseudoOrbit {
  std::vector<SymbolicPoint> points;
  double delta = 0.0;
  std::vector<std::size_t> jumps;
  bool closed = false;

  std::size_t steps() const { return points.empty() ? 0 : points.size() - 1; }
};

/// Computes jumps, delta (the largest jump) and the closed flag. Throws InadmissiblePoint.
PseudoOrbit make_pseudo_orbit(const SubshiftSpec& spec, std::vector<SymbolicPoint> points, const MetricParams& metric);

/// Seeded open pseudo-orbit with `steps` steps and up to `jumps` jumps, each jump
/// replacing shift x_i by a point agreeing with it on the first j symbols, lambda^j <= delta_max.
PseudoOrbit random_pseudo_orbit(const SubshiftSpec& spec, const MetricParams& metric, std::size_t steps,
                                std::size_t jumps, double delta_max, std::uint64_t seed);

/// Radius below which shadowing is guaranteed: (1 - lambda) * epsilon0.
double shadow_epsilon1(const MetricParams& metric);

/// Closed pseudo-orbit: the N-periodic point with cycle x_0[0] .. x_{N-1}[0].
/// Open pseudo-orbit: the point p = x_0[0] .. x_{N-1}[0] . x_N with shift^N p = x_N.
/// Throws DeltaTooLarge when delta >= epsilon1, BranchMissing if a prepend is inadmissible.
SymbolicPoint shadow(const PseudoOrbit& po, const SubshiftSpec& spec, const MetricParams& metric);

struct ShadowingCertificate {
  SymbolicPoint p = SymbolicPoint::periodic({0});
  std::size_t jumps = 0;                 // M
  double delta = 0.0;
  double epsilon1 = 0.0;
  double shadow_radius = 0.0;            // lambda delta / (1 - lambda)
  double k1 = 0.0;                       // (M+1) Hold / (1 - lambda^alpha) / (1 - lambda)^alpha
  double birkhoff_bound = 0.0;           // M K1 delta^alpha
  double measured_max_distance = 0.0;
  double measured_sum_deviation = 0.0;
  std::size_t worst_i = 0, worst_j = 0;  // index range attaining the sum deviation
  // The same constant written with the expansion rate Lambda = 1/lambda > 1.
  double expansion_rate = 0.0;
  double k1_expansion_form = 0.0;        // (M+1) Hold / (1 - Lambda^-alpha) * (1 / (1 - Lambda^-1))^alpha
};

/// Measures both deviations for `p` against the pseudo-orbit and throws
/// BoundViolated if either exceeds its bound.
ShadowingCertificate certify(const PseudoOrbit& po, const SymbolicPoint& p, const Potential& a);

}  // namespace ergopt
