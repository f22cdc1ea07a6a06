#pragma once

// Perturbations that lock a periodic orbit as the unique maximizer, support
// penalties, separating functionals and random genericity runs.

#include <cstdint>
#include <vector>

#include "ergopt/measure.hpp"
#include "ergopt/optimize.hpp"
#include "ergopt/potential.hpp"

namespace ergopt {

struct PerturbationParams {
  double delta = 0.05;  // bump radius
  double beta = 0.5;    // Holder exponent of the bump
  double gamma = 0.75;  // size exponent, beta < gamma <= 1
  int max_period = 12;  // brute-force confirmation cap

  /// Throws InvalidArgument.
  void validate() const;
};

struct LockCertificate {
  Word cycle;
  int depth = 0;        // working depth L
  double delta = 0.0, beta = 0.0, gamma = 0.0;
  double eta = 0.0;     // (1 - lambda) / 2
  double k1 = 0.0;      // max(1, 2 Hold_alpha(A) / ((1 - lambda^alpha)(1 - lambda)^alpha))
  double q = 0.0;       // k1 (4 / eta)^gamma
  double separation = 0.0;  // least distance between distinct orbit points
  double shift = 0.0;       // additive pressure correction t
  double phi_sup = 0.0;
  double psi_sup = 0.0;
  double psi_holder = 0.0;  // Hold_beta(Psi)
  double bound_sup = 0.0;       // 4 Q delta^gamma
  double bound_two_phi = 0.0;   // 2 |Phi|_0
  double bound_holder = 0.0;    // 4 Q delta^(gamma - beta)
  double orbit_level = 0.0;     // 3 Q delta^gamma: value of B + Phi on the orbit cylinders
  double orbit_residual = 0.0;  // max deviation of B + Phi from orbit_level on the orbit
  bool orbit_strict = false;    // B + Phi < orbit_level on every other cylinder
  double best = 0.0, runner_up = 0.0, gap = 0.0;
  bool bounds_hold = false;
};

struct LockResult {
  Potential psi;        // Phi + t at depth L
  Potential perturbed;  // A + Psi
  LockCertificate certificate;
};

/// Throws InadmissibleCycle, SeparationTooSmall, DepthBudget, LockFailed.
LockResult lock_orbit(const Potential& a, std::span<const Symbol> cycle, const PerturbationParams& params = {});

/// A - strength * dist(x, supp mu)^beta at depth max(k, support depth + 1).
Potential support_penalty(const Potential& a, const InvariantMeasure& mu, double strength, double beta = 0.5);

struct SeparatingFunctional {
  std::vector<double> coefficients;  // one per test potential
  std::size_t target = 0;
  std::vector<double> values;        // functional at each measure
  double margin = 0.0;               // value at the target minus the best other value
};

/// Coefficients whose functional is uniquely maximized at measures[target] over the
/// finite list. Throws NotExtreme when the target's moment vector lies in the hull of the others.
SeparatingFunctional separating_functional(const std::vector<InvariantMeasure>& measures,
                                           const std::vector<Potential>& tests, std::size_t target);

struct GenericitySample {
  std::size_t id = 0;
  double m0 = 0.0;
  bool unique = false;
  int period = 0;
  double gap = 0.0;
};

struct GenericityStats {
  std::vector<GenericitySample> samples;
  std::size_t unique_count = 0;
  double frequency = 0.0;
};

/// Sample i draws uniform [0,1) values per admissible depth-word from a generator
/// seeded with (seed, i), so the output does not depend on scheduling.
GenericityStats genericity_experiment(const SubshiftSpec& spec, int depth, std::size_t samples, int max_period,
                                      std::uint64_t seed);

/// The potential drawn for sample i.
Potential genericity_potential(const SubshiftSpec& spec, int depth, std::uint64_t seed, std::size_t index);

}  // namespace ergopt
