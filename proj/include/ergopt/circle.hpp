#pragma once

// Degree-2 expanding circle maps and their coding by the full 2-shift.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ergopt/optimize.hpp"
#include "ergopt/potential.hpp"

namespace ergopt {

/// Orientation preserving degree-2 map of the circle fixing 0, stored as its
/// lift F on [0,1] with F(0) = 0, F(1) = 2 and F(x+1) = F(x) + 2.
class CircleMap {
 public:
  using Fn = std::function<double(double)>;

  static CircleMap doubling();
  /// F(x) = 2x + eps sin(2 pi x) / (2 pi), F'(x) = 2 + eps cos(2 pi x); needs |eps| < 2.
  static CircleMap perturbed_doubling(double eps);
  /// Piecewise linear lift through the knots (x, F(x)), x from 0 to 1 and F(1) = F(0) + 2.
  /// `slopes`, when given, holds one derivative value per segment. A map whose
  /// knots do not fix 0 is conjugated by the rotation moving a fixed point to 0.
  static CircleMap table(std::vector<std::pair<double, double>> knots, std::vector<double> slopes = {});
  /// Callback lift; derivative by central differences with step 1e-7 when omitted.
  static CircleMap from_lift(Fn lift, Fn derivative = {}, std::string name = "callback");

  const std::string& name() const { return name_; }
  /// Lift evaluated at any real x.
  double lift(double x) const;
  /// Circle map on [0,1).
  double operator()(double x) const;
  double derivative(double x) const;
  /// x in [0,1] with F(x) = target, for target in [0,2]. Throws RootFindingFailure.
  double preimage(double target) const;
  /// Inverse branch a in {0,1}: the preimage of t in [0,1) lying in the a-th half of the lift.
  double branch(int a, double t) const { return preimage(t + a); }

  bool finite_difference() const { return finite_difference_; }
  bool is_table() const { return !knots_.empty(); }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }
  const std::vector<double>& slopes() const { return slopes_; }
  /// Rotation applied to pin the fixed point at 0 (table maps only).
  double rotation() const { return rotation_; }
  /// Smallest sampled derivative on a uniform grid.
  double min_derivative(int samples = 4096) const;

 private:
  CircleMap() = default;
  void validate() const;
  std::size_t segment(double x) const;

  std::string name_;
  Fn lift_;
  Fn derivative_;
  bool finite_difference_ = false;
  std::vector<std::pair<double, double>> knots_;
  std::vector<double> slopes_;
  double rotation_ = 0.0;
};

/// Ordered preimage tree of z = F^{-1}(1): level m holds z_a for binary words a of length m,
/// indexed with a_1 as the most significant bit, and z_{a_1..a_m} = branch(a_m, z_{a_1..a_{m-1}}).
struct CodingTable {
  int depth = 0;
  std::vector<std::vector<double>> levels;

  /// Coded point of the dyadic 0.w1: z at the reversed word.
  double anchor(std::span<const Symbol> w) const;
  /// Coding of the dyadic j / 2^m, m <= depth + 1.
  double theta(std::uint64_t j, int m) const;
  /// max |f(z_{a_1..a_m}) - z_{a_1..a_{m-1}}| over the table.
  double tree_residual(const CircleMap& f) const;
  /// Coded dyadics strictly increasing at every level.
  bool order_preserved() const;
};

/// Throws BudgetExceeded beyond depth 24.
CodingTable coding_table(const CircleMap& f, int depth);

struct MapPotential {
  Potential potential;     // -log f' at coded anchors, depth k on the full 2-shift
  double tail_bound = 0.0; // largest oscillation seen inside a cylinder, sampled 6 levels deeper
  double pressure = 0.0;
  bool pressure_ok = false;  // |pressure| <= tail_bound + 1e-9
  double holder_estimate = 0.0;  // empirical exponent of the coding, an estimate only
  bool finite_difference = false;
};

MapPotential potential_from_map(const CircleMap& f, int depth);

struct CircleOrbit {
  Word word;                   // least rotation of the maximizing cycle
  std::vector<double> points;  // circle orbit, starting at the coded point of `word`
  double exponent = 0.0;       // mean of log f' along the orbit
  double discretized_mean = 0.0;
  bool ambiguous = false;
  std::vector<Word> critical_words;
  // Cross-check by enumerating periodic orbits; absent when max_period is 0.
  int brute_force_period = 0;
  double brute_force_best = 0.0;
  bool brute_force_agrees = false;
};

CircleOrbit lyapunov_maximize(const CircleMap& f, int depth, int max_period);

/// Fixed point of branch(w_0) o branch(w_1) o ... o branch(w_{n-1}).
double coded_periodic_point(const CircleMap& f, std::span<const Symbol> w);

struct MapFromPotential {
  CircleMap map;
  int resolution = 0;
  std::vector<double> masses;  // eigenmeasure of each level-r cylinder, lexicographic order
  std::vector<double> theta;   // cumulative masses, 2^r + 1 entries from 0 to 1
};

/// Needs the full 2-shift, |P(A)| <= tol (PressureNotZero) and resolution >= depth
/// (ResolutionTooCoarse).
MapFromPotential map_from_potential(const Potential& a, int resolution, double tol = 1e-9);

}  // namespace ergopt
