#pragma once

// Transfer operators of locally constant potentials: pressure, equilibrium
// states and zero-temperature scans.

#include <memory>
#include <vector>

#include "ergopt/graph_algo.hpp"
#include "ergopt/measure.hpp"
#include "ergopt/potential.hpp"

namespace ergopt {

/// L[u][v] = exp(t A(u)) on every edge u -> v of the depth-k word graph, kept
/// as per-edge logarithms.
struct TransferMatrix {
  std::shared_ptr<const WordGraph> graph;
  double t = 1.0;
  std::vector<double> log_weights;  // per edge

  static TransferMatrix of(const Potential& a, double t);
};

struct PerronOptions {
  double rel_tol = 1e-13;
  std::size_t max_iterations = 1'000'000;
  Backend backend = Backend::Parallel;
};

/// log of the spectral radius of the transfer matrix of tA.
double pressure(const Potential& a, double t = 1.0, const PerronOptions& options = {});

struct ThermoState {
  double t = 1.0;
  double pressure = 0.0;
  InvariantMeasure equilibrium;
  double entropy = 0.0;
  double energy = 0.0;  // integral of A (not tA)
  double variational_residual = 0.0;  // |P - h - t energy|
  double eigen_residual = 0.0;        // max |pi P - pi| for the stochastic transition
  std::vector<double> log_right;      // right Perron vector of L, log scale, max 0
  std::vector<double> log_left;       // left Perron vector of L, log scale, max 0
};

/// Markov equilibrium state of tA. Throws InvalidArgument when the word graph
/// is not strongly connected, NonConvergence on iteration cap.
ThermoState equilibrium(const Potential& a, double t = 1.0, const PerronOptions& options = {});

struct DerivativeReport {
  std::vector<double> steps;    // h, h/2, h/4
  std::vector<double> errors;   // |central difference - integral of B|
  std::vector<double> ratios;   // errors[i] / errors[i+1]
  double derivative = 0.0;      // integral of B against the equilibrium of A
  double noise_floor = 1e-11;
  bool passes = false;
};

DerivativeReport pressure_derivative_check(const Potential& a, const Potential& b, double h,
                                           const PerronOptions& options = {});

/// A - P(A).
Potential normalize_pressure(const Potential& a, const PerronOptions& options = {});

/// Sum over words w with |w| <= depth_cap, ranked lexicographically among all
/// alphabet^|w| words, of 2^-(|w| a + rank) |mu(w) - nu(w)|.
double measure_distance(const InvariantMeasure& mu, const InvariantMeasure& nu, int depth_cap);

struct ZeroTempScan {
  std::vector<ThermoState> states;
  double m0 = 0.0;
  bool unique_candidate = false;
  Word candidate_cycle;                 // when unique
  std::vector<double> distances;        // to the candidate; NaN when not unique
  bool energy_nondecreasing = false;
  double final_energy_gap = 0.0;        // m0 - energy at the largest t
  int distance_depth = 3;
};

/// Throws InvalidArgument unless t_grid is nonempty, positive and increasing.
ZeroTempScan zero_temp_scan(const Potential& a, const std::vector<double>& t_grid, int distance_depth = 3,
                            const PerronOptions& options = {});

}  // namespace ergopt
