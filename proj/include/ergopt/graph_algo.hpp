#pragma once

// Max-plus algorithms on edge-weighted digraphs.

#include <cstdint>
#include <span>
#include <vector>

#include "ergopt/shift.hpp"

namespace ergopt {

enum class Backend { Serial, Parallel };

/// Maximum cycle mean by Karp's recurrence with a virtual zero source
/// (two passes, O(V) memory). Every vertex must have an in-edge.
double max_cycle_mean(const Digraph& g, std::span<const double> w, Backend backend = Backend::Parallel);

struct ExactMean {
  std::int64_t num = 0;
  std::int64_t den = 1;  // > 0, gcd(num, den) = 1
};
ExactMean max_cycle_mean_exact(const Digraph& g, std::span<const std::int64_t> w, Backend backend = Backend::Parallel);

/// x[v] = max(init[v], max over u->v of x[u] + w[e]); -inf entries of init are sources of nothing.
/// Improvements below `slack` are ignored. Throws NonConvergence after V+1 sweeps.
std::vector<double> longest_forward(const Digraph& g, std::span<const double> w, std::vector<double> init,
                                    double slack = 0.0);
/// y[u] = max(init[u], max over u->v of w[e] + y[v]).
std::vector<double> longest_backward(const Digraph& g, std::span<const double> w, std::vector<double> init,
                                     double slack = 0.0);
/// Longest nonempty walks from `source`; -inf where unreachable.
std::vector<double> longest_from_source(const Digraph& g, std::span<const double> w, VertexId source,
                                        double slack = 0.0);

/// `mean` raised by the smallest margin (0, then 1e-15 * scale growing by 4x) at which
/// longest-path relaxation against w - mean terminates. Rounding in a computed
/// maximum cycle mean can leave long cycles very slightly positive.
double safe_mean(const Digraph& g, std::span<const double> w, double mean, double slack = 0.0);

/// Edges lying on cycles of mean m0 (within tol): tight edges for the potential
/// of the best walk ending at each vertex, restricted to nontrivial strongly connected pieces.
std::vector<char> critical_edges(const Digraph& g, std::span<const double> w, double m0, double tol);

struct CycleList {
  std::vector<std::vector<VertexId>> cycles;  // each starts at its least vertex
  bool truncated = false;
};

/// Elementary cycles of the masked subgraph (Johnson), in lexicographic order
/// of vertex sequences, stopping after `cap` cycles.
CycleList elementary_cycles(const Digraph& g, std::span<const char> edge_mask, std::size_t cap);

/// Edges inside a nontrivial strongly connected component of the masked subgraph.
std::vector<char> recurrent_edges(const Digraph& g, std::span<const char> edge_mask);

}  // namespace ergopt
