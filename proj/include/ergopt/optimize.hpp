#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "ergopt/graph_algo.hpp"
#include "ergopt/measure.hpp"
#include "ergopt/potential.hpp"

namespace ergopt {

inline constexpr double kDefaultTol = 1e-9;

struct MaxMeanOptions {
  double tol = kDefaultTol;
  std::size_t max_cycles = 4096;
  /// When positive, values times this denominator must be integers and the
  /// cycle mean is computed exactly in integer arithmetic (NotRational otherwise).
  std::int64_t exact_denominator = 0;
  Backend backend = Backend::Parallel;
};

struct MaxResult {
  double m0 = 0.0;
  /// Exact m0 = num/den when computed in rational mode.
  std::optional<std::pair<std::int64_t, std::int64_t>> exact;
  /// Critical cycles as vertex sequences of the depth-k graph, starting at the least vertex,
  /// in lexicographic order; `critical_words` are the matching symbol words (least rotations).
  std::vector<std::vector<VertexId>> critical_cycles;
  std::vector<Word> critical_words;
  std::vector<char> critical_edges;
  bool truncated = false;
  double tolerance = kDefaultTol;
};

MaxResult max_mean(const Potential& a, const MaxMeanOptions& options = {});

struct BruteForceResult {
  double best = -std::numeric_limits<double>::infinity();
  std::vector<Word> argmax;  // least rotations, sorted by (length, word)
  double runner_up = -std::numeric_limits<double>::infinity();
  std::uint64_t orbits = 0;
  int max_period = 0;
};

struct BruteForceOptions {
  double tol = 1e-12;
  std::uint64_t word_budget = std::uint64_t{1} << 26;
  Backend backend = Backend::Parallel;
};

/// Maximum Birkhoff average over all periodic orbits of period <= max_period.
BruteForceResult brute_force(const Potential& a, int max_period, const BruteForceOptions& options = {});

/// V on words of depth max(k-1, 1) with V(v) >= V(u) + A(u) - m0 on every edge
/// and equality on some in-edge of each vertex reachable from the critical set.
struct SubAction {
  Potential v;
  double m0 = 0.0;
  /// Per vertex of the depth-k graph: false where no walk from the critical set arrives.
  std::vector<char> calibrated;
};

SubAction subaction(const Potential& a, const MaxResult& r);

/// Per edge of the depth-k graph (equivalently per admissible (k+1)-word):
/// B = A - m0 + V - V o shift, which is <= 0.
struct Deficiency {
  std::vector<double> b;
  std::vector<char> mather;     // B >= -tol
  std::vector<char> recurrent;  // mather edges inside a nontrivial strongly connected piece
  double tolerance = kDefaultTol;
  std::shared_ptr<const WordGraph> graph;

  /// B as a potential of depth k+1.
  Potential as_potential(const MetricParams& metric) const;
};

Deficiency deficiency(const Potential& a, const SubAction& v, double tol = kDefaultTol);

struct ManeTable {
  std::size_t n = 0;
  std::vector<double> s;  // row-major; -inf marks "no path"
  double bound_q = 0.0;   // |V| * max(0, max (A - m0)): every nonempty path sum is below this
  double empirical_max = 0.0;
  double m0 = 0.0;
  double tolerance = kDefaultTol;
  std::shared_ptr<const WordGraph> graph;

  double at(VertexId u, VertexId v) const { return s[static_cast<std::size_t>(u) * n + v]; }
};

struct ManeOptions {
  double tol = kDefaultTol;
  std::size_t vertex_budget = 4096;
  Backend backend = Backend::Parallel;
};

ManeTable mane_table(const Potential& a, const MaxResult& r, const ManeOptions& options = {});

struct AubrySet {
  std::vector<VertexId> vertices;
  std::vector<char> member;
};

/// Vertices with |S(u,u)| <= tol. When `r` is given, throws CalibrationViolation
/// if some critical-cycle vertex is missing.
AubrySet aubry_set(const ManeTable& t, const MaxResult* r = nullptr);

InvariantMeasure orbit_measure(const SubshiftSpec& spec, std::span<const Symbol> cycle);

struct AdditivityReport {
  int depth = 0;   // working depth L
  int steps = 0;   // N
  double m0 = 0.0;
  double birkhoff = 0.0;          // sum_{j<N} [A(shift^j x) - m0]
  double s_forward = 0.0;         // S(x, shift^N x)
  double s_backward = 0.0;        // S(shift^N x, x)
  double s_loop = 0.0;            // S(x, x)
  double first_residual = 0.0;    // |S(x, shift^N x) - birkhoff|
  double additivity_residual = 0.0;  // S(x,x) - S(x, shift^N x) - S(shift^N x, x)
  double coarse_gap = 0.0;        // S at depth L-N minus S at depth L for (shift^N x, x); bounds the residual
  double resolution_bound = 0.0;  // Hold_alpha(A) lambda^((L-N-k+1) alpha) / (1 - lambda^alpha)
  bool holds = false;
};

/// Checks S(x, shift^N x) = Birkhoff sum and S(x,x) = S(x, shift^N x) + S(shift^N x, x) at
/// cylinder resolution. depth = 0 picks the smallest depth >= N + k separating the orbit.
AdditivityReport orbit_additivity_check(const Potential& a, const SymbolicPoint& x, int steps, int depth = 0,
                                        double tol = kDefaultTol);

}  // namespace ergopt
