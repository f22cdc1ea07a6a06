#include "ergopt/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>

#include "ergopt/kernels.hpp"
#include "ergopt/optimize.hpp"

namespace ergopt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(std::span<const double> x) {
  double hi = kNegInf;
  for (double v : x) hi = std::max(hi, v);
  if (hi == kNegInf) return kNegInf;
  double s = 0.0;
  for (double v : x) s += std::exp(v - hi);
  return hi + std::log(s);
}

struct PerronResult {
  double log_rho = 0.0;
  std::vector<double> vec;  // normalized to max 1
};

// Perron root and vector of a nonnegative irreducible matrix given per edge,
// iterating I + M so that periodic graphs converge too.
PerronResult perron(const Digraph& g, std::span<const double> m, bool left, const PerronOptions& opt) {
  const std::size_t n = g.vertex_count();
  std::vector<double> x(n, 1.0), y(n), z(n);
  for (std::size_t it = 0; it < opt.max_iterations; ++it) {
    if (opt.backend == Backend::Parallel) {
      left ? kernels::parallel::transfer_left(g, m, x, y) : kernels::parallel::transfer_right(g, m, x, y);
    } else {
      left ? kernels::serial::transfer_left(g, m, x, y) : kernels::serial::transfer_right(g, m, x, y);
    }
    // Collatz-Wielandt bounds on the root of I + M.
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, top = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      z[v] = x[v] + y[v];
      top = std::max(top, z[v]);
      if (x[v] > 1e-250) {
        const double r = z[v] / x[v];
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
    }
    if (!(top > 0.0) || !std::isfinite(top)) throw Error(Errc::NonConvergence, "power iteration degenerated");
    for (std::size_t v = 0; v < n; ++v) x[v] = z[v] / top;
    if (hi - lo <= opt.rel_tol * (hi - 1.0)) {
      const double rho = 0.5 * (hi + lo) - 1.0;
      if (!(rho > 0.0)) throw Error(Errc::NonConvergence, "spectral radius is not positive");
      return {std::log(rho), std::move(x)};
    }
  }
  throw Error(Errc::NonConvergence, "power iteration hit the iteration cap");
}

// Nontrivial strongly connected pieces, each as a sorted vertex list.
std::vector<std::vector<VertexId>> pieces(const Digraph& g) {
  auto comp = strongly_connected_components(g.vertex_count(), g.edges());
  int count = 0;
  for (int c : comp) count = std::max(count, c + 1);
  std::vector<std::vector<VertexId>> by(count);
  for (VertexId v = 0; v < g.vertex_count(); ++v) by[comp[v]].push_back(v);
  std::vector<char> nontrivial(count, 0);
  for (const Edge& e : g.edges())
    if (comp[e.source] == comp[e.target]) nontrivial[comp[e.source]] = 1;
  std::vector<std::vector<VertexId>> out;
  for (int c = 0; c < count; ++c)
    if (nontrivial[c]) out.push_back(std::move(by[c]));
  return out;
}

// Frame in which every entry is <= 1 and every vertex keeps an out-edge equal to 1:
// w' = w - m + f(v) - f(u) with f(u) the best value of w - m along walks into the critical set.
struct Frame {
  double mean = 0.0;
  std::vector<double> f;
  std::vector<double> m;  // exp(w') per edge
};

Frame forward_frame(const Digraph& g, std::span<const double> w, Backend backend) {
  Frame fr;
  const double m0 = max_cycle_mean(g, w, backend);
  double scale = 1.0;
  for (double x : w) scale = std::max(scale, std::abs(x));
  // Any reference mean gives an exact similarity; this one keeps every cycle non-positive.
  fr.mean = safe_mean(g, w, m0, 1e-14 * scale);
  std::vector<double> reduced(w.size());
  for (std::size_t e = 0; e < w.size(); ++e) reduced[e] = w[e] - fr.mean;
  // Best walk into the critical set, so every vertex keeps a tight out-edge.
  const auto crit = critical_edges(g, w, m0, 1e-12 * scale);
  std::vector<double> init(g.vertex_count(), kNegInf);
  for (std::size_t e = 0; e < w.size(); ++e)
    if (crit[e]) init[g.edge(e).source] = 0.0;
  fr.f = longest_backward(g, reduced, std::move(init), 1e-14 * scale);
  fr.m.resize(w.size());
  for (std::size_t e = 0; e < w.size(); ++e) {
    const Edge& ed = g.edge(e);
    fr.m[e] = std::exp(reduced[e] + fr.f[ed.target] - fr.f[ed.source]);
  }
  return fr;
}

double piece_pressure(const Digraph& g, std::span<const double> w, const PerronOptions& opt) {
  // Exact forms: single vertex and 2x2.
  if (g.vertex_count() == 1) return log_sum_exp(w);
  if (g.vertex_count() == 2) {
    double hi = kNegInf;
    for (double v : w) hi = std::max(hi, v);
    double a[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t e = 0; e < g.edge_count(); ++e) a[g.edge(e).source][g.edge(e).target] += std::exp(w[e] - hi);
    const double d = a[0][0] - a[1][1];
    const double root = 0.5 * (a[0][0] + a[1][1] + std::sqrt(d * d + 4.0 * a[0][1] * a[1][0]));
    return hi + std::log(root);
  }
  Frame fr = forward_frame(g, w, opt.backend);
  return fr.mean + perron(g, fr.m, false, opt).log_rho;
}

bool full_shift_depth_one(const Potential& a) { return a.depth() == 1 && a.subshift().is_full_shift(); }

}  // namespace

TransferMatrix TransferMatrix::of(const Potential& a, double t) {
  if (!std::isfinite(t)) throw Error(Errc::InvalidArgument, "inverse temperature must be finite");
  TransferMatrix tm;
  tm.graph = a.graph_ptr();
  tm.t = t;
  tm.log_weights = a.edge_weights();
  for (double& v : tm.log_weights) v *= t;
  return tm;
}

double pressure(const Potential& a, double t, const PerronOptions& opt) {
  if (full_shift_depth_one(a)) {
    std::vector<double> tv(a.values().begin(), a.values().end());
    for (double& v : tv) v *= t;
    return log_sum_exp(tv);
  }
  const TransferMatrix tm = TransferMatrix::of(a, t);
  const Digraph& g = tm.graph->digraph();
  auto ps = pieces(g);
  if (ps.size() == 1 && ps[0].size() == g.vertex_count()) return piece_pressure(g, tm.log_weights, opt);
  double best = kNegInf;
  for (const auto& piece : ps) {
    std::vector<std::int64_t> local(g.vertex_count(), -1);
    for (std::size_t i = 0; i < piece.size(); ++i) local[piece[i]] = static_cast<std::int64_t>(i);
    std::vector<double> w;
    for (VertexId u : piece)
      for (std::size_t e = g.out_begin(u); e < g.out_end(u); ++e)
        if (local[g.edge(e).target] >= 0) w.push_back(tm.log_weights[e]);
    best = std::max(best, piece_pressure(g.induced(piece), w, opt));
  }
  if (best == kNegInf) throw Error(Errc::NoCycle, "word graph has no cycle");
  return best;
}

ThermoState equilibrium(const Potential& a, double t, const PerronOptions& opt) {
  const TransferMatrix tm = TransferMatrix::of(a, t);
  const Digraph& g = tm.graph->digraph();
  const std::size_t n = g.vertex_count(), m = g.edge_count();
  auto ps = pieces(g);
  if (ps.size() != 1 || ps[0].size() != n)
    throw Error(Errc::InvalidArgument, "equilibrium state needs an irreducible word graph");

  Frame fr = forward_frame(g, tm.log_weights, opt.backend);
  PerronResult right = perron(g, fr.m, false, opt);
  const double rho = std::exp(right.log_rho);

  // Stochastic transition P(u,v) = M'(u,v) r(v) / (rho r(u)), rows renormalized.
  std::vector<double> p(m);
  for (VertexId u = 0; u < n; ++u) {
    double row = 0.0;
    for (std::size_t e = g.out_begin(u); e < g.out_end(u); ++e) {
      p[e] = fr.m[e] * right.vec[g.edge(e).target] / (rho * right.vec[u]);
      row += p[e];
    }
    for (std::size_t e = g.out_begin(u); e < g.out_end(u); ++e) p[e] /= row;
  }
  PerronResult stat = perron(g, p, true, opt);
  std::vector<double> pi = std::move(stat.vec);
  double total = 0.0;
  for (double v : pi) total += v;
  for (double& v : pi) v /= total;

  ThermoState s{t,
                fr.mean + right.log_rho,
                InvariantMeasure::markov(tm.graph, pi, p),
                0.0,
                0.0,
                0.0,
                0.0,
                {},
                {}};
  std::vector<double> flow(n, 0.0);
  for (std::size_t e = 0; e < m; ++e) {
    const Edge& ed = g.edge(e);
    flow[ed.target] += pi[ed.source] * p[e];
    if (p[e] > 0.0) s.entropy -= pi[ed.source] * p[e] * std::log(p[e]);
  }
  for (VertexId u = 0; u < n; ++u) {
    s.energy += pi[u] * a.value(u);
    s.eigen_residual = std::max(s.eigen_residual, std::abs(flow[u] - pi[u]));
  }
  if (full_shift_depth_one(a)) s.pressure = pressure(a, t, opt);
  s.variational_residual = std::abs(s.pressure - s.entropy - t * s.energy);

  // log r = log r' + f; log l = log pi - log r.
  s.log_right.resize(n);
  s.log_left.resize(n);
  double rmax = kNegInf, lmax = kNegInf;
  for (VertexId u = 0; u < n; ++u) {
    s.log_right[u] = std::log(right.vec[u]) + fr.f[u];
    s.log_left[u] = std::log(pi[u]) - s.log_right[u];
    rmax = std::max(rmax, s.log_right[u]);
    lmax = std::max(lmax, s.log_left[u]);
  }
  for (VertexId u = 0; u < n; ++u) {
    s.log_right[u] -= rmax;
    s.log_left[u] -= lmax;
  }
  return s;
}

DerivativeReport pressure_derivative_check(const Potential& a, const Potential& b, double h,
                                           const PerronOptions& opt) {
  if (!(a.subshift() == b.subshift())) throw Error(Errc::SubshiftMismatch, "potentials live on different subshifts");
  if (!(h > 0.0)) throw Error(Errc::InvalidArgument, "step must be positive");
  DerivativeReport r;
  r.derivative = equilibrium(a, 1.0, opt).equilibrium.integrate(b);
  for (int i = 0; i < 3; ++i) {
    const double step = h / std::pow(2.0, i);
    const double up = pressure(affine_combine(a, 1.0, 0.0, affine_combine(b, step, 0.0)), 1.0, opt);
    const double down = pressure(affine_combine(a, 1.0, 0.0, affine_combine(b, -step, 0.0)), 1.0, opt);
    r.steps.push_back(step);
    r.errors.push_back(std::abs((up - down) / (2.0 * step) - r.derivative));
  }
  r.passes = true;
  for (int i = 0; i < 2; ++i) {
    r.ratios.push_back(r.errors[i + 1] > 0.0 ? r.errors[i] / r.errors[i + 1] : std::numeric_limits<double>::infinity());
    const bool quiet = r.errors[i] <= r.noise_floor;
    if (!quiet && !(r.ratios[i] >= 3.5 && r.ratios[i] <= 4.5)) r.passes = false;
  }
  return r;
}

Potential normalize_pressure(const Potential& a, const PerronOptions& opt) {
  return affine_combine(a, 1.0, -pressure(a, 1.0, opt));
}

double measure_distance(const InvariantMeasure& mu, const InvariantMeasure& nu, int depth_cap) {
  if (!(mu.subshift() == nu.subshift())) throw Error(Errc::SubshiftMismatch, "measures live on different subshifts");
  const int a = mu.subshift().alphabet_size();
  double sum = 0.0;
  for (int len = 1; len <= depth_cap; ++len) {
    Word w(len, 0);
    for (double rank = 0.0;; rank += 1.0) {
      const double diff = std::abs(mu.mass(w) - nu.mass(w));
      if (diff > 0.0) sum += std::exp2(-(static_cast<double>(len) * a + rank)) * diff;
      int i = len - 1;
      while (i >= 0 && w[i] == a - 1) w[i--] = 0;
      if (i < 0) break;
      ++w[i];
    }
  }
  return sum;
}

ZeroTempScan zero_temp_scan(const Potential& a, const std::vector<double>& t_grid, int distance_depth,
                            const PerronOptions& opt) {
  if (t_grid.empty()) throw Error(Errc::InvalidArgument, "temperature grid is empty");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0)) throw Error(Errc::InvalidArgument, "temperatures must be positive");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw Error(Errc::InvalidArgument, "temperatures must increase");
  }
  ZeroTempScan scan;
  scan.distance_depth = distance_depth;
  const MaxResult r = max_mean(a, {.backend = opt.backend});
  scan.m0 = r.m0;
  scan.unique_candidate = r.critical_words.size() == 1 && !r.truncated;
  std::optional<InvariantMeasure> candidate;
  if (scan.unique_candidate) {
    scan.candidate_cycle = r.critical_words.front();
    candidate = orbit_measure(a.subshift(), scan.candidate_cycle);
  }

  // Grid points are independent.
  const std::size_t n = t_grid.size();
  std::vector<std::optional<ThermoState>> states(n);
  std::vector<std::exception_ptr> errors(n);
  PerronOptions inner = opt;
  inner.backend = Backend::Serial;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < n; ++i) {
    try {
      states[i] = equilibrium(a, t_grid[i], inner);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  scan.energy_nondecreasing = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = candidate ? measure_distance(states[i]->equilibrium, *candidate, distance_depth)
                               : std::numeric_limits<double>::quiet_NaN();
    scan.distances.push_back(d);
    if (i > 0 && states[i]->energy < states[i - 1]->energy - 1e-12) scan.energy_nondecreasing = false;
    scan.states.push_back(std::move(*states[i]));
  }
  scan.final_energy_gap = scan.m0 - scan.states.back().energy;
  return scan;
}

}  // namespace ergopt
