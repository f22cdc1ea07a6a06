#include "ergopt/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ergopt/kernels.hpp"

namespace ergopt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double weight_scale(std::span<const double> w) {
  double s = 1.0;
  for (double x : w) s = std::max(s, std::abs(x));
  return s;
}

std::vector<double> reduced_weights(const Potential& a, double m0) {
  std::vector<double> w = a.edge_weights();
  for (double& x : w) x -= m0;
  return w;
}

}  // namespace

MaxResult max_mean(const Potential& a, const MaxMeanOptions& options) {
  const WordGraph& wg = a.graph();
  const Digraph& g = wg.digraph();
  const std::vector<double> w = a.edge_weights();
  MaxResult r;
  r.tolerance = options.tol;

  if (options.exact_denominator > 0) {
    const double den = static_cast<double>(options.exact_denominator);
    std::vector<std::int64_t> iw(w.size());
    for (std::size_t e = 0; e < w.size(); ++e) {
      const double scaled = w[e] * den;
      const double rounded = std::round(scaled);
      if (std::abs(scaled - rounded) > 1e-9 * std::max(1.0, std::abs(scaled)) || std::abs(rounded) > 1e15)
        throw Error(Errc::NotRational, "value " + std::to_string(w[e]) + " is not a multiple of 1/" +
                                           std::to_string(options.exact_denominator));
      iw[e] = static_cast<std::int64_t>(rounded);
    }
    ExactMean m = max_cycle_mean_exact(g, iw, options.backend);
    const std::int64_t total_den = m.den * options.exact_denominator;
    const std::int64_t gcd = std::gcd(m.num, total_den);
    r.exact = std::make_pair(m.num / gcd, total_den / gcd);
    r.m0 = static_cast<double>(r.exact->first) / static_cast<double>(r.exact->second);
  } else {
    r.m0 = max_cycle_mean(g, w, options.backend);
  }

  r.critical_edges = critical_edges(g, w, r.m0, options.tol);
  CycleList cl = elementary_cycles(g, r.critical_edges, options.max_cycles);
  if (cl.cycles.empty()) throw Error(Errc::NonConvergence, "no critical cycle found at the computed maximum mean");
  r.truncated = cl.truncated;

  double refined = kNegInf;
  for (const auto& cyc : cl.cycles) {
    double s = 0.0;
    for (VertexId v : cyc) s += a.value(v);
    refined = std::max(refined, s / static_cast<double>(cyc.size()));
  }
  // Cycle sums are more accurate than Karp differences; keep the exact value when there is one.
  if (!r.exact && !r.truncated) r.m0 = refined;

  for (auto& cyc : cl.cycles) {
    Word word;
    word.reserve(cyc.size());
    for (VertexId v : cyc) word.push_back(wg.word(v)[0]);
    r.critical_words.push_back(least_rotation(word));
    r.critical_cycles.push_back(std::move(cyc));
  }
  return r;
}

BruteForceResult brute_force(const Potential& a, int max_period, const BruteForceOptions& options) {
  if (max_period < 1) throw Error(Errc::InvalidArgument, "max_period must be >= 1");
  const std::uint64_t alpha = static_cast<std::uint64_t>(a.subshift().alphabet_size());
  std::uint64_t total = 0, level = 1;
  for (int n = 1; n <= max_period; ++n) {
    if (level > options.word_budget / alpha) throw Error(Errc::BudgetExceeded, "too many words to enumerate");
    level *= alpha;
    total += level;
    if (total > options.word_budget) throw Error(Errc::BudgetExceeded, "too many words to enumerate");
  }
  const std::vector<double> table = a.values_by_code();
  kernels::CyclicScanInput in{&a.subshift(), a.depth(), table};
  kernels::PeriodScan all;
  for (int n = 1; n <= max_period; ++n) {
    kernels::PeriodScan scan = options.backend == Backend::Parallel ? kernels::parallel::scan_period(in, n, options.tol)
                                                                    : kernels::serial::scan_period(in, n, options.tol);
    kernels::merge_scan(all, scan, options.tol);
  }
  BruteForceResult r;
  r.best = all.best_mean;
  r.argmax = std::move(all.argmax);
  std::sort(r.argmax.begin(), r.argmax.end(), [](const Word& x, const Word& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  r.runner_up = all.runner_up_mean;
  r.orbits = all.orbits;
  r.max_period = max_period;
  return r;
}

SubAction subaction(const Potential& a, const MaxResult& r) {
  const WordGraph& wg = a.graph();
  const Digraph& g = wg.digraph();
  const std::size_t n = g.vertex_count();
  const double slack = 1e-13 * weight_scale(a.values());
  const std::vector<double> w = reduced_weights(a, safe_mean(g, a.edge_weights(), r.m0, slack));

  std::vector<double> init(n, kNegInf);
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    if (r.critical_edges[e]) init[g.edge(e).source] = 0.0;
  std::vector<double> vk = longest_forward(g, w, std::move(init), slack);

  SubAction out{Potential::constant(a.subshift(), 1, 0.0, a.metric()), r.m0, std::vector<char>(n, 0)};
  double lo = 0.0, hi = kNegInf, span_w = 0.0;
  for (double x : w) span_w = std::max(span_w, std::abs(x));
  for (std::size_t v = 0; v < n; ++v) {
    out.calibrated[v] = vk[v] > kNegInf;
    if (out.calibrated[v]) {
      lo = std::min(lo, vk[v]);
      hi = std::max(hi, vk[v]);
    }
  }
  if (std::any_of(out.calibrated.begin(), out.calibrated.end(), [](char c) { return !c; })) {
    // Vertices no critical walk reaches: start them low enough and relax again so the
    // subsolution inequality holds everywhere.
    const double floor = lo - static_cast<double>(n + 1) * (span_w + 1.0);
    for (double& x : vk)
      if (x == kNegInf) x = floor;
    vk = longest_forward(g, w, std::move(vk), slack);
  }

  const int k = wg.depth();
  const int d = std::max(k - 1, 1);
  auto dg = std::make_shared<const WordGraph>(a.subshift(), d);
  std::vector<double> vd(dg->vertex_count(), kNegInf);
  for (VertexId v = 0; v < n; ++v) {
    VertexId p = *dg->find(wg.word(v));
    vd[p] = std::max(vd[p], vk[v]);
  }
  const double top = *std::max_element(vd.begin(), vd.end());
  for (double& x : vd) x -= top;
  out.v = Potential(std::move(dg), std::move(vd), a.metric());
  return out;
}

Potential Deficiency::as_potential(const MetricParams& metric) const {
  auto g = std::make_shared<const WordGraph>(graph->subshift(), graph->depth() + 1);
  return Potential(std::move(g), b, metric);
}

Deficiency deficiency(const Potential& a, const SubAction& v, double tol) {
  const WordGraph& wg = a.graph();
  Deficiency d;
  d.tolerance = tol;
  d.graph = a.graph_ptr();
  d.b.resize(wg.edge_count());
  d.mather.resize(wg.edge_count());
  for (std::size_t e = 0; e < wg.edge_count(); ++e) {
    const Edge& ed = wg.edge(e);
    const double b = a.value(ed.source) - v.m0 + v.v.value(wg.word(ed.source)) - v.v.value(wg.word(ed.target));
    if (b > tol)
      throw Error(Errc::CalibrationViolation, "deficiency " + std::to_string(b) + " > 0 on edge " +
                                                  to_string(wg.edge_word(e)));
    d.b[e] = b;
    d.mather[e] = b >= -tol;
  }
  d.recurrent = recurrent_edges(wg.digraph(), d.mather);
  return d;
}

ManeTable mane_table(const Potential& a, const MaxResult& r, const ManeOptions& options) {
  const WordGraph& wg = a.graph();
  const std::size_t n = wg.vertex_count();
  if (n > options.vertex_budget) throw Error(Errc::BudgetExceeded, "Mane table too large at this depth");
  ManeTable t;
  t.n = n;
  t.m0 = r.m0;
  t.tolerance = options.tol;
  t.graph = a.graph_ptr();
  t.s.assign(n * n, kNegInf);
  double top = 0.0;
  for (std::size_t e = 0; e < wg.edge_count(); ++e) {
    const Edge& ed = wg.edge(e);
    const double x = a.value(ed.source) - r.m0;
    double& cell = t.s[static_cast<std::size_t>(ed.source) * n + ed.target];
    cell = std::max(cell, x);
    top = std::max(top, x);
  }
  if (options.backend == Backend::Parallel)
    kernels::parallel::maxplus_closure(t.s, n);
  else
    kernels::serial::maxplus_closure(t.s, n);
  t.bound_q = static_cast<double>(n) * top;
  t.empirical_max = kNegInf;
  for (double x : t.s) t.empirical_max = std::max(t.empirical_max, x);
  for (VertexId u = 0; u < n; ++u)
    if (t.at(u, u) > options.tol) throw Error(Errc::NonConvergence, "positive cycle in Mane closure");
  return t;
}

AubrySet aubry_set(const ManeTable& t, const MaxResult* r) {
  AubrySet out;
  out.member.assign(t.n, 0);
  for (VertexId u = 0; u < t.n; ++u)
    if (std::abs(t.at(u, u)) <= t.tolerance) {
      out.member[u] = 1;
      out.vertices.push_back(u);
    }
  if (r != nullptr)
    for (const auto& cyc : r->critical_cycles)
      for (VertexId v : cyc)
        if (!out.member[v])
          throw Error(Errc::CalibrationViolation,
                      "critical vertex " + to_string(t.graph->word(v)) + " is missing from the Aubry set");
  return out;
}

InvariantMeasure orbit_measure(const SubshiftSpec& spec, std::span<const Symbol> cycle) {
  return InvariantMeasure::periodic(spec, cycle);
}

AdditivityReport orbit_additivity_check(const Potential& a, const SymbolicPoint& x, int steps, int depth,
                                        double tol) {
  if (steps < 1) throw Error(Errc::InvalidArgument, "N must be >= 1");
  if (!x.admissible_in(a.subshift())) throw Error(Errc::InadmissiblePoint, "point " + x.to_string() + " is not admissible");
  const int k = a.depth();
  const std::size_t n_steps = static_cast<std::size_t>(steps);

  // Orbit points must be pairwise separated, except x = shift^N x for the closing pair.
  std::vector<SymbolicPoint> orbit;
  for (std::size_t j = 0; j <= n_steps; ++j) orbit.push_back(x.shift(j));
  int need = steps + k;
  for (std::size_t i = 0; i <= n_steps; ++i)
    for (std::size_t j = i + 1; j <= n_steps; ++j) {
      auto fd = orbit[i].first_disagreement(orbit[j]);
      if (!fd) {
        if (i == 0 && j == n_steps) continue;
        throw Error(Errc::ResolutionTooCoarse, "orbit points " + std::to_string(i) + " and " + std::to_string(j) +
                                                   " coincide, so no depth separates them");
      }
      need = std::max(need, static_cast<int>(j + *fd + 1));
    }
  if (depth == 0) depth = need;
  if (depth < need)
    throw Error(Errc::ResolutionTooCoarse, "depth " + std::to_string(depth) + " does not separate the orbit (need " +
                                               std::to_string(need) + ")");

  const double m0 = max_mean(a).m0;
  const Potential fine = a.lifted(depth);
  const Potential coarse = a.lifted(depth - steps);
  const double slack = 1e-13 * weight_scale(a.values());
  const std::vector<double> wf = reduced_weights(fine, safe_mean(fine.graph().digraph(), fine.edge_weights(), m0, slack));
  const std::vector<double> wc =
      reduced_weights(coarse, safe_mean(coarse.graph().digraph(), coarse.edge_weights(), m0, slack));
  const Digraph& gf = fine.graph().digraph();
  const VertexId u0 = fine.graph().vertex_of(x), un = fine.graph().vertex_of(orbit.back());

  AdditivityReport rep;
  rep.depth = depth;
  rep.steps = steps;
  rep.m0 = m0;
  for (std::size_t j = 0; j < n_steps; ++j) rep.birkhoff += a.eval(orbit[j]) - m0;
  const auto from_x = longest_from_source(gf, wf, u0, slack);
  const auto from_n = longest_from_source(gf, wf, un, slack);
  rep.s_forward = from_x[un];
  rep.s_loop = from_x[u0];
  rep.s_backward = from_n[u0];
  const auto coarse_from_n =
      longest_from_source(coarse.graph().digraph(), wc, coarse.graph().vertex_of(orbit.back()), slack);
  const double s_coarse = coarse_from_n[coarse.graph().vertex_of(x)];

  rep.first_residual = std::abs(rep.s_forward - rep.birkhoff);
  if (rep.s_backward == kNegInf) {
    rep.additivity_residual = rep.s_loop == kNegInf ? 0.0 : std::numeric_limits<double>::infinity();
    rep.coarse_gap = s_coarse == kNegInf ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    rep.additivity_residual = rep.s_loop - rep.s_forward - rep.s_backward;
    rep.coarse_gap = s_coarse - rep.s_backward;
  }
  const double lam_a = std::pow(a.metric().lambda, a.metric().alpha);
  rep.resolution_bound = holder_constant(a) * std::pow(lam_a, depth - steps - k + 1) / (1.0 - lam_a);
  rep.holds = rep.first_residual <= tol && rep.additivity_residual >= -tol &&
              rep.additivity_residual <= rep.coarse_gap + tol;
  return rep;
}

}  // namespace ergopt
