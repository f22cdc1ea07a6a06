#include "ergopt/graph_algo.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "ergopt/kernels.hpp"

namespace ergopt {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_in_edges(const Digraph& g) {
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (g.in_edges(v).empty()) throw Error(Errc::NoCycle, "vertex without predecessor in cycle-mean computation");
}

}  // namespace

double max_cycle_mean(const Digraph& g, std::span<const double> w, Backend backend) {
  const std::size_t n = g.vertex_count();
  if (n == 0 || g.edge_count() == 0) throw Error(Errc::NoCycle, "graph has no cycle");
  check_in_edges(g);
  auto step = [&](std::span<const double> prev, std::span<double> next) {
    if (backend == Backend::Parallel)
      kernels::parallel::karp_step(g, w, prev, next);
    else
      kernels::serial::karp_step(g, w, prev, next);
  };
  // Pass 1: D_n. Pass 2: min over k of (D_n - D_k)/(n - k).
  std::vector<double> cur(n, 0.0), nxt(n);
  for (std::size_t k = 0; k < n; ++k) {
    step(cur, nxt);
    cur.swap(nxt);
  }
  const std::vector<double> dn = cur;
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::fill(cur.begin(), cur.end(), 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double len = static_cast<double>(n - k);
    for (std::size_t v = 0; v < n; ++v)
      if (dn[v] > kNegInf && cur[v] > kNegInf) best[v] = std::min(best[v], (dn[v] - cur[v]) / len);
    step(cur, nxt);
    cur.swap(nxt);
  }
  double m0 = kNegInf;
  for (std::size_t v = 0; v < n; ++v)
    if (dn[v] > kNegInf) m0 = std::max(m0, best[v]);
  if (!std::isfinite(m0)) throw Error(Errc::NoCycle, "graph has no cycle");
  return m0;
}

ExactMean max_cycle_mean_exact(const Digraph& g, std::span<const std::int64_t> w, Backend backend) {
  const std::size_t n = g.vertex_count();
  if (n == 0 || g.edge_count() == 0) throw Error(Errc::NoCycle, "graph has no cycle");
  check_in_edges(g);
  auto step = [&](std::span<const std::int64_t> prev, std::span<std::int64_t> next) {
    if (backend == Backend::Parallel)
      kernels::parallel::karp_step(g, w, prev, next);
    else
      kernels::serial::karp_step(g, w, prev, next);
  };
  using kernels::kNegInf64;
  std::vector<std::int64_t> cur(n, 0), nxt(n);
  for (std::size_t k = 0; k < n; ++k) {
    step(cur, nxt);
    cur.swap(nxt);
  }
  const std::vector<std::int64_t> dn = cur;
  // Per-vertex minimum fraction, compared by cross multiplication.
  std::vector<std::int64_t> bnum(n, 0), bden(n, 0);
  std::fill(cur.begin(), cur.end(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    const std::int64_t len = static_cast<std::int64_t>(n - k);
    for (std::size_t v = 0; v < n; ++v) {
      if (dn[v] == kNegInf64 || cur[v] == kNegInf64) continue;
      const std::int64_t num = dn[v] - cur[v];
      if (bden[v] == 0 || static_cast<__int128>(num) * bden[v] < static_cast<__int128>(bnum[v]) * len) {
        bnum[v] = num;
        bden[v] = len;
      }
    }
    step(cur, nxt);
    cur.swap(nxt);
  }
  ExactMean best{0, 0};
  for (std::size_t v = 0; v < n; ++v) {
    if (dn[v] == kNegInf64 || bden[v] == 0) continue;
    if (best.den == 0 || static_cast<__int128>(bnum[v]) * best.den > static_cast<__int128>(best.num) * bden[v])
      best = {bnum[v], bden[v]};
  }
  if (best.den == 0) throw Error(Errc::NoCycle, "graph has no cycle");
  std::int64_t gcd = std::gcd(best.num, best.den);
  if (gcd > 1) best = {best.num / gcd, best.den / gcd};
  return best;
}

std::vector<double> longest_forward(const Digraph& g, std::span<const double> w, std::vector<double> init,
                                    double slack) {
  const std::size_t n = g.vertex_count();
  std::vector<double> x = std::move(init);
  std::vector<std::size_t> relaxations(n, 0);
  std::vector<char> queued(n, 0);
  std::deque<VertexId> queue;
  for (VertexId v = 0; v < n; ++v)
    if (x[v] > kNegInf) {
      queue.push_back(v);
      queued[v] = 1;
    }
  while (!queue.empty()) {
    VertexId u = queue.front();
    queue.pop_front();
    queued[u] = 0;
    for (std::size_t e = g.out_begin(u); e < g.out_end(u); ++e) {
      const VertexId v = g.edge(e).target;
      const double cand = x[u] + w[e];
      if (cand > x[v] + slack) {
        x[v] = cand;
        if (!queued[v]) {
          if (++relaxations[v] > n + 1) throw Error(Errc::NonConvergence, "positive cycle during longest-path relaxation");
          queue.push_back(v);
          queued[v] = 1;
        }
      }
    }
  }
  return x;
}

std::vector<double> longest_backward(const Digraph& g, std::span<const double> w, std::vector<double> init,
                                     double slack) {
  const std::size_t n = g.vertex_count();
  std::vector<double> y = std::move(init);
  std::vector<std::size_t> relaxations(n, 0);
  std::vector<char> queued(n, 0);
  std::deque<VertexId> queue;
  for (VertexId v = 0; v < n; ++v)
    if (y[v] > kNegInf) {
      queue.push_back(v);
      queued[v] = 1;
    }
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    queued[v] = 0;
    for (std::uint32_t e : g.in_edges(v)) {
      const VertexId u = g.edge(e).source;
      const double cand = w[e] + y[v];
      if (cand > y[u] + slack) {
        y[u] = cand;
        if (!queued[u]) {
          if (++relaxations[u] > n + 1) throw Error(Errc::NonConvergence, "positive cycle during longest-path relaxation");
          queue.push_back(u);
          queued[u] = 1;
        }
      }
    }
  }
  return y;
}

std::vector<double> longest_from_source(const Digraph& g, std::span<const double> w, VertexId source, double slack) {
  // Seed with the one-edge walks so that the empty walk never counts.
  std::vector<double> x(g.vertex_count(), kNegInf);
  for (std::size_t e = g.out_begin(source); e < g.out_end(source); ++e) {
    const VertexId v = g.edge(e).target;
    x[v] = std::max(x[v], w[e]);
  }
  return longest_forward(g, w, std::move(x), slack);
}

std::vector<char> recurrent_edges(const Digraph& g, std::span<const char> edge_mask) {
  auto comp = strongly_connected_components(g.vertex_count(), g.edges(), edge_mask);
  std::vector<char> out(g.edge_count(), 0);
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    out[e] = edge_mask[e] && comp[g.edge(e).source] == comp[g.edge(e).target];
  return out;
}

double safe_mean(const Digraph& g, std::span<const double> w, double mean, double slack) {
  double scale = 1.0;
  for (double x : w) scale = std::max(scale, std::abs(x));
  std::vector<double> reduced(w.size());
  double margin = 0.0;
  for (int attempt = 0;; ++attempt) {
    for (std::size_t e = 0; e < w.size(); ++e) reduced[e] = w[e] - (mean + margin);
    try {
      longest_forward(g, reduced, std::vector<double>(g.vertex_count(), 0.0), slack);
      return mean + margin;
    } catch (const Error& e) {
      if (e.code() != Errc::NonConvergence || attempt == 12) throw;
    }
    margin = margin == 0.0 ? 1e-15 * scale : 4.0 * margin;
  }
}

std::vector<char> critical_edges(const Digraph& g, std::span<const double> w, double m0, double tol) {
  const std::size_t m = g.edge_count();
  double scale = 1.0;
  for (std::size_t e = 0; e < m; ++e) scale = std::max(scale, std::abs(w[e]));
  const double slack = 1e-13 * scale;
  const double mean = safe_mean(g, w, m0, slack);
  std::vector<double> reduced(m);
  for (std::size_t e = 0; e < m; ++e) reduced[e] = w[e] - mean;
  auto u = longest_forward(g, reduced, std::vector<double>(g.vertex_count(), 0.0), slack);
  std::vector<char> tight(m);
  for (std::size_t e = 0; e < m; ++e) {
    const Edge& ed = g.edge(e);
    tight[e] = u[ed.source] + reduced[e] >= u[ed.target] - tol;
  }
  return recurrent_edges(g, tight);
}

namespace {

class Johnson {
 public:
  Johnson(const Digraph& g, std::span<const char> mask, std::size_t cap) : cap_(cap), adj_(g.vertex_count()) {
    for (std::size_t e = 0; e < g.edge_count(); ++e)
      if (mask[e]) adj_[g.edge(e).source].push_back(g.edge(e).target);
    for (auto& a : adj_) {
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    blocked_.assign(adj_.size(), 0);
    blocked_by_.assign(adj_.size(), {});
  }

  CycleList run() {
    for (VertexId s = 0; s < adj_.size() && !out_.truncated; ++s) {
      if (adj_[s].empty()) continue;
      start_ = s;
      std::fill(blocked_.begin(), blocked_.end(), 0);
      for (auto& b : blocked_by_) b.clear();
      circuit(s);
    }
    return std::move(out_);
  }

 private:
  bool circuit(VertexId v) {
    bool found = false;
    stack_.push_back(v);
    blocked_[v] = 1;
    for (VertexId w : adj_[v]) {
      if (out_.truncated) break;
      if (w < start_) continue;
      if (w == start_) {
        if (out_.cycles.size() >= cap_) {
          out_.truncated = true;
          break;
        }
        out_.cycles.push_back(stack_);
        found = true;
      } else if (!blocked_[w] && circuit(w)) {
        found = true;
      }
    }
    if (found) {
      unblock(v);
    } else {
      for (VertexId w : adj_[v])
        if (w >= start_) {
          auto& b = blocked_by_[w];
          if (std::find(b.begin(), b.end(), v) == b.end()) b.push_back(v);
        }
    }
    stack_.pop_back();
    return found;
  }

  void unblock(VertexId u) {
    blocked_[u] = 0;
    std::vector<VertexId> waiting;
    waiting.swap(blocked_by_[u]);
    for (VertexId w : waiting)
      if (blocked_[w]) unblock(w);
  }

  std::size_t cap_;
  std::vector<std::vector<VertexId>> adj_;
  std::vector<char> blocked_;
  std::vector<std::vector<VertexId>> blocked_by_;
  std::vector<VertexId> stack_;
  VertexId start_ = 0;
  CycleList out_;
};

}  // namespace

CycleList elementary_cycles(const Digraph& g, std::span<const char> edge_mask, std::size_t cap) {
  return Johnson(g, edge_mask, cap).run();
}

}  // namespace ergopt
