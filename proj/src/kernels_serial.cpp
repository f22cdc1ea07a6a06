#include <algorithm>
#include <cmath>

#include "ergopt/kernels.hpp"

namespace ergopt::kernels {

void merge_scan(PeriodScan& into, double mean, const Word& w, double tol) {
  if (mean > into.best_mean + tol) {
    // Everything in the old argmax is now more than tol below the best.
    into.runner_up_mean = std::max(into.runner_up_mean, into.best_mean);
    into.best_mean = mean;
    into.argmax.assign(1, w);
    return;
  }
  if (mean >= into.best_mean - tol) {
    into.argmax.push_back(w);
    into.best_mean = std::max(into.best_mean, mean);
    return;
  }
  into.runner_up_mean = std::max(into.runner_up_mean, mean);
}

void merge_scan(PeriodScan& into, const PeriodScan& other, double tol) {
  into.orbits += other.orbits;
  if (other.argmax.empty()) return;
  if (into.argmax.empty() || other.best_mean > into.best_mean + tol) {
    double ru = std::max(other.runner_up_mean, into.argmax.empty() ? into.runner_up_mean
                                                                    : std::max(into.best_mean, into.runner_up_mean));
    into.best_mean = other.best_mean;
    into.argmax = other.argmax;
    into.runner_up_mean = ru;
  } else if (other.best_mean >= into.best_mean - tol) {
    into.argmax.insert(into.argmax.end(), other.argmax.begin(), other.argmax.end());
    into.best_mean = std::max(into.best_mean, other.best_mean);
    into.runner_up_mean = std::max(into.runner_up_mean, other.runner_up_mean);
  } else {
    into.runner_up_mean = std::max({into.runner_up_mean, other.best_mean, other.runner_up_mean});
  }
}

namespace serial {

void karp_step(const Digraph& g, std::span<const double> w, std::span<const double> prev, std::span<double> next) {
  const std::size_t n = g.vertex_count();
  for (std::size_t v = 0; v < n; ++v) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::uint32_t e : g.in_edges(static_cast<VertexId>(v))) best = std::max(best, prev[g.edge(e).source] + w[e]);
    next[v] = best;
  }
}

void karp_step(const Digraph& g, std::span<const std::int64_t> w, std::span<const std::int64_t> prev,
               std::span<std::int64_t> next) {
  const std::size_t n = g.vertex_count();
  for (std::size_t v = 0; v < n; ++v) {
    std::int64_t best = kNegInf64;
    for (std::uint32_t e : g.in_edges(static_cast<VertexId>(v))) {
      std::int64_t p = prev[g.edge(e).source];
      if (p != kNegInf64) best = std::max(best, p + w[e]);
    }
    next[v] = best;
  }
}

void maxplus_closure(std::span<double> s, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double* row_k = s.data() + k * n;
    for (std::size_t i = 0; i < n; ++i) {
      const double sik = s[i * n + k];
      if (sik == -std::numeric_limits<double>::infinity()) continue;
      double* row_i = s.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) row_i[j] = std::max(row_i[j], sik + row_k[j]);
    }
  }
}

void transfer_left(const Digraph& g, std::span<const double> m, std::span<const double> x, std::span<double> y) {
  const std::size_t n = g.vertex_count();
  for (std::size_t v = 0; v < n; ++v) {
    double acc = 0.0;
    for (std::uint32_t e : g.in_edges(static_cast<VertexId>(v))) acc += x[g.edge(e).source] * m[e];
    y[v] = acc;
  }
}

void transfer_right(const Digraph& g, std::span<const double> m, std::span<const double> x, std::span<double> y) {
  const std::size_t n = g.vertex_count();
  for (std::size_t u = 0; u < n; ++u) {
    double acc = 0.0;
    for (std::size_t e = g.out_begin(static_cast<VertexId>(u)); e < g.out_end(static_cast<VertexId>(u)); ++e)
      acc += m[e] * x[g.edge(e).target];
    y[u] = acc;
  }
}

PeriodScan scan_period(const CyclicScanInput& in, int period, double tol) {
  PeriodScan out;
  out.period = period;
  const int a = in.spec->alphabet_size();
  const std::size_t n = static_cast<std::size_t>(period);
  // Fredricksen-Kessler-Maiorana over the 1-based array a_word[1..n]; the
  // current prenecklace is Lyndon exactly when its period p equals n.
  std::vector<Symbol> a_word(n + 1, 0);
  std::size_t p = 1;
  while (true) {
    if (p == n) {
      Word cand(a_word.begin() + 1, a_word.begin() + 1 + static_cast<std::ptrdiff_t>(n));
      if (in.spec->cyclically_admissible(cand)) {
        ++out.orbits;
        merge_scan(out, cyclic_sum(in, cand) / static_cast<double>(n), cand, tol);
      }
    }
    // next prenecklace
    std::size_t j = n;
    while (j >= 1 && a_word[j] == a - 1) --j;
    if (j == 0) break;
    ++a_word[j];
    for (std::size_t t = j + 1; t <= n; ++t) a_word[t] = a_word[t - j];
    p = j;
  }
  std::sort(out.argmax.begin(), out.argmax.end());
  return out;
}

}  // namespace serial
}  // namespace ergopt::kernels
