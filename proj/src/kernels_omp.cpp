#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

#include "ergopt/kernels.hpp"

namespace ergopt::kernels {

namespace {

// Below this many vertices the fork/join overhead dominates.
constexpr std::size_t kMinParallel = 2048;

}  // namespace

void configure_threads_from_env() {
  const char* env = std::getenv("ERGOPT_THREADS");
  if (env == nullptr) return;
  int n = std::atoi(env);
  if (n > 0) omp_set_num_threads(n);
}

namespace parallel {

void karp_step(const Digraph& g, std::span<const double> w, std::span<const double> prev, std::span<double> next) {
  const std::int64_t n = static_cast<std::int64_t>(g.vertex_count());
#pragma omp parallel for schedule(static) if (g.vertex_count() >= kMinParallel)
  for (std::int64_t v = 0; v < n; ++v) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::uint32_t e : g.in_edges(static_cast<VertexId>(v))) best = std::max(best, prev[g.edge(e).source] + w[e]);
    next[v] = best;
  }
}

void karp_step(const Digraph& g, std::span<const std::int64_t> w, std::span<const std::int64_t> prev,
               std::span<std::int64_t> next) {
  const std::int64_t n = static_cast<std::int64_t>(g.vertex_count());
#pragma omp parallel for schedule(static) if (g.vertex_count() >= kMinParallel)
  for (std::int64_t v = 0; v < n; ++v) {
    std::int64_t best = kNegInf64;
    for (std::uint32_t e : g.in_edges(static_cast<VertexId>(v))) {
      std::int64_t p = prev[g.edge(e).source];
      if (p != kNegInf64) best = std::max(best, p + w[e]);
    }
    next[v] = best;
  }
}

void maxplus_closure(std::span<double> s, std::size_t n) {
  const std::int64_t rows = static_cast<std::int64_t>(n);
  std::vector<double> row_k_copy(n);
  for (std::size_t k = 0; k < n; ++k) {
    // Snapshot row k so that rows update independently even if s[k][k] > 0 from rounding.
    std::copy_n(s.data() + k * n, n, row_k_copy.data());
    const double* row_k = row_k_copy.data();
#pragma omp parallel for schedule(static) if (n >= 256)
    for (std::int64_t i = 0; i < rows; ++i) {
      const double sik = s[static_cast<std::size_t>(i) * n + k];
      if (sik == -std::numeric_limits<double>::infinity()) continue;
      double* row_i = s.data() + static_cast<std::size_t>(i) * n;
      for (std::size_t j = 0; j < n; ++j) row_i[j] = std::max(row_i[j], sik + row_k[j]);
    }
  }
}

void transfer_left(const Digraph& g, std::span<const double> m, std::span<const double> x, std::span<double> y) {
  const std::int64_t n = static_cast<std::int64_t>(g.vertex_count());
#pragma omp parallel for schedule(static) if (g.vertex_count() >= kMinParallel)
  for (std::int64_t v = 0; v < n; ++v) {
    double acc = 0.0;
    for (std::uint32_t e : g.in_edges(static_cast<VertexId>(v))) acc += x[g.edge(e).source] * m[e];
    y[v] = acc;
  }
}

void transfer_right(const Digraph& g, std::span<const double> m, std::span<const double> x, std::span<double> y) {
  const std::int64_t n = static_cast<std::int64_t>(g.vertex_count());
#pragma omp parallel for schedule(static) if (g.vertex_count() >= kMinParallel)
  for (std::int64_t u = 0; u < n; ++u) {
    double acc = 0.0;
    for (std::size_t e = g.out_begin(static_cast<VertexId>(u)); e < g.out_end(static_cast<VertexId>(u)); ++e)
      acc += m[e] * x[g.edge(e).target];
    y[u] = acc;
  }
}

PeriodScan scan_period(const CyclicScanInput& in, int period, double tol) {
  const std::size_t n = static_cast<std::size_t>(period);
  const std::uint64_t a = static_cast<std::uint64_t>(in.spec->alphabet_size());
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= a;

  PeriodScan out;
  out.period = period;
#pragma omp parallel if (total >= 4096)
  {
    PeriodScan local;
    Word w(n);
#pragma omp for schedule(static) nowait
    for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(total); ++idx) {
      std::uint64_t c = static_cast<std::uint64_t>(idx);
      for (std::size_t i = n; i-- > 0;) {
        w[i] = static_cast<Symbol>(c % a);
        c /= a;
      }
      if (!is_lyndon(w) || !in.spec->cyclically_admissible(w)) continue;
      ++local.orbits;
      merge_scan(local, cyclic_sum(in, w) / static_cast<double>(n), w, tol);
    }
#pragma omp critical(ergopt_scan_merge)
    merge_scan(out, local, tol);
  }
  out.period = period;
  std::sort(out.argmax.begin(), out.argmax.end());
  return out;
}

}  // namespace parallel
}  // namespace ergopt::kernels
