#pragma once

// Data-parallel inner loops. Every kernel has a plain serial version and an
// OpenMP version with the same signature; the serial one is the reference the
// tests compare against.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "ergopt/shift.hpp"

namespace ergopt::kernels {

inline constexpr std::int64_t kNegInf64 = std::numeric_limits<std::int64_t>::min() / 4;

/// Cyclic word scan input: the potential tabulated by word code (base-a digits
/// of a k-word, most significant first).
struct CyclicScanInput {
  const SubshiftSpec* spec = nullptr;
  int depth = 1;
  std::span<const double> value_by_code;
};

/// Best periodic orbits of one exact period.
struct PeriodScan {
  int period = 0;
  std::uint64_t orbits = 0;                                       // Lyndon, cyclically admissible words seen
  double best_mean = -std::numeric_limits<double>::infinity();
  std::vector<Word> argmax;                                       // Lyndon words within tol of best_mean
  double runner_up_mean = -std::numeric_limits<double>::infinity();  // best mean outside argmax
};

/// Birkhoff sum of the cyclic word, summed in index order.
inline double cyclic_sum(const CyclicScanInput& in, std::span<const Symbol> w) {
  const std::size_t n = w.size(), k = static_cast<std::size_t>(in.depth);
  const std::size_t a = static_cast<std::size_t>(in.spec->alphabet_size());
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t code = 0;
    for (std::size_t j = 0; j < k; ++j) code = code * a + w[(i + j) % n];
    s += in.value_by_code[code];
  }
  return s;
}

void merge_scan(PeriodScan& into, double mean, const Word& w, double tol);
void merge_scan(PeriodScan& into, const PeriodScan& other, double tol);

namespace serial {

/// next[v] = max over edges u->v of prev[u] + w[e].
void karp_step(const Digraph& g, std::span<const double> w, std::span<const double> prev, std::span<double> next);
void karp_step(const Digraph& g, std::span<const std::int64_t> w, std::span<const std::int64_t> prev,
               std::span<std::int64_t> next);

/// In-place max-plus transitive closure of a dense row-major n x n matrix (-inf = no path).
void maxplus_closure(std::span<double> s, std::size_t n);

/// y[v] = sum over edges u->v of x[u] * m[e]  (row vector times matrix).
void transfer_left(const Digraph& g, std::span<const double> m, std::span<const double> x, std::span<double> y);
/// y[u] = sum over edges u->v of m[e] * x[v]  (matrix times column vector).
void transfer_right(const Digraph& g, std::span<const double> m, std::span<const double> x, std::span<double> y);

/// All Lyndon words of exactly `period` letters, by FKM generation.
PeriodScan scan_period(const CyclicScanInput& in, int period, double tol);

}  // namespace serial

namespace parallel {

void karp_step(const Digraph& g, std::span<const double> w, std::span<const double> prev, std::span<double> next);
void karp_step(const Digraph& g, std::span<const std::int64_t> w, std::span<const std::int64_t> prev,
               std::span<std::int64_t> next);
void maxplus_closure(std::span<double> s, std::size_t n);
void transfer_left(const Digraph& g, std::span<const double> m, std::span<const double> x, std::span<double> y);
void transfer_right(const Digraph& g, std::span<const double> m, std::span<const double> x, std::span<double> y);
/// Index-parallel over all alphabet^period words with a linear-time Lyndon test.
PeriodScan scan_period(const CyclicScanInput& in, int period, double tol);

}  // namespace parallel

/// Applies ERGOPT_THREADS (if set) to the OpenMP runtime; called once by the CLI.
void configure_threads_from_env();

}  // namespace ergopt::kernels
