#include "ergopt/measure.hpp"

#include <cmath>
#include <functional>

namespace ergopt {

InvariantMeasure InvariantMeasure::periodic(const SubshiftSpec& spec, std::span<const Symbol> cycle) {
  if (!spec.cyclically_admissible(cycle))
    throw Error(Errc::InadmissibleCycle, "cycle \"" + to_string(cycle) + "\" does not close admissibly");
  InvariantMeasure m(Kind::Periodic, spec);
  m.cycle_ = least_rotation(primitive_root(cycle));
  return m;
}

InvariantMeasure InvariantMeasure::markov(std::shared_ptr<const WordGraph> graph, std::vector<double> stationary,
                                          std::vector<double> transition) {
  const WordGraph& g = *graph;
  if (stationary.size() != g.vertex_count() || transition.size() != g.edge_count())
    throw Error(Errc::InvalidArgument, "Markov data does not match the word graph");
  constexpr double kTol = 1e-9;
  double total = 0.0;
  for (double p : stationary) {
    if (!(p >= 0.0)) throw Error(Errc::InvalidArgument, "stationary vector must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > kTol) throw Error(Errc::InvalidArgument, "stationary vector must sum to 1");
  std::vector<double> flow(g.vertex_count(), 0.0);
  for (VertexId u = 0; u < g.vertex_count(); ++u) {
    double row = 0.0;
    for (std::size_t e = g.out_begin(u); e < g.out_end(u); ++e) {
      if (!(transition[e] >= 0.0)) throw Error(Errc::InvalidArgument, "transition probabilities must be nonnegative");
      row += transition[e];
      flow[g.edge(e).target] += stationary[u] * transition[e];
    }
    if (stationary[u] > 0.0 && std::abs(row - 1.0) > kTol)
      throw Error(Errc::InvalidArgument, "transition row of \"" + to_string(g.word(u)) + "\" does not sum to 1");
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (std::abs(flow[v] - stationary[v]) > kTol) throw Error(Errc::InvalidArgument, "vector is not stationary");
  InvariantMeasure m(Kind::Markov, g.subshift());
  m.graph_ = std::move(graph);
  m.stationary_ = std::move(stationary);
  m.transition_ = std::move(transition);
  return m;
}

double InvariantMeasure::mass(std::span<const Symbol> w) const {
  if (w.empty()) return 1.0;
  if (!spec_.admissible(w)) return 0.0;
  if (kind_ == Kind::Periodic) {
    const std::size_t n = cycle_.size();
    std::size_t hits = 0;
    for (std::size_t s = 0; s < n; ++s) {
      bool ok = true;
      for (std::size_t i = 0; i < w.size() && ok; ++i) ok = cycle_[(s + i) % n] == w[i];
      hits += ok;
    }
    return static_cast<double>(hits) / static_cast<double>(n);
  }
  const WordGraph& g = *graph_;
  const std::size_t k = static_cast<std::size_t>(g.depth());
  if (w.size() <= k) {
    // Vertices with prefix w are a contiguous lexicographic block; scan it directly.
    double total = 0.0;
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
      auto word = g.word(u);
      if (std::equal(w.begin(), w.end(), word.begin())) total += stationary_[u];
    }
    return total;
  }
  VertexId u = *g.find(w.first(k));
  double p = stationary_[u];
  for (std::size_t i = 1; i + k <= w.size() && p > 0.0; ++i) {
    VertexId v = *g.find(w.subspan(i, k));
    auto e = g.find_edge(u, v);
    p *= e ? transition_[*e] : 0.0;
    u = v;
  }
  return p;
}

double InvariantMeasure::integrate(const Potential& a) const {
  if (!(a.subshift() == spec_)) throw Error(Errc::SubshiftMismatch, "measure and potential live on different subshifts");
  if (kind_ == Kind::Periodic) {
    SymbolicPoint x = SymbolicPoint::periodic(cycle_);
    double s = 0.0;
    for (std::size_t i = 0; i < cycle_.size(); ++i) s += a.value(x.shift(i).prefix(static_cast<std::size_t>(a.depth())));
    return s / static_cast<double>(cycle_.size());
  }
  double s = 0.0;
  const WordGraph& ag = a.graph();
  for (VertexId u = 0; u < ag.vertex_count(); ++u) s += mass(ag.word(u)) * a.value(u);
  return s;
}

std::vector<Word> InvariantMeasure::support_words(int n) const {
  std::vector<Word> out;
  Word w;
  const int a = spec_.alphabet_size();
  std::function<void()> grow = [&]() {
    if (static_cast<int>(w.size()) == n) {
      out.push_back(w);
      return;
    }
    for (int b = 0; b < a; ++b) {
      w.push_back(static_cast<Symbol>(b));
      if (mass(w) > 0.0) grow();
      w.pop_back();
    }
  };
  grow();
  return out;
}

}  // namespace ergopt
