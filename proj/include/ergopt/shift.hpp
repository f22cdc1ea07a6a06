#pragma once

// Subshifts of finite type, eventually periodic points and word graphs.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ergopt/error.hpp"

namespace ergopt {

using Symbol = std::uint8_t;
using Word = std::vector<Symbol>;
using VertexId = std::uint32_t;

inline constexpr std::size_t kDefaultVertexBudget = std::size_t{1} << 20;

/// Words print as one character per symbol: 0-9 then a-z.
std::string to_string(std::span<const Symbol> word);
Word parse_word(std::string_view text);

/// Smallest rotation of a primitive word; `w` must be nonempty.
Word least_rotation(std::span<const Symbol> w);
/// Shortest u with w = u^m.
Word primitive_root(std::span<const Symbol> w);
bool is_lyndon(std::span<const Symbol> w);

/// d(x,y) = lambda^n where n is the first index of disagreement.
struct MetricParams {
  double lambda = 0.5;
  double alpha = 1.0;

  void validate() const;
  /// Largest radius on which every admissible inverse branch is defined.
  static constexpr double epsilon0() { return 1.0; }
  bool operator==(const MetricParams&) const = default;
};

class SubshiftSpec {
 public:
  /// Throws NonSquareMatrix or DeadSymbol. A non-mixing matrix is accepted; see mixing().
  SubshiftSpec(int alphabet_size, const std::vector<std::vector<int>>& transitions);

  static SubshiftSpec full_shift(int alphabet_size);
  static SubshiftSpec golden_mean();

  int alphabet_size() const { return n_; }
  bool allowed(Symbol a, Symbol b) const { return t_[static_cast<std::size_t>(a) * n_ + b] != 0; }
  bool mixing() const { return mixing_; }
  bool is_full_shift() const;

  bool admissible(std::span<const Symbol> word) const;
  /// Admissible as a cyclic word: every transition including last -> first.
  bool cyclically_admissible(std::span<const Symbol> word) const;

  std::vector<std::vector<int>> transitions() const;

  bool operator==(const SubshiftSpec& other) const { return n_ == other.n_ && t_ == other.t_; }

 private:
  int n_;
  std::vector<std::uint8_t> t_;
  bool mixing_;
};

SubshiftSpec build_subshift(int alphabet_size, const std::vector<std::vector<int>>& transitions);

/// An eventually periodic one-sided sequence preperiod . cycle^inf.
///
/// Normal form: the cycle is primitive and the preperiod is as short as
/// possible, so two points are equal iff their normal forms are equal.
class SymbolicPoint {
 public:
  SymbolicPoint(Word preperiod, Word cycle);
  static SymbolicPoint periodic(Word cycle) { return SymbolicPoint({}, std::move(cycle)); }
  static SymbolicPoint parse(std::string_view preperiod, std::string_view cycle);

  const Word& preperiod() const { return pre_; }
  const Word& cycle() const { return cycle_; }
  bool is_periodic() const { return pre_.empty(); }
  /// Minimal period, or nullopt when the preperiod is nonempty.
  std::optional<std::size_t> period() const;

  Symbol at(std::size_t i) const;
  Word prefix(std::size_t n) const;
  SymbolicPoint shift(std::size_t n = 1) const;
  SymbolicPoint prepend(Symbol a) const;
  SymbolicPoint prepend(std::span<const Symbol> word) const;

  bool admissible_in(const SubshiftSpec& spec) const;

  /// First index of disagreement, or nullopt when the points are equal.
  std::optional<std::size_t> first_disagreement(const SymbolicPoint& other) const;

  std::string to_string() const;
  bool operator==(const SymbolicPoint&) const = default;

 private:
  void normalize();

  Word pre_;
  Word cycle_;
};

double distance(const SymbolicPoint& x, const SymbolicPoint& y, const MetricParams& metric);

/// All x with shift(x) == y.
std::vector<SymbolicPoint> inverse_branches(const SubshiftSpec& spec, const SymbolicPoint& y);

struct Edge {
  VertexId source;
  VertexId target;
};

/// Directed multigraph in CSR form. Edge ids are sorted by source; the
/// relative order of edges sharing a source is kept from the input.
class Digraph {
 public:
  Digraph() = default;
  Digraph(std::size_t vertex_count, std::vector<Edge> edges);

  std::size_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_[e]; }
  /// Out-edges of v are the contiguous edge ids [out_begin(v), out_end(v)).
  std::size_t out_begin(VertexId v) const { return out_offsets_[v]; }
  std::size_t out_end(VertexId v) const { return out_offsets_[v + 1]; }
  /// Ids of edges entering v.
  std::span<const std::uint32_t> in_edges(VertexId v) const {
    return {in_edges_.data() + in_offsets_[v], in_offsets_[v + 1] - in_offsets_[v]};
  }
  std::optional<std::size_t> find_edge(VertexId u, VertexId v) const;

  /// Subgraph induced on `vertices` (renumbered 0..m-1 in the given order).
  Digraph induced(std::span<const VertexId> vertices) const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<std::size_t> in_offsets_{0};
  std::vector<std::uint32_t> in_edges_;
};

/// Graph on admissible k-words; u -> v when u[1..k) == v[0..k-1) and
/// u + v.back() is admissible. Vertices are numbered in lexicographic order
/// of their words; out-edges of a vertex are ordered by the appended symbol,
/// so edge ids enumerate admissible (k+1)-words in lexicographic order.
class WordGraph {
 public:
  WordGraph(const SubshiftSpec& spec, int depth, std::size_t vertex_budget = kDefaultVertexBudget);

  const SubshiftSpec& subshift() const { return spec_; }
  int depth() const { return depth_; }
  const Digraph& digraph() const { return graph_; }
  std::size_t vertex_count() const { return graph_.vertex_count(); }
  std::size_t edge_count() const { return graph_.edge_count(); }

  std::span<const Symbol> word(VertexId v) const {
    return {words_.data() + static_cast<std::size_t>(v) * depth_, static_cast<std::size_t>(depth_)};
  }
  /// Looks up the vertex for the first `depth()` symbols of `word`.
  std::optional<VertexId> find(std::span<const Symbol> word) const;
  VertexId vertex_of(const SymbolicPoint& x) const;

  std::span<const Edge> edges() const { return graph_.edges(); }
  const Edge& edge(std::size_t e) const { return graph_.edge(e); }
  std::size_t out_begin(VertexId v) const { return graph_.out_begin(v); }
  std::size_t out_end(VertexId v) const { return graph_.out_end(v); }
  std::span<const std::uint32_t> in_edges(VertexId v) const { return graph_.in_edges(v); }
  std::optional<std::size_t> find_edge(VertexId u, VertexId v) const { return graph_.find_edge(u, v); }

  /// The (k+1)-word u + v.back() carried by edge e.
  Word edge_word(std::size_t e) const;

 private:
  SubshiftSpec spec_;
  int depth_;
  std::vector<Symbol> words_;
  std::vector<std::int64_t> code_to_vertex_;
  Digraph graph_;
};

WordGraph word_graph(const SubshiftSpec& spec, int depth, std::size_t vertex_budget = kDefaultVertexBudget);

/// Strongly connected components (Tarjan); component ids in reverse topological order.
std::vector<int> strongly_connected_components(std::size_t vertex_count, std::span<const Edge> edges,
                                               std::span<const char> edge_mask = {});

/// Shortest word p with from·p·to admissible (empty when from -> to is allowed).
/// Throws NoCycle when `to` is unreachable from `from`.
Word return_path(const SubshiftSpec& spec, Symbol from, Symbol to);

/// Periodic point whose cycle is `word` closed up by a shortest return path.
SymbolicPoint periodic_extension(const SubshiftSpec& spec, std::span<const Symbol> word);

}  // namespace ergopt
