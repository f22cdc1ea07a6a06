#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ergopt/shift.hpp"

namespace ergopt {

/// Locally constant function of the first `depth` symbols, one value per
/// admissible depth-word (vertex order of the word graph).
class Potential {
 public:
  Potential(const SubshiftSpec& spec, int depth, std::vector<double> values, MetricParams metric = {});
  Potential(std::shared_ptr<const WordGraph> graph, std::vector<double> values, MetricParams metric = {});

  static Potential constant(const SubshiftSpec& spec, int depth, double c, MetricParams metric = {});
  static Potential from_function(const SubshiftSpec& spec, int depth,
                                 const std::function<double(std::span<const Symbol>)>& f, MetricParams metric = {});
  /// Values keyed by word text; every admissible depth-word must be present.
  static Potential from_words(const SubshiftSpec& spec, int depth, const std::map<std::string, double>& values,
                              MetricParams metric = {});

  const SubshiftSpec& subshift() const { return graph_->subshift(); }
  int depth() const { return graph_->depth(); }
  const MetricParams& metric() const { return metric_; }
  const WordGraph& graph() const { return *graph_; }
  std::shared_ptr<const WordGraph> graph_ptr() const { return graph_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  double value(VertexId v) const { return values_[v]; }
  /// Value on the cylinder of the first depth() symbols of `word`.
  double value(std::span<const Symbol> word) const;
  double eval(const SymbolicPoint& x) const;

  /// Same function re-expressed on longer words.
  Potential lifted(int new_depth) const;
  Potential with_metric(const MetricParams& metric) const { return Potential(graph_, values_, metric); }

  /// Per-edge weights A(source) on the depth-k word graph.
  std::vector<double> edge_weights() const;
  /// Values indexed by base-a word code; entries of inadmissible words are NaN.
  std::vector<double> values_by_code() const;

 private:
  std::shared_ptr<const WordGraph> graph_;
  std::vector<double> values_;
  MetricParams metric_;
};

/// Sup over pairs of sup|A(x) - A(y)| / d(x,y)^alpha; exact for locally constant A.
double holder_constant(const Potential& a);
double holder_constant(const Potential& a, double alpha);
double sup_norm(const Potential& a);

struct DiscretizationReport {
  int depth = 0;
  double tail_bound = 0.0;
  /// Modulus-based bound, present when the caller supplied a modulus of continuity.
  std::optional<double> certified_bound;
};

struct DiscretizeOptions {
  int probes_per_cylinder = 4;
  std::uint64_t seed = 0;
  /// omega(r) bounding |f(x) - f(y)| when d(x,y) <= r.
  std::function<double(double)> modulus;
  MetricParams metric = {};
};

using Sampler = std::function<double(const SymbolicPoint&)>;

struct Discretization {
  Potential potential;
  DiscretizationReport report;
};

Discretization discretize(const Sampler& sampler, const SubshiftSpec& spec, int depth,
                          const DiscretizeOptions& options = {});

/// scale * A + shift + addend, at the larger of the two depths.
Potential affine_combine(const Potential& a, double scale, double shift,
                         const std::optional<Potential>& addend = std::nullopt);

/// max |A - B| after lifting both to a common depth.
double sup_distance(const Potential& a, const Potential& b);

}  // namespace ergopt
