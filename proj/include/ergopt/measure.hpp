#pragma once

#include <memory>
#include <span>
#include <vector>

#include "ergopt/potential.hpp"

namespace ergopt {

/// Shift-invariant probability: either equidistributed on a periodic orbit or
/// a stationary Markov chain on k-words.
class InvariantMeasure {
 public:
  enum class Kind { Periodic, Markov };

  /// Throws InadmissibleCycle. The cycle is stored as its primitive least rotation.
  static InvariantMeasure periodic(const SubshiftSpec& spec, std::span<const Symbol> cycle);
  /// `stationary` per vertex and `transition` per edge of `graph`; rows must be stochastic
  /// and the vector stationary (checked to 1e-9).
  static InvariantMeasure markov(std::shared_ptr<const WordGraph> graph, std::vector<double> stationary,
                                 std::vector<double> transition);

  Kind kind() const { return kind_; }
  const SubshiftSpec& subshift() const { return spec_; }
  /// Periodic kind only.
  const Word& cycle() const { return cycle_; }
  /// Markov kind only.
  const WordGraph& graph() const { return *graph_; }
  std::span<const double> stationary() const { return stationary_; }
  std::span<const double> transition() const { return transition_; }

  /// Mass of the cylinder [w]; 0 for inadmissible words.
  double mass(std::span<const Symbol> w) const;
  double integrate(const Potential& a) const;

  /// Admissible words of length n with positive mass, in lexicographic order.
  std::vector<Word> support_words(int n) const;

 private:
  InvariantMeasure(Kind kind, SubshiftSpec spec) : kind_(kind), spec_(std::move(spec)) {}

  Kind kind_;
  SubshiftSpec spec_;
  Word cycle_;
  std::shared_ptr<const WordGraph> graph_;
  std::vector<double> stationary_;
  std::vector<double> transition_;
};

}  // namespace ergopt
