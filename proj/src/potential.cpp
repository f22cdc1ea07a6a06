#include "ergopt/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace ergopt {

Potential::Potential(const SubshiftSpec& spec, int depth, std::vector<double> values, MetricParams metric)
    : Potential(std::make_shared<const WordGraph>(spec, depth), std::move(values), metric) {}

Potential::Potential(std::shared_ptr<const WordGraph> graph, std::vector<double> values, MetricParams metric)
    : graph_(std::move(graph)), values_(std::move(values)), metric_(metric) {
  metric_.validate();
  if (values_.size() != graph_->vertex_count())
    throw Error(Errc::InvalidArgument, "expected " + std::to_string(graph_->vertex_count()) + " potential values, got " +
                                           std::to_string(values_.size()));
  for (double v : values_)
    if (!std::isfinite(v)) throw Error(Errc::InvalidArgument, "potential values must be finite");
}

Potential Potential::constant(const SubshiftSpec& spec, int depth, double c, MetricParams metric) {
  auto g = std::make_shared<const WordGraph>(spec, depth);
  std::vector<double> v(g->vertex_count(), c);
  return Potential(std::move(g), std::move(v), metric);
}

Potential Potential::from_function(const SubshiftSpec& spec, int depth,
                                   const std::function<double(std::span<const Symbol>)>& f, MetricParams metric) {
  auto g = std::make_shared<const WordGraph>(spec, depth);
  std::vector<double> v(g->vertex_count());
  for (VertexId u = 0; u < v.size(); ++u) v[u] = f(g->word(u));
  return Potential(std::move(g), std::move(v), metric);
}

Potential Potential::from_words(const SubshiftSpec& spec, int depth, const std::map<std::string, double>& values,
                                MetricParams metric) {
  auto g = std::make_shared<const WordGraph>(spec, depth);
  std::vector<double> v(g->vertex_count(), std::numeric_limits<double>::quiet_NaN());
  for (const auto& [text, x] : values) {
    Word w = parse_word(text);
    if (w.size() != static_cast<std::size_t>(depth))
      throw Error(Errc::ParseError, "word \"" + text + "\" does not have length " + std::to_string(depth));
    auto id = g->find(w);
    if (!id) throw Error(Errc::InadmissiblePoint, "word \"" + text + "\" is not admissible");
    v[*id] = x;
  }
  for (VertexId u = 0; u < v.size(); ++u)
    if (std::isnan(v[u])) throw Error(Errc::ParseError, "missing value for word \"" + to_string(g->word(u)) + "\"");
  return Potential(std::move(g), std::move(v), metric);
}

double Potential::value(std::span<const Symbol> word) const {
  auto v = graph_->find(word);
  if (!v) throw Error(Errc::InadmissiblePoint, "word \"" + to_string(word) + "\" is not an admissible cylinder");
  return values_[*v];
}

double Potential::eval(const SymbolicPoint& x) const {
  if (!x.admissible_in(subshift())) throw Error(Errc::InadmissiblePoint, "point " + x.to_string() + " is not admissible");
  return value(x.prefix(static_cast<std::size_t>(depth())));
}

Potential Potential::lifted(int new_depth) const {
  if (new_depth < depth()) throw Error(Errc::InvalidArgument, "cannot lift to a smaller depth");
  if (new_depth == depth()) return *this;
  auto g = std::make_shared<const WordGraph>(subshift(), new_depth);
  std::vector<double> v(g->vertex_count());
  for (VertexId u = 0; u < v.size(); ++u) v[u] = value(g->word(u));
  return Potential(std::move(g), std::move(v), metric_);
}

std::vector<double> Potential::edge_weights() const {
  std::vector<double> w(graph_->edge_count());
  for (std::size_t e = 0; e < w.size(); ++e) w[e] = values_[graph_->edge(e).source];
  return w;
}

std::vector<double> Potential::values_by_code() const {
  const std::size_t a = static_cast<std::size_t>(subshift().alphabet_size());
  std::size_t codes = 1;
  for (int i = 0; i < depth(); ++i) codes *= a;
  std::vector<double> out(codes, std::numeric_limits<double>::quiet_NaN());
  for (VertexId u = 0; u < values_.size(); ++u) {
    std::size_t code = 0;
    for (Symbol s : graph_->word(u)) code = code * a + s;
    out[code] = values_[u];
  }
  return out;
}

double holder_constant(const Potential& a) { return holder_constant(a, a.metric().alpha); }

double holder_constant(const Potential& a, double alpha) {
  // Words sharing a j-prefix are contiguous in vertex order; the oscillation of
  // each such block over lambda^(j alpha) bounds every pair disagreeing at index >= j.
  const WordGraph& g = a.graph();
  const std::size_t n = g.vertex_count();
  const int k = g.depth();
  double best = 0.0;
  for (int j = 0; j < k; ++j) {
    const double scale = std::pow(a.metric().lambda, j * alpha);
    std::size_t start = 0;
    while (start < n) {
      std::size_t end = start + 1;
      auto head = g.word(static_cast<VertexId>(start)).first(static_cast<std::size_t>(j));
      while (end < n && std::equal(head.begin(), head.end(), g.word(static_cast<VertexId>(end)).begin())) ++end;
      auto [lo, hi] = std::minmax_element(a.values().begin() + static_cast<std::ptrdiff_t>(start),
                                          a.values().begin() + static_cast<std::ptrdiff_t>(end));
      best = std::max(best, (*hi - *lo) / scale);
      start = end;
    }
  }
  return best;
}

double sup_norm(const Potential& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

namespace {

// Random admissible tail after `word`: a preperiod continuation closed by a short cycle.
SymbolicPoint random_probe(const SubshiftSpec& spec, std::span<const Symbol> word, std::mt19937_64& rng) {
  const int a = spec.alphabet_size();
  std::uniform_int_distribution<int> len_dist(1, 2 * static_cast<int>(word.size()) + 4);
  const int pre_len = len_dist(rng), cyc_len = len_dist(rng);
  Word walk(word.begin(), word.end());
  std::vector<Symbol> next;
  for (int i = 0; i < pre_len + cyc_len; ++i) {
    next.clear();
    for (int b = 0; b < a; ++b)
      if (spec.allowed(walk.back(), static_cast<Symbol>(b))) next.push_back(static_cast<Symbol>(b));
    std::uniform_int_distribution<std::size_t> pick(0, next.size() - 1);
    walk.push_back(next[pick(rng)]);
  }
  const std::size_t split = word.size() + static_cast<std::size_t>(pre_len);
  Word pre(walk.begin(), walk.begin() + static_cast<std::ptrdiff_t>(split));
  Word cyc(walk.begin() + static_cast<std::ptrdiff_t>(split), walk.end());
  Word bridge = return_path(spec, cyc.back(), cyc.front());
  cyc.insert(cyc.end(), bridge.begin(), bridge.end());
  return SymbolicPoint(std::move(pre), std::move(cyc));
}

double sample(const Sampler& sampler, const SymbolicPoint& x, std::span<const Symbol> word) {
  double v;
  try {
    v = sampler(x);
  } catch (const std::exception& e) {
    throw Error(Errc::SamplerFailure, "sampler failed on cylinder [" + to_string(word) + "]: " + e.what());
  }
  if (!std::isfinite(v))
    throw Error(Errc::SamplerFailure, "sampler returned a non-finite value on cylinder [" + to_string(word) + "]");
  return v;
}

}  // namespace

Discretization discretize(const Sampler& sampler, const SubshiftSpec& spec, int depth, const DiscretizeOptions& options) {
  if (depth < 1) throw Error(Errc::InvalidArgument, "depth must be >= 1");
  if (options.probes_per_cylinder < 1) throw Error(Errc::InvalidArgument, "probes_per_cylinder must be >= 1");
  auto g = std::make_shared<const WordGraph>(spec, depth);
  std::vector<double> values(g->vertex_count());
  std::mt19937_64 rng(options.seed);
  double tail = 0.0;
  for (VertexId u = 0; u < values.size(); ++u) {
    auto w = g->word(u);
    const double canonical = sample(sampler, periodic_extension(spec, w), w);
    double lo = canonical, hi = canonical;
    for (int p = 1; p < options.probes_per_cylinder; ++p) {
      const double v = sample(sampler, random_probe(spec, w, rng), w);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    values[u] = canonical;
    tail = std::max(tail, hi - lo);
  }
  DiscretizationReport report{depth, tail, std::nullopt};
  if (options.modulus) report.certified_bound = options.modulus(std::pow(options.metric.lambda, depth));
  return {Potential(std::move(g), std::move(values), options.metric), report};
}

Potential affine_combine(const Potential& a, double scale, double shift, const std::optional<Potential>& addend) {
  if (!addend) {
    std::vector<double> v(a.values().begin(), a.values().end());
    for (double& x : v) x = scale * x + shift;
    return Potential(a.graph_ptr(), std::move(v), a.metric());
  }
  if (!(addend->subshift() == a.subshift())) throw Error(Errc::SubshiftMismatch, "potentials live on different subshifts");
  const int depth = std::max(a.depth(), addend->depth());
  Potential base = a.lifted(depth);
  Potential add = addend->lifted(depth);
  std::vector<double> v(base.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = scale * base.values()[i] + shift + add.values()[i];
  return Potential(base.graph_ptr(), std::move(v), a.metric());
}

double sup_distance(const Potential& a, const Potential& b) {
  if (!(a.subshift() == b.subshift())) throw Error(Errc::SubshiftMismatch, "potentials live on different subshifts");
  const int depth = std::max(a.depth(), b.depth());
  Potential x = a.lifted(depth), y = b.lifted(depth);
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x.values()[i] - y.values()[i]));
  return m;
}

}  // namespace ergopt
