#include "ergopt/shift.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace ergopt {

namespace {

constexpr int kMaxAlphabet = 36;

char symbol_char(Symbol s) { return s < 10 ? static_cast<char>('0' + s) : static_cast<char>('a' + (s - 10)); }

}  // namespace

std::string to_string(std::span<const Symbol> word) {
  std::string out;
  out.reserve(word.size());
  for (Symbol s : word) out.push_back(symbol_char(s));
  return out;
}

Word parse_word(std::string_view text) {
  Word w;
  w.reserve(text.size());
  for (char c : text) {
    if (c >= '0' && c <= '9') {
      w.push_back(static_cast<Symbol>(c - '0'));
    } else if (c >= 'a' && c <= 'z') {
      w.push_back(static_cast<Symbol>(c - 'a' + 10));
    } else {
      throw Error(Errc::ParseError, "bad symbol '" + std::string(1, c) + "' in word \"" + std::string(text) + "\"");
    }
  }
  return w;
}

Word least_rotation(std::span<const Symbol> w) {
  const std::size_t n = w.size();
  std::size_t best = 0;
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      Symbol a = w[(r + i) % n], b = w[(best + i) % n];
      if (a != b) {
        if (a < b) best = r;
        break;
      }
    }
  }
  Word out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = w[(best + i) % n];
  return out;
}

Word primitive_root(std::span<const Symbol> w) {
  const std::size_t n = w.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p) continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i) ok = w[i] == w[i - p];
    if (ok) return Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p));
  }
  return Word(w.begin(), w.end());
}

bool is_lyndon(std::span<const Symbol> w) {
  // Duval scan: w is Lyndon iff the factorization stops after one factor covering all of w.
  const std::size_t n = w.size();
  if (n == 0) return false;
  std::size_t i = 0, j = 1;
  while (j < n && w[i] <= w[j]) {
    i = (w[i] < w[j]) ? 0 : i + 1;
    ++j;
  }
  return j == n && i == 0;
}

void MetricParams::validate() const {
  if (!(lambda > 0.0 && lambda < 1.0)) throw Error(Errc::InvalidArgument, "lambda must lie in (0,1)");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(Errc::InvalidArgument, "alpha must lie in (0,1]");
}

SubshiftSpec::SubshiftSpec(int alphabet_size, const std::vector<std::vector<int>>& transitions) : n_(alphabet_size) {
  if (alphabet_size < 1 || alphabet_size > kMaxAlphabet)
    throw Error(Errc::InvalidArgument, "alphabet size must be in [1, 36]");
  if (transitions.size() != static_cast<std::size_t>(n_))
    throw Error(Errc::NonSquareMatrix, "expected " + std::to_string(n_) + " rows");
  t_.assign(static_cast<std::size_t>(n_) * n_, 0);
  for (int i = 0; i < n_; ++i) {
    if (transitions[i].size() != static_cast<std::size_t>(n_))
      throw Error(Errc::NonSquareMatrix, "row " + std::to_string(i) + " has wrong length");
    for (int j = 0; j < n_; ++j) {
      int e = transitions[i][j];
      if (e != 0 && e != 1) throw Error(Errc::InvalidArgument, "transition entries must be 0 or 1");
      t_[static_cast<std::size_t>(i) * n_ + j] = static_cast<std::uint8_t>(e);
    }
  }
  for (int i = 0; i < n_; ++i) {
    bool out = false, in = false;
    for (int j = 0; j < n_; ++j) {
      out |= t_[static_cast<std::size_t>(i) * n_ + j] != 0;
      in |= t_[static_cast<std::size_t>(j) * n_ + i] != 0;
    }
    if (!out || !in) throw Error(Errc::DeadSymbol, "symbol " + std::to_string(i) + " has no successor or no predecessor");
  }

  // Primitive iff some boolean power up to the Wielandt bound is positive.
  const std::size_t n = static_cast<std::size_t>(n_);
  std::vector<std::uint8_t> power = t_, next(n * n);
  const std::size_t bound = (n - 1) * (n - 1) + 1;
  mixing_ = false;
  for (std::size_t p = 1; p <= bound; ++p) {
    if (std::all_of(power.begin(), power.end(), [](std::uint8_t x) { return x != 0; })) {
      mixing_ = true;
      break;
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::uint8_t v = 0;
        for (std::size_t l = 0; l < n && !v; ++l) v = power[i * n + l] & t_[l * n + j];
        next[i * n + j] = v;
      }
    power.swap(next);
  }
}

SubshiftSpec SubshiftSpec::full_shift(int alphabet_size) {
  return SubshiftSpec(alphabet_size, std::vector<std::vector<int>>(alphabet_size, std::vector<int>(alphabet_size, 1)));
}

SubshiftSpec SubshiftSpec::golden_mean() { return SubshiftSpec(2, {{1, 1}, {1, 0}}); }

bool SubshiftSpec::is_full_shift() const {
  return std::all_of(t_.begin(), t_.end(), [](std::uint8_t x) { return x != 0; });
}

bool SubshiftSpec::admissible(std::span<const Symbol> word) const {
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] >= n_) return false;
    if (i > 0 && !allowed(word[i - 1], word[i])) return false;
  }
  return true;
}

bool SubshiftSpec::cyclically_admissible(std::span<const Symbol> word) const {
  return !word.empty() && admissible(word) && allowed(word.back(), word.front());
}

std::vector<std::vector<int>> SubshiftSpec::transitions() const {
  std::vector<std::vector<int>> m(n_, std::vector<int>(n_));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m[i][j] = t_[static_cast<std::size_t>(i) * n_ + j];
  return m;
}

SubshiftSpec build_subshift(int alphabet_size, const std::vector<std::vector<int>>& transitions) {
  return SubshiftSpec(alphabet_size, transitions);
}

// ---------------------------------------------------------------------------

SymbolicPoint::SymbolicPoint(Word preperiod, Word cycle) : pre_(std::move(preperiod)), cycle_(std::move(cycle)) {
  if (cycle_.empty()) throw Error(Errc::InvalidArgument, "cycle word must be nonempty");
  normalize();
}

SymbolicPoint SymbolicPoint::parse(std::string_view preperiod, std::string_view cycle) {
  return SymbolicPoint(parse_word(preperiod), parse_word(cycle));
}

void SymbolicPoint::normalize() {
  cycle_ = primitive_root(cycle_);
  while (!pre_.empty() && pre_.back() == cycle_.back()) {
    pre_.pop_back();
    std::rotate(cycle_.rbegin(), cycle_.rbegin() + 1, cycle_.rend());
  }
}

std::optional<std::size_t> SymbolicPoint::period() const {
  if (!pre_.empty()) return std::nullopt;
  return cycle_.size();
}

Symbol SymbolicPoint::at(std::size_t i) const {
  if (i < pre_.size()) return pre_[i];
  return cycle_[(i - pre_.size()) % cycle_.size()];
}

Word SymbolicPoint::prefix(std::size_t n) const {
  Word w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = at(i);
  return w;
}

SymbolicPoint SymbolicPoint::shift(std::size_t n) const {
  if (n <= pre_.size()) return SymbolicPoint(Word(pre_.begin() + static_cast<std::ptrdiff_t>(n), pre_.end()), cycle_);
  std::size_t r = (n - pre_.size()) % cycle_.size();
  Word c(cycle_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = cycle_[(r + i) % c.size()];
  return SymbolicPoint({}, std::move(c));
}

SymbolicPoint SymbolicPoint::prepend(Symbol a) const {
  Word p;
  p.reserve(pre_.size() + 1);
  p.push_back(a);
  p.insert(p.end(), pre_.begin(), pre_.end());
  return SymbolicPoint(std::move(p), cycle_);
}

SymbolicPoint SymbolicPoint::prepend(std::span<const Symbol> word) const {
  Word p(word.begin(), word.end());
  p.insert(p.end(), pre_.begin(), pre_.end());
  return SymbolicPoint(std::move(p), cycle_);
}

bool SymbolicPoint::admissible_in(const SubshiftSpec& spec) const {
  Word w = pre_;
  w.insert(w.end(), cycle_.begin(), cycle_.end());
  w.push_back(cycle_.front());
  return spec.admissible(w);
}

std::optional<std::size_t> SymbolicPoint::first_disagreement(const SymbolicPoint& other) const {
  if (*this == other) return std::nullopt;
  // Distinct eventually periodic points differ before this index (Fine and Wilf).
  const std::size_t bound = std::max(pre_.size(), other.pre_.size()) + cycle_.size() + other.cycle_.size();
  for (std::size_t i = 0; i < bound; ++i)
    if (at(i) != other.at(i)) return i;
  return bound;
}

std::string SymbolicPoint::to_string() const {
  return ergopt::to_string(pre_) + "(" + ergopt::to_string(cycle_) + ")";
}

double distance(const SymbolicPoint& x, const SymbolicPoint& y, const MetricParams& metric) {
  auto n = x.first_disagreement(y);
  if (!n) return 0.0;
  return std::pow(metric.lambda, static_cast<double>(*n));
}

std::vector<SymbolicPoint> inverse_branches(const SubshiftSpec& spec, const SymbolicPoint& y) {
  std::vector<SymbolicPoint> out;
  const Symbol head = y.at(0);
  for (int a = 0; a < spec.alphabet_size(); ++a)
    if (spec.allowed(static_cast<Symbol>(a), head)) out.push_back(y.prepend(static_cast<Symbol>(a)));
  return out;
}

// ---------------------------------------------------------------------------

Digraph::Digraph(std::size_t vertex_count, std::vector<Edge> edges) : n_(vertex_count), edges_(std::move(edges)) {
  if (!std::is_sorted(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) { return a.source < b.source; }))
    std::stable_sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) { return a.source < b.source; });
  out_offsets_.assign(n_ + 1, 0);
  in_offsets_.assign(n_ + 1, 0);
  for (const Edge& e : edges_) {
    if (e.source >= n_ || e.target >= n_) throw Error(Errc::InvalidArgument, "edge endpoint out of range");
    ++out_offsets_[e.source + 1];
    ++in_offsets_[e.target + 1];
  }
  for (std::size_t v = 0; v < n_; ++v) {
    out_offsets_[v + 1] += out_offsets_[v];
    in_offsets_[v + 1] += in_offsets_[v];
  }
  in_edges_.resize(edges_.size());
  std::vector<std::size_t> fill(in_offsets_.begin(), in_offsets_.end() - 1);
  for (std::size_t e = 0; e < edges_.size(); ++e) in_edges_[fill[edges_[e].target]++] = static_cast<std::uint32_t>(e);
}

std::optional<std::size_t> Digraph::find_edge(VertexId u, VertexId v) const {
  for (std::size_t e = out_begin(u); e < out_end(u); ++e)
    if (edges_[e].target == v) return e;
  return std::nullopt;
}

Digraph Digraph::induced(std::span<const VertexId> vertices) const {
  std::vector<std::int64_t> local(n_, -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = static_cast<std::int64_t>(i);
  std::vector<Edge> sub;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t e = out_begin(vertices[i]); e < out_end(vertices[i]); ++e) {
      std::int64_t t = local[edges_[e].target];
      if (t >= 0) sub.push_back({static_cast<VertexId>(i), static_cast<VertexId>(t)});
    }
  return Digraph(vertices.size(), std::move(sub));
}

WordGraph::WordGraph(const SubshiftSpec& spec, int depth, std::size_t vertex_budget) : spec_(spec), depth_(depth) {
  if (depth < 1) throw Error(Errc::InvalidArgument, "word graph depth must be >= 1");
  const std::size_t a = static_cast<std::size_t>(spec.alphabet_size());
  std::size_t codes = 1;
  for (int i = 0; i < depth; ++i) {
    if (codes > vertex_budget / a) throw Error(Errc::DepthOverflow, "alphabet^depth exceeds the vertex budget");
    codes *= a;
  }

  // Admissible words by increasing code, which is lexicographic order.
  code_to_vertex_.assign(codes, -1);
  std::vector<std::size_t> vertex_code;
  Word w(depth, 0);
  for (std::size_t code = 0; code < codes; ++code) {
    std::size_t c = code;
    for (int i = depth - 1; i >= 0; --i) {
      w[i] = static_cast<Symbol>(c % a);
      c /= a;
    }
    if (!spec.admissible(w)) continue;
    code_to_vertex_[code] = static_cast<std::int64_t>(vertex_code.size());
    vertex_code.push_back(code);
    words_.insert(words_.end(), w.begin(), w.end());
  }

  const std::size_t tail = codes / a;  // a^(depth-1)
  std::vector<Edge> edges;
  for (VertexId u = 0; u < vertex_code.size(); ++u) {
    const Symbol last = words_[static_cast<std::size_t>(u) * depth + depth - 1];
    const std::size_t shifted = (vertex_code[u] % tail) * a;
    for (std::size_t b = 0; b < a; ++b) {
      if (!spec.allowed(last, static_cast<Symbol>(b))) continue;
      edges.push_back({u, static_cast<VertexId>(code_to_vertex_[shifted + b])});
    }
  }
  graph_ = Digraph(vertex_code.size(), std::move(edges));
}

std::optional<VertexId> WordGraph::find(std::span<const Symbol> word) const {
  if (word.size() < static_cast<std::size_t>(depth_)) return std::nullopt;
  const std::size_t a = static_cast<std::size_t>(spec_.alphabet_size());
  std::size_t code = 0;
  for (int i = 0; i < depth_; ++i) {
    if (word[i] >= a) return std::nullopt;
    code = code * a + word[i];
  }
  std::int64_t v = code_to_vertex_[code];
  if (v < 0) return std::nullopt;
  return static_cast<VertexId>(v);
}

VertexId WordGraph::vertex_of(const SymbolicPoint& x) const {
  auto v = find(x.prefix(static_cast<std::size_t>(depth_)));
  if (!v) throw Error(Errc::InadmissiblePoint, "point " + x.to_string() + " is not admissible");
  return *v;
}

Word WordGraph::edge_word(std::size_t e) const {
  const Edge& ed = edge(e);
  auto u = word(ed.source);
  Word out(u.begin(), u.end());
  out.push_back(word(ed.target).back());
  return out;
}

WordGraph word_graph(const SubshiftSpec& spec, int depth, std::size_t vertex_budget) {
  return WordGraph(spec, depth, vertex_budget);
}

std::vector<int> strongly_connected_components(std::size_t vertex_count, std::span<const Edge> edges,
                                               std::span<const char> edge_mask) {
  std::vector<std::vector<VertexId>> adj(vertex_count);
  for (std::size_t e = 0; e < edges.size(); ++e)
    if (edge_mask.empty() || edge_mask[e]) adj[edges[e].source].push_back(edges[e].target);

  // Iterative Tarjan.
  constexpr int kUnvisited = -1;
  std::vector<int> index(vertex_count, kUnvisited), low(vertex_count, 0), comp(vertex_count, -1);
  std::vector<char> on_stack(vertex_count, 0);
  std::vector<VertexId> stack;
  std::vector<std::pair<VertexId, std::size_t>> call;
  int counter = 0, ncomp = 0;
  for (VertexId root = 0; root < vertex_count; ++root) {
    if (index[root] != kUnvisited) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      if (pos < adj[v].size()) {
        VertexId w = adj[v][pos++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        VertexId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = ncomp;
        } while (w != v);
        ++ncomp;
      }
      VertexId done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  return comp;
}

Word return_path(const SubshiftSpec& spec, Symbol from, Symbol to) {
  if (spec.allowed(from, to)) return {};
  const int n = spec.alphabet_size();
  std::vector<int> parent(n, -2);
  std::deque<Symbol> queue;
  for (int b = 0; b < n; ++b)
    if (spec.allowed(from, static_cast<Symbol>(b))) {
      parent[b] = -1;
      queue.push_back(static_cast<Symbol>(b));
    }
  while (!queue.empty()) {
    Symbol s = queue.front();
    queue.pop_front();
    if (spec.allowed(s, to)) {
      Word path;
      for (int c = s; c >= 0; c = parent[c]) path.push_back(static_cast<Symbol>(c));
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (int b = 0; b < n; ++b)
      if (parent[b] == -2 && spec.allowed(s, static_cast<Symbol>(b))) {
        parent[b] = s;
        queue.push_back(static_cast<Symbol>(b));
      }
  }
  throw Error(Errc::NoCycle, "symbol " + std::to_string(to) + " unreachable from " + std::to_string(from));
}

SymbolicPoint periodic_extension(const SubshiftSpec& spec, std::span<const Symbol> word) {
  if (word.empty()) throw Error(Errc::InvalidArgument, "empty word");
  Word cycle(word.begin(), word.end());
  Word bridge = return_path(spec, word.back(), word.front());
  cycle.insert(cycle.end(), bridge.begin(), bridge.end());
  return SymbolicPoint::periodic(std::move(cycle));
}

}  // namespace ergopt
