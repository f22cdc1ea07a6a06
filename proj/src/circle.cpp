#include "ergopt/circle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "ergopt/thermo.hpp"

namespace ergopt {

namespace {

constexpr double kKnotSnap = 1e-12;
constexpr int kMaxCodingDepth = 24;

double frac(double x) {
  double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

double circular_gap(double a, double b) {
  const double d = std::abs(frac(a) - frac(b));
  return std::min(d, 1.0 - d);
}

}  // namespace

CircleMap CircleMap::doubling() {
  CircleMap f;
  f.name_ = "doubling";
  f.lift_ = [](double x) { return 2.0 * x; };
  f.derivative_ = [](double) { return 2.0; };
  return f;
}

CircleMap CircleMap::perturbed_doubling(double eps) {
  if (!(std::abs(eps) < 2.0)) throw Error(Errc::InvalidArgument, "perturbed doubling needs |epsilon| < 2");
  CircleMap f;
  f.name_ = "perturbed_doubling";
  const double two_pi = 2.0 * std::numbers::pi;
  f.lift_ = [eps, two_pi](double x) { return 2.0 * x + eps * std::sin(two_pi * x) / two_pi; };
  f.derivative_ = [eps, two_pi](double x) { return 2.0 + eps * std::cos(two_pi * x); };
  return f;
}

CircleMap CircleMap::from_lift(Fn lift, Fn derivative, std::string name) {
  if (!lift) throw Error(Errc::InvalidArgument, "lift callback is empty");
  CircleMap f;
  f.name_ = std::move(name);
  f.lift_ = std::move(lift);
  if (derivative) {
    f.derivative_ = std::move(derivative);
  } else {
    f.finite_difference_ = true;
    auto l = f.lift_;
    f.derivative_ = [l](double x) {
      constexpr double h = 1e-7;
      return (l(x + h) - l(x - h)) / (2.0 * h);
    };
  }
  f.validate();
  return f;
}

CircleMap CircleMap::table(std::vector<std::pair<double, double>> knots, std::vector<double> slopes) {
  if (knots.size() < 2) throw Error(Errc::InvalidArgument, "table map needs at least two knots");
  if (!slopes.empty() && slopes.size() != knots.size() - 1)
    throw Error(Errc::InvalidArgument, "table map needs one slope per segment");
  CircleMap f;
  f.name_ = "table";
  f.knots_ = std::move(knots);
  f.slopes_ = std::move(slopes);
  const auto& k = f.knots_;
  if (k.front().first != 0.0 || k.back().first != 1.0)
    throw Error(Errc::InvalidArgument, "table knots must run from x = 0 to x = 1");
  for (std::size_t i = 0; i + 1 < k.size(); ++i)
    if (!(k[i + 1].first > k[i].first) || !(k[i + 1].second > k[i].second))
      throw Error(Errc::InvalidArgument, "table lift must be strictly increasing");
  if (std::abs(k.back().second - k.front().second - 2.0) > 1e-12)
    throw Error(Errc::InvalidArgument, "table lift must satisfy F(1) = F(0) + 2");
  for (double s : f.slopes_)
    if (!(s > 0.0) || !std::isfinite(s)) throw Error(Errc::InvalidArgument, "table slopes must be positive");

  const double f0 = k.front().second;
  if (std::abs(f0 - std::round(f0)) <= kKnotSnap) {
    const double shift = std::round(f0);
    for (auto& [x, y] : f.knots_) y -= shift;
    f.knots_.front().second = 0.0;
    f.knots_.back().second = 2.0;
    return f;
  }

  // Move a fixed point y0 (F(y0) - y0 an integer) to 0: G(s) = F(s + y0) - y0 - n0.
  const double n0 = std::ceil(f0);
  double y0 = -1.0;
  for (std::size_t i = 0; i + 1 < k.size(); ++i) {
    const double g0 = k[i].second - k[i].first - n0, g1 = k[i + 1].second - k[i + 1].first - n0;
    if (g0 <= 0.0 && g1 >= 0.0 && g1 > g0) {
      y0 = k[i].first + (k[i + 1].first - k[i].first) * (-g0) / (g1 - g0);
      break;
    }
  }
  if (y0 < 0.0) throw Error(Errc::InvalidArgument, "table map has no fixed point");
  std::vector<double> xs = {0.0, 1.0};
  for (const auto& [x, y] : k) xs.push_back(frac(x - y0));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(), [](double a, double b) { return b - a <= kKnotSnap; }), xs.end());
  xs.back() = 1.0;
  std::vector<std::pair<double, double>> pinned;
  std::vector<double> pinned_slopes;
  for (double s : xs) pinned.emplace_back(s, f.lift(s + y0) - y0 - n0);
  pinned.front().second = 0.0;
  pinned.back().second = 2.0;
  if (!f.slopes_.empty())
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) pinned_slopes.push_back(f.derivative(0.5 * (xs[i] + xs[i + 1]) + y0));
  CircleMap out = table(std::move(pinned), std::move(pinned_slopes));
  out.rotation_ = y0;
  return out;
}

void CircleMap::validate() const {
  constexpr int kGrid = 4096;
  if (std::abs(lift_(0.0)) > 1e-12 || std::abs(lift_(1.0) - 2.0) > 1e-12)
    throw Error(Errc::InvalidArgument, "lift must satisfy F(0) = 0 and F(1) = 2");
  double prev = lift_(0.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double x = static_cast<double>(i) / kGrid;
    const double y = lift_(x);
    if (!(y > prev)) throw Error(Errc::InvalidArgument, "lift is not strictly increasing");
    if (!(derivative_(x) > 0.0)) throw Error(Errc::InvalidArgument, "derivative is not positive");
    prev = y;
  }
}

std::size_t CircleMap::segment(double x) const {
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x + kKnotSnap,
                             [](double v, const std::pair<double, double>& kn) { return v < kn.first; });
  std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - knots_.begin() - 1));
  return std::min(i, knots_.size() - 2);
}

double CircleMap::lift(double x) const {
  const double k = std::floor(x);
  const double base = x - k;
  double y;
  if (is_table()) {
    const std::size_t i = segment(base);
    const auto& [x0, y0] = knots_[i];
    const auto& [x1, y1] = knots_[i + 1];
    y = y0 + (y1 - y0) * (base - x0) / (x1 - x0);
  } else {
    y = lift_(base);
  }
  return y + 2.0 * k;
}

double CircleMap::operator()(double x) const { return frac(lift(x)); }

double CircleMap::derivative(double x) const {
  const double base = frac(x);
  if (is_table()) {
    const std::size_t i = segment(base);
    if (!slopes_.empty()) return slopes_[i];
    return (knots_[i + 1].second - knots_[i].second) / (knots_[i + 1].first - knots_[i].first);
  }
  return derivative_(base);
}

double CircleMap::preimage(double target) const {
  if (!(target >= 0.0 && target <= 2.0)) throw Error(Errc::RootFindingFailure, "preimage target outside [0, 2]");
  if (target == 0.0) return 0.0;
  if (target == 2.0) return 1.0;
  if (is_table()) {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), target,
                               [](double v, const std::pair<double, double>& kn) { return v < kn.second; });
    std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - knots_.begin() - 1));
    i = std::min(i, knots_.size() - 2);
    const auto& [x0, y0] = knots_[i];
    const auto& [x1, y1] = knots_[i + 1];
    return x0 + (x1 - x0) * (target - y0) / (y1 - y0);
  }
  auto g = [&](double x) { return lift_(x) - target; };
  std::uintmax_t iters = 200;
  try {
    auto [lo, hi] = boost::math::tools::toms748_solve(g, 0.0, 1.0, -target, 2.0 - target,
                                                      boost::math::tools::eps_tolerance<double>(50), iters);
    if (iters >= 200) throw Error(Errc::RootFindingFailure, "root finding did not converge");
    return 0.5 * (lo + hi);
  } catch (const std::domain_error& e) {
    throw Error(Errc::RootFindingFailure, e.what());
  }
}

double CircleMap::min_derivative(int samples) const {
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) lo = std::min(lo, derivative((i + 0.5) / samples));
  return lo;
}

double CodingTable::anchor(std::span<const Symbol> w) const {
  const int m = static_cast<int>(w.size());
  if (m > depth) throw Error(Errc::InvalidArgument, "word longer than the coding depth");
  std::size_t idx = 0;
  for (int j = 0; j < m; ++j) idx |= static_cast<std::size_t>(w[j] & 1) << j;
  return levels[m][idx];
}

double CodingTable::theta(std::uint64_t j, int m) const {
  if (j == 0) return 0.0;
  if (j == (std::uint64_t{1} << m)) return 1.0;
  while ((j & 1) == 0 && m > 0) {
    j >>= 1;
    --m;
  }
  Word w(static_cast<std::size_t>(m - 1));
  for (int i = 0; i < m - 1; ++i) w[i] = static_cast<Symbol>((j >> (m - 1 - i)) & 1);
  return anchor(w);
}

double CodingTable::tree_residual(const CircleMap& f) const {
  double worst = circular_gap(f(levels[0][0]), 0.0);
  for (int m = 1; m <= depth; ++m)
    for (std::size_t idx = 0; idx < levels[m].size(); ++idx)
      worst = std::max(worst, circular_gap(f(levels[m][idx]), levels[m - 1][idx >> 1]));
  return worst;
}

bool CodingTable::order_preserved() const {
  const int m = depth + 1;
  double prev = 0.0;
  for (std::uint64_t j = 1; j <= (std::uint64_t{1} << m); ++j) {
    const double cur = theta(j, m);
    if (!(cur > prev)) return false;
    prev = cur;
  }
  return true;
}

CodingTable coding_table(const CircleMap& f, int depth) {
  if (depth < 0) throw Error(Errc::InvalidArgument, "coding depth must be nonnegative");
  if (depth > kMaxCodingDepth) throw Error(Errc::BudgetExceeded, "coding depth exceeds 24");
  CodingTable t;
  t.depth = depth;
  t.levels.resize(depth + 1);
  t.levels[0] = {f.preimage(1.0)};
  for (int m = 1; m <= depth; ++m) {
    const auto& parent = t.levels[m - 1];
    auto& level = t.levels[m];
    level.resize(std::size_t{1} << m);
    std::atomic<bool> failed{false};
    const std::int64_t size = static_cast<std::int64_t>(level.size());
#pragma omp parallel for if (size >= 4096)
    for (std::int64_t idx = 0; idx < size; ++idx) {
      try {
        level[idx] = f.branch(static_cast<int>(idx & 1), parent[idx >> 1]);
      } catch (...) {
        failed = true;
      }
    }
    if (failed) throw Error(Errc::RootFindingFailure, "inverse branch failed at level " + std::to_string(m));
  }
  return t;
}

MapPotential potential_from_map(const CircleMap& f, int depth) {
  constexpr int kExtra = 6;
  if (depth < 1) throw Error(Errc::InvalidArgument, "potential depth must be >= 1");
  const CodingTable table = coding_table(f, depth + kExtra);
  const SubshiftSpec spec = SubshiftSpec::full_shift(2);
  auto value = [&](std::span<const Symbol> w) { return -std::log(f.derivative(table.anchor(w))); };

  MapPotential out{Potential::from_function(spec, depth, value), 0.0, 0.0, false, 0.0, f.finite_difference()};
  const auto& g = out.potential.graph();
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    Word w(g.word(v).begin(), g.word(v).end());
    double lo = out.potential.value(v), hi = lo;
    for (int extra = 1; extra <= kExtra; ++extra) {
      Word ext = w;
      ext.resize(w.size() + extra, 0);
      for (std::uint64_t tail = 0; tail < (std::uint64_t{1} << extra); ++tail) {
        for (int i = 0; i < extra; ++i) ext[w.size() + i] = static_cast<Symbol>((tail >> (extra - 1 - i)) & 1);
        const double y = value(ext);
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      }
    }
    out.tail_bound = std::max(out.tail_bound, hi - lo);
  }
  out.pressure = pressure(out.potential);
  out.pressure_ok = std::abs(out.pressure) <= out.tail_bound + 1e-9;

  // Regress log of the widest coded gap per level against the level.
  std::vector<double> xs, ys;
  for (int m = 1; m <= table.depth + 1; ++m) {
    double widest = 0.0, prev = 0.0;
    for (std::uint64_t j = 1; j <= (std::uint64_t{1} << m); ++j) {
      const double cur = table.theta(j, m);
      widest = std::max(widest, cur - prev);
      prev = cur;
    }
    xs.push_back(static_cast<double>(m));
    ys.push_back(std::log2(widest));
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  out.holder_estimate = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

double coded_periodic_point(const CircleMap& f, std::span<const Symbol> w) {
  if (w.empty()) throw Error(Errc::InvalidArgument, "empty itinerary");
  double x = 0.5;
  for (int it = 0; it < 4000; ++it) {
    double y = x;
    for (std::size_t j = w.size(); j-- > 0;) y = f.branch(w[j] & 1, y >= 1.0 ? y - 1.0 : y);
    if (std::abs(y - x) < 1e-14) return frac(y);
    x = y >= 1.0 ? y - 1.0 : y;
  }
  throw Error(Errc::NonConvergence, "inverse branches did not contract to a point");
}

namespace {

std::vector<double> circle_orbit(const CircleMap& f, const Word& word) {
  std::vector<double> pts;
  for (std::size_t i = 0; i < word.size(); ++i) {
    Word rot(word.begin() + i, word.end());
    rot.insert(rot.end(), word.begin(), word.begin() + i);
    pts.push_back(coded_periodic_point(f, rot));
  }
  return pts;
}

bool same_orbit(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size()) return false;
  auto norm = [](std::vector<double>& v) {
    for (double& x : v)
      if (1.0 - x < 1e-9) x = 0.0;
    std::sort(v.begin(), v.end());
  };
  norm(a);
  norm(b);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (circular_gap(a[i], b[i]) > 1e-9) return false;
  return true;
}

}  // namespace

CircleOrbit lyapunov_maximize(const CircleMap& f, int depth, int max_period) {
  const MapPotential pm = potential_from_map(f, depth);
  const Potential log_derivative = affine_combine(pm.potential, -1.0, 0.0);
  const MaxResult r = max_mean(log_derivative);
  CircleOrbit out;
  out.word = r.critical_words.front();
  out.critical_words = r.critical_words;
  out.discretized_mean = r.m0;
  out.points = circle_orbit(f, out.word);
  for (double x : out.points) out.exponent += std::log(f.derivative(x));
  out.exponent /= static_cast<double>(out.points.size());

  // Distinct words may code the same circle orbit (0 and 1 both code the fixed point 0).
  out.ambiguous = r.truncated;
  for (std::size_t i = 1; i < r.critical_words.size() && i < 16 && !out.ambiguous; ++i)
    if (!same_orbit(out.points, circle_orbit(f, r.critical_words[i]))) out.ambiguous = true;
  if (r.critical_words.size() > 16) out.ambiguous = true;

  if (max_period > 0) {
    const BruteForceResult bf = brute_force(log_derivative, max_period);
    out.brute_force_period = max_period;
    out.brute_force_best = bf.best;
    out.brute_force_agrees = std::abs(bf.best - r.m0) <= 1e-9 &&
                             std::find(bf.argmax.begin(), bf.argmax.end(), out.word) != bf.argmax.end();
  }
  return out;
}

MapFromPotential map_from_potential(const Potential& a, int resolution, double tol) {
  if (!a.subshift().is_full_shift() || a.subshift().alphabet_size() != 2)
    throw Error(Errc::InvalidArgument, "map reconstruction needs the full 2-shift");
  if (resolution < a.depth())
    throw Error(Errc::ResolutionTooCoarse, "resolution " + std::to_string(resolution) + " is below the potential depth");
  if (resolution > kMaxCodingDepth) throw Error(Errc::BudgetExceeded, "resolution exceeds 24");
  const double p = pressure(a);
  if (std::abs(p) > tol) throw Error(Errc::PressureNotZero, "pressure " + std::to_string(p) + " is not zero");

  // Eigenmeasure of k-cylinders: the right Perron vector of the transfer matrix, summing to 1.
  const int k = a.depth();
  const ThermoState st = equilibrium(a);
  std::vector<double> m(st.log_right.size());
  double total = 0.0;
  for (std::size_t v = 0; v < m.size(); ++v) total += (m[v] = std::exp(st.log_right[v]));
  for (double& x : m) x /= total;

  const int r = resolution;
  const std::size_t count = std::size_t{1} << r;
  const std::size_t kmask = (std::size_t{1} << k) - 1;
  // Vertex ids of the full 2-shift word graph equal word codes with the first symbol most significant.
  std::vector<double> masses(count);
  double sum = 0.0;
  for (std::size_t code = 0; code < count; ++code) {
    double log_mass = 0.0;
    for (int i = 0; i + k < r; ++i) log_mass += a.value(static_cast<VertexId>((code >> (r - k - i)) & kmask));
    masses[code] = std::exp(log_mass) * m[code & kmask];
    sum += masses[code];
  }
  for (double& x : masses) x /= sum;

  std::vector<double> theta(count + 1, 0.0);
  for (std::size_t j = 0; j < count; ++j) theta[j + 1] = theta[j] + masses[j];
  for (std::size_t j = 0; j <= count; ++j) theta[j] /= theta[count];
  auto lifted_theta = [&](std::size_t i) { return static_cast<double>(i / count) + theta[i % count]; };

  std::vector<std::pair<double, double>> knots(count + 1);
  std::vector<double> slopes(count);
  for (std::size_t j = 0; j <= count; ++j) knots[j] = {theta[j], lifted_theta(2 * j)};
  knots.back() = {1.0, 2.0};
  for (std::size_t j = 0; j < count; ++j) slopes[j] = std::exp(-a.value(static_cast<VertexId>(j >> (r - k))));
  MapFromPotential out{CircleMap::table(std::move(knots), std::move(slopes)), r, std::move(masses), std::move(theta)};
  return out;
}

}  // namespace ergopt
