#include "ergopt/cli.hpp"

#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "ergopt/circle.hpp"
#include "ergopt/io.hpp"
#include "ergopt/optimize.hpp"
#include "ergopt/perturb.hpp"
#include "ergopt/shadow.hpp"
#include "ergopt/thermo.hpp"

namespace ergopt::cli {

namespace {

using io::json;
namespace fs = std::filesystem;

struct Config {
  std::string potential, subshift, map, points, measures, cycle = "0";
  int depth = 0;
  int max_period = -1;
  std::vector<double> t;
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  std::string out = ".";
  double delta = 0.05, beta = 0.5, gamma = 0.75;
  std::size_t samples = 100;
  std::size_t target = 0;
};

struct Output {
  std::string file;  // relative to the output directory
  std::string text;
};

std::optional<SubshiftSpec> maybe_subshift(const Config& c) {
  if (c.subshift.empty()) return std::nullopt;
  return io::subshift_from_json(io::read_json(c.subshift));
}

Potential need_potential(const Config& c) {
  if (c.potential.empty()) throw Error(Errc::InvalidArgument, "--potential is required");
  return io::potential_from_json(io::read_json(c.potential), maybe_subshift(c));
}

CircleMap need_map(const Config& c) {
  if (c.map.empty()) throw Error(Errc::InvalidArgument, "--map is required");
  return io::map_from_json(io::read_json(c.map));
}

int depth_or(const Config& c, int fallback) { return c.depth > 0 ? c.depth : fallback; }
int period_or(const Config& c, int fallback) { return c.max_period >= 0 ? c.max_period : fallback; }

json words(const std::vector<Word>& ws) {
  json out = json::array();
  for (const auto& w : ws) out.push_back(to_string(w));
  return out;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

Output do_maximize(const Config& c) {
  const Potential a = need_potential(c);
  const MaxResult r = max_mean(a, {.tol = c.tol});
  json j = {{"m0", r.m0},
            {"depth", a.depth()},
            {"tolerance", r.tolerance},
            {"critical_cycles", words(r.critical_words)},
            {"truncated", r.truncated}};
  if (c.max_period > 0) {
    const BruteForceResult bf = brute_force(a, c.max_period);
    j["brute_force"] = {{"max_period", bf.max_period},
                        {"best", bf.best},
                        {"argmax", words(bf.argmax)},
                        {"runner_up", finite_or_null(bf.runner_up)},
                        {"orbits", bf.orbits}};
  }
  return {"maximize.json", dump(j)};
}

Output do_subaction(const Config& c) {
  const Potential a = need_potential(c);
  const MaxResult r = max_mean(a, {.tol = c.tol});
  const SubAction sa = subaction(a, r);
  const Deficiency d = deficiency(a, sa, c.tol);
  json b = json::object();
  json mather = json::array();
  double bmax = -INFINITY;
  for (std::size_t e = 0; e < d.b.size(); ++e) {
    const std::string w = to_string(d.graph->edge_word(e));
    b[w] = d.b[e];
    bmax = std::max(bmax, d.b[e]);
    if (d.mather[e]) mather.push_back(w);
  }
  bool calibrated = true;
  for (char x : sa.calibrated) calibrated = calibrated && x;
  json j = {{"m0", r.m0},
            {"subaction", io::potential_to_json(sa.v)},
            {"calibrated_everywhere", calibrated},
            {"deficiency", {{"values", b}, {"max", bmax}, {"mather_edges", mather}}}};
  return {"subaction.json", dump(j)};
}

Output do_mane(const Config& c, bool aubry_only) {
  const Potential a = need_potential(c);
  const MaxResult r = max_mean(a, {.tol = c.tol});
  const ManeTable t = mane_table(a, r, {.tol = c.tol});
  const AubrySet s = aubry_set(t, &r);
  json verts = json::array();
  for (VertexId v = 0; v < t.n; ++v) verts.push_back(to_string(t.graph->word(v)));
  json aubry = json::array();
  for (VertexId v : s.vertices) aubry.push_back(to_string(t.graph->word(v)));
  json j = {{"m0", r.m0}, {"aubry_vertices", aubry}, {"critical_cycles", words(r.critical_words)}};
  if (aubry_only) return {"aubry.json", dump(j)};
  json table = json::array();
  for (VertexId u = 0; u < t.n; ++u) {
    json row = json::array();
    for (VertexId v = 0; v < t.n; ++v) row.push_back(finite_or_null(t.at(u, v)));
    table.push_back(row);
  }
  j["vertices"] = verts;
  j["table"] = table;
  j["bound_q"] = t.bound_q;
  j["empirical_max"] = t.empirical_max;
  return {"mane.json", dump(j)};
}

Output do_shadow(const Config& c) {
  const Potential a = need_potential(c);
  PseudoOrbit po;
  if (!c.points.empty()) {
    const json pj = io::read_json(c.points);
    const json& list = pj.is_array() ? pj : pj.at("points");
    std::vector<SymbolicPoint> pts;
    for (const auto& item : list) {
      if (item.is_object()) {
        pts.push_back(SymbolicPoint::parse(item.value("preperiod", std::string{}), item.at("cycle").get<std::string>()));
        continue;
      }
      const std::string s = item.get<std::string>();
      const auto open = s.find('('), close = s.rfind(')');
      if (open == std::string::npos || close != s.size() - 1)
        throw Error(Errc::ParseError, "point \"" + s + "\" is not of the form pre(cycle)");
      pts.push_back(SymbolicPoint::parse(s.substr(0, open), s.substr(open + 1, close - open - 1)));
    }
    po = make_pseudo_orbit(a.subshift(), std::move(pts), a.metric());
  } else {
    po = random_pseudo_orbit(a.subshift(), a.metric(), 12, 3, c.delta, c.seed);
  }
  const SymbolicPoint p = shadow(po, a.subshift(), a.metric());
  const ShadowingCertificate cert = certify(po, p, a);
  json pts = json::array();
  for (const auto& x : po.points) pts.push_back(x.to_string());
  json j = {{"points", pts},
            {"jumps", po.jumps},
            {"closed", po.closed},
            {"shadow", p.to_string()},
            {"delta", cert.delta},
            {"epsilon1", cert.epsilon1},
            {"shadow_radius", cert.shadow_radius},
            {"k1", cert.k1},
            {"birkhoff_bound", cert.birkhoff_bound},
            {"measured_max_distance", cert.measured_max_distance},
            {"measured_sum_deviation", cert.measured_sum_deviation},
            {"worst_window", {cert.worst_i, cert.worst_j}},
            {"expansion_rate", cert.expansion_rate},
            {"k1_expansion_form", cert.k1_expansion_form}};
  return {"shadow.json", dump(j)};
}

std::vector<double> t_or(const Config& c, std::vector<double> fallback) { return c.t.empty() ? fallback : c.t; }

Output do_pressure(const Config& c) {
  const Potential a = need_potential(c);
  json vals = json::array();
  for (double t : t_or(c, {1.0})) vals.push_back({{"t", t}, {"pressure", pressure(a, t)}});
  return {"pressure.json", dump({{"values", vals}})};
}

Output do_equilibrium(const Config& c) {
  const Potential a = need_potential(c);
  const ThermoState s = equilibrium(a, t_or(c, {1.0}).front());
  const WordGraph& g = s.equilibrium.graph();
  json pi = json::object(), p = json::object();
  for (VertexId v = 0; v < g.vertex_count(); ++v) pi[to_string(g.word(v))] = s.equilibrium.stationary()[v];
  for (std::size_t e = 0; e < g.edge_count(); ++e) p[to_string(g.edge_word(e))] = s.equilibrium.transition()[e];
  json j = {{"t", s.t},
            {"pressure", s.pressure},
            {"entropy", s.entropy},
            {"energy", s.energy},
            {"variational_residual", s.variational_residual},
            {"stationary", pi},
            {"transition", p}};
  return {"equilibrium.json", dump(j)};
}

Output do_zerotemp(const Config& c) {
  const Potential a = need_potential(c);
  const ZeroTempScan scan = zero_temp_scan(a, t_or(c, {1, 2, 4, 8, 16}));
  std::ostringstream csv;
  csv << "t,pressure,entropy,energy,distance_to_candidate\n";
  for (std::size_t i = 0; i < scan.states.size(); ++i) {
    const ThermoState& s = scan.states[i];
    csv << io::format_number(s.t) << ',' << io::format_number(s.pressure) << ',' << io::format_number(s.entropy)
        << ',' << io::format_number(s.energy) << ',' << io::format_number(scan.distances[i]) << '\n';
  }
  return {"zerotemp.csv", csv.str()};
}

Output do_circle_encode(const Config& c) {
  const CircleMap f = need_map(c);
  const int depth = depth_or(c, 6);
  const MapPotential m = potential_from_map(f, depth);
  const CodingTable table = coding_table(f, depth);
  json j = {{"potential", io::potential_to_json(m.potential)},
            {"tail_bound", m.tail_bound},
            {"pressure", m.pressure},
            {"pressure_ok", m.pressure_ok},
            {"holder_estimate", m.holder_estimate},
            {"finite_difference", m.finite_difference},
            {"tree_residual", table.tree_residual(f)},
            {"order_preserved", table.order_preserved()}};
  return {"circle-encode.json", dump(j)};
}

Output do_circle_decode(const Config& c) {
  const Potential a = need_potential(c);
  const MapFromPotential m = map_from_potential(a, depth_or(c, 12), c.tol);
  json j = io::map_to_json(m.map);
  j["resolution"] = m.resolution;
  return {"circle-decode.json", dump(j)};
}

std::vector<Output> do_lyapmax(const Config& c) {
  const CircleMap f = need_map(c);
  const CircleOrbit o = lyapunov_maximize(f, depth_or(c, 8), period_or(c, 10));
  std::ostringstream csv;
  csv << "index,x,log_derivative\n";
  for (std::size_t i = 0; i < o.points.size(); ++i)
    csv << i << ',' << io::format_number(o.points[i]) << ',' << io::format_number(std::log(f.derivative(o.points[i])))
        << '\n';
  json j = {{"word", to_string(o.word)},
            {"points", o.points},
            {"exponent", o.exponent},
            {"discretized_mean", o.discretized_mean},
            {"ambiguous", o.ambiguous},
            {"critical_words", words(o.critical_words)},
            {"brute_force", {{"max_period", o.brute_force_period},
                             {"best", o.brute_force_best},
                             {"agrees", o.brute_force_agrees}}}};
  return {{"lyapmax.csv", csv.str()}, {"lyapmax.json", dump(j)}};
}

Output do_lock_orbit(const Config& c) {
  const Potential a = need_potential(c);
  PerturbationParams params{c.delta, c.beta, c.gamma, period_or(c, 12)};
  const LockResult r = lock_orbit(a, parse_word(c.cycle), params);
  const LockCertificate& k = r.certificate;
  json j = {{"cycle", to_string(k.cycle)},
            {"depth", k.depth},
            {"delta", k.delta},
            {"beta", k.beta},
            {"gamma", k.gamma},
            {"eta", k.eta},
            {"k1", k.k1},
            {"q", k.q},
            {"separation", k.separation},
            {"pressure_shift", k.shift},
            {"phi_sup", k.phi_sup},
            {"psi_sup", k.psi_sup},
            {"psi_holder_beta", k.psi_holder},
            {"bound_sup_4q_delta_gamma", k.bound_sup},
            {"bound_sup_two_phi", k.bound_two_phi},
            {"bound_holder_4q_delta_gamma_minus_beta", k.bound_holder},
            {"orbit_level", k.orbit_level},
            {"orbit_residual", k.orbit_residual},
            {"orbit_strict", k.orbit_strict},
            {"best", k.best},
            {"runner_up", finite_or_null(k.runner_up)},
            {"gap", finite_or_null(k.gap)},
            {"bounds_hold", k.bounds_hold},
            {"psi", io::potential_to_json(r.psi)}};
  return {"lock-orbit.json", dump(j)};
}

Output do_separate(const Config& c) {
  if (c.measures.empty()) throw Error(Errc::InvalidArgument, "--measures is required");
  const json mj = io::read_json(c.measures);
  const SubshiftSpec spec = maybe_subshift(c).value_or(SubshiftSpec::full_shift(2));
  std::vector<InvariantMeasure> ms;
  for (const auto& item : mj.at("cycles")) ms.push_back(orbit_measure(spec, parse_word(item.get<std::string>())));
  const std::size_t target = mj.contains("target") ? mj.at("target").get<std::size_t>() : c.target;
  const auto graph = std::make_shared<const WordGraph>(spec, depth_or(c, 2));
  std::vector<Potential> tests;
  for (VertexId v = 0; v < graph->vertex_count(); ++v) {
    std::vector<double> ind(graph->vertex_count(), 0.0);
    ind[v] = 1.0;
    tests.emplace_back(graph, std::move(ind));
  }
  const SeparatingFunctional s = separating_functional(ms, tests, target);
  json coef = json::object();
  for (VertexId v = 0; v < graph->vertex_count(); ++v) coef[to_string(graph->word(v))] = s.coefficients[v];
  json j = {{"target", s.target},
            {"coefficients", coef},
            {"values", s.values},
            {"margin", s.margin},
            {"test_family", "finite: cylinder indicators at the given depth"}};
  return {"separate.json", dump(j)};
}

Output do_genericity(const Config& c) {
  const SubshiftSpec spec = maybe_subshift(c).value_or(SubshiftSpec::full_shift(2));
  const GenericityStats st = genericity_experiment(spec, depth_or(c, 2), c.samples, period_or(c, 12), c.seed);
  std::ostringstream csv;
  csv << "sample_id,m0,unique_flag,period,gap\n";
  for (const auto& s : st.samples)
    csv << s.id << ',' << io::format_number(s.m0) << ',' << (s.unique ? 1 : 0) << ',' << s.period << ','
        << io::format_number(s.gap) << '\n';
  return {"genericity.csv", csv.str()};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Ergodic optimization on subshifts of finite type", "ergopt"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  std::map<std::string, std::function<std::vector<Output>()>> handlers;
  auto one = [](auto f) { return [f] { return std::vector<Output>{f()}; }; };
  auto add = [&](const std::string& name, const std::string& help, std::function<std::vector<Output>()> h) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--potential", c.potential, "potential JSON file");
    s->add_option("--subshift", c.subshift, "subshift JSON file");
    s->add_option("--map", c.map, "circle map JSON file");
    s->add_option("--points", c.points, "pseudo-orbit JSON file: [{\"preperiod\": w, \"cycle\": w}, ...]");
    s->add_option("--measures", c.measures, "periodic measures JSON file {\"cycles\": [...], \"target\": i}");
    s->add_option("--cycle", c.cycle, "cycle word to lock");
    s->add_option("--depth", c.depth, "depth or resolution")->check(CLI::Range(1, 24));
    s->add_option("--max-period", c.max_period, "brute-force period cap")->check(CLI::Range(0, 26));
    s->add_option("--t", c.t, "inverse temperatures, comma separated")->delimiter(',');
    s->add_option("--tol", c.tol, "tolerance")->check(CLI::PositiveNumber);
    s->add_option("--seed", c.seed, "random seed");
    s->add_option("--out", c.out, "output directory");
    s->add_option("--delta", c.delta, "bump radius or jump size");
    s->add_option("--beta", c.beta, "bump Holder exponent");
    s->add_option("--gamma", c.gamma, "bump size exponent");
    s->add_option("--samples", c.samples, "genericity sample count");
    s->add_option("--target", c.target, "target measure index");
    handlers[name] = std::move(h);
  };
  add("maximize", "maximal ergodic average and critical cycles", one([&] { return do_maximize(c); }));
  add("subaction", "calibrated sub-action and deficiency", one([&] { return do_subaction(c); }));
  add("mane", "Mane potential table", one([&] { return do_mane(c, false); }));
  add("aubry", "Aubry set vertices", one([&] { return do_mane(c, true); }));
  add("shadow", "shadow a pseudo-orbit and certify the bounds", one([&] { return do_shadow(c); }));
  add("pressure", "topological pressure of tA", one([&] { return do_pressure(c); }));
  add("equilibrium", "equilibrium state of tA", one([&] { return do_equilibrium(c); }));
  add("zerotemp", "zero-temperature scan", one([&] { return do_zerotemp(c); }));
  add("circle-encode", "potential -log f' of a circle map", one([&] { return do_circle_encode(c); }));
  add("circle-decode", "circle map of a zero-pressure potential", one([&] { return do_circle_decode(c); }));
  add("lyapmax", "Lyapunov-maximizing periodic orbit", [&] { return do_lyapmax(c); });
  add("lock-orbit", "perturbation locking a periodic orbit", one([&] { return do_lock_orbit(c); }));
  add("separate", "separating functional over periodic measures", one([&] { return do_separate(c); }));
  add("genericity", "random potential experiment", one([&] { return do_genericity(c); }));

  std::vector<std::string> argv_store = {"ergopt"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const std::vector<Output> outputs = handlers.at(name)();
    for (const auto& o : outputs) io::write_text(fs::path(c.out) / o.file, o.text);
    for (const auto& o : outputs) out << (fs::path(c.out) / o.file).string() << '\n';
    return 0;
  } catch (const Error& e) {
    err << "ergopt " << name << ": " << e.what() << '\n';
    return is_validation_error(e.code()) ? 1 : 2;
  } catch (const io::json::exception& e) {
    err << "ergopt " << name << ": ParseError: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "ergopt " << name << ": " << e.what() << '\n';
    return 2;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace ergopt::cli
