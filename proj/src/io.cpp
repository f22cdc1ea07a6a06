#include "ergopt/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ergopt::io {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidArgument, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, path.string() + ": " + e.what());
  }
}

namespace {

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(Errc::ParseError, std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("field \"") + key + "\": " + e.what());
  }
}

MetricParams metric_from_json(const json& j) {
  MetricParams m;
  if (j.contains("lambda")) m.lambda = field<double>(j, "lambda");
  if (j.contains("alpha")) m.alpha = field<double>(j, "alpha");
  return m;
}

}  // namespace

SubshiftSpec subshift_from_json(const json& j) {
  const int n = field<int>(j, "alphabet");
  const auto t = field<std::vector<std::vector<int>>>(j, "transitions");
  return SubshiftSpec(n, t);
}

json subshift_to_json(const SubshiftSpec& spec) {
  return {{"alphabet", spec.alphabet_size()}, {"transitions", spec.transitions()}};
}

Potential potential_from_json(const json& j, const std::optional<SubshiftSpec>& spec) {
  const int depth = field<int>(j, "depth");
  const auto values = field<std::map<std::string, double>>(j, "values");
  const MetricParams metric = metric_from_json(j);
  if (j.contains("subshift")) return Potential::from_words(subshift_from_json(j.at("subshift")), depth, values, metric);
  if (spec) return Potential::from_words(*spec, depth, values, metric);
  int alphabet = 2;
  for (const auto& [word, v] : values)
    for (Symbol s : parse_word(word)) alphabet = std::max(alphabet, static_cast<int>(s) + 1);
  return Potential::from_words(SubshiftSpec::full_shift(alphabet), depth, values, metric);
}

json potential_to_json(const Potential& a) {
  json values = json::object();
  for (VertexId v = 0; v < a.graph().vertex_count(); ++v) values[to_string(a.graph().word(v))] = a.value(v);
  return {{"depth", a.depth()},
          {"values", values},
          {"lambda", a.metric().lambda},
          {"alpha", a.metric().alpha},
          {"subshift", subshift_to_json(a.subshift())}};
}

CircleMap map_from_json(const json& j) {
  const auto kind = field<std::string>(j, "kind");
  if (kind == "builtin") {
    const auto name = field<std::string>(j, "name");
    if (name == "doubling") return CircleMap::doubling();
    if (name == "perturbed_doubling") return CircleMap::perturbed_doubling(field<double>(j, "epsilon"));
    throw Error(Errc::ParseError, "unknown builtin map \"" + name + "\"");
  }
  if (kind == "table") {
    auto knots = field<std::vector<std::pair<double, double>>>(j, "knots");
    std::vector<double> slopes;
    if (j.contains("slopes")) slopes = field<std::vector<double>>(j, "slopes");
    return CircleMap::table(std::move(knots), std::move(slopes));
  }
  throw Error(Errc::ParseError, "unknown map kind \"" + kind + "\"");
}

json map_to_json(const CircleMap& f) {
  if (!f.is_table()) throw Error(Errc::InvalidArgument, "only table maps serialize");
  json knots = json::array();
  for (const auto& [x, y] : f.knots()) knots.push_back({x, y});
  json out = {{"kind", "table"}, {"knots", knots}};
  if (!f.slopes().empty()) out["slopes"] = f.slopes();
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::InvalidArgument, "cannot write " + path.string());
  out << text;
}

}  // namespace ergopt::io
