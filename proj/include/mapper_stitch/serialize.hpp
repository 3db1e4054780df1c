/**
 * JSON schema for matrix specs and results. `dump_result` is the single
 * writer used by both the CLI and the HTTP service.
 */
#ifndef MAPPER_STITCH_SERIALIZE_HPP
#define MAPPER_STITCH_SERIALIZE_HPP

#include <string>

#include <json.hpp>

#include "mapper_stitch/matrix.hpp"

namespace mapper_stitch {

using json = nlohmann::ordered_json;

inline constexpr const char* schema_version = "1.0";

namespace detail {

template <typename T>
std::vector<T> scalar_or_array(const json& j, const char* key) {
  if (!j.contains(key)) throw SpecError(std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

}  // namespace detail

inline json to_json(const DatasetRef& d) {
  if (d.shape) return {{"shape", shape_name(*d.shape)}, {"points", d.n_points}, {"noise", d.noise}};
  return {{"name", d.name}};
}

inline DatasetRef dataset_from_json(const json& j) {
  DatasetRef d;
  if (j.is_string()) {
    d.name = j.get<std::string>();
    return d;
  }
  if (!j.is_object()) throw SpecError("dataset must be a name or an object");
  if (j.contains("shape")) {
    d.shape = parse_shape(j.at("shape").get<std::string>());
    d.n_points = j.value("points", d.n_points);
    d.noise = j.value("noise", d.noise);
  } else {
    d.name = j.at("name").get<std::string>();
  }
  return d;
}

inline json to_json(const MatrixSpec& s) {
  json j;
  j["dataset"] = to_json(s.dataset);
  j["variables"] = s.variables;
  j["intervals"] = s.intervals;
  j["overlap"] = s.overlap;
  j["epsilon"] = s.epsilon ? json(*s.epsilon) : json(nullptr);
  j["measure"] = to_string(s.measure);
  j["restriction"] = to_string(s.restriction);
  j["max_dim"] = s.max_dim;
  j["seed"] = s.seed;
  j["verify"] = s.verify;
  j["include_members"] = s.include_members;
  return j;
}

/// Parses and validates a spec; malformed JSON and bad values raise SpecError.
inline MatrixSpec spec_from_json(const json& j) {
  try {
    if (!j.is_object()) throw SpecError("spec must be a JSON object");
    MatrixSpec s;
    if (!j.contains("dataset")) throw SpecError("missing field 'dataset'");
    s.dataset = dataset_from_json(j.at("dataset"));
    if (!j.contains("variables")) throw SpecError("missing field 'variables'");
    s.variables = j.at("variables").get<std::vector<std::string>>();
    s.intervals = j.contains("intervals") ? detail::scalar_or_array<std::size_t>(j, "intervals")
                                          : std::vector<std::size_t>{5};
    s.overlap = j.contains("overlap") ? detail::scalar_or_array<double>(j, "overlap") : std::vector<double>{0.2};
    if (j.contains("epsilon") && !j.at("epsilon").is_null()) s.epsilon = j.at("epsilon").get<double>();
    if (j.contains("measure")) s.measure = parse_measure(j.at("measure").get<std::string>());
    if (j.contains("restriction")) s.restriction = parse_restriction(j.at("restriction").get<std::string>());
    s.max_dim = j.value("max_dim", s.max_dim);
    s.seed = j.value("seed", s.seed);
    s.verify = j.value("verify", s.verify);
    s.include_members = j.value("include_members", s.include_members);
    validate(s);
    return s;
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed spec: ") + e.what());
  }
}

inline MatrixSpec spec_from_string(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw SpecError("spec is not valid JSON");
  return spec_from_json(j);
}

inline json to_json(const CompositionTrace& t) {
  json j;
  j["intervals"] = json::array();
  for (const auto& it : t.intervals)
    j["intervals"].push_back({{"interval", it.interval},
                              {"replaced_vertices", it.replaced_vertices},
                              {"composed_elements", it.composed_elements},
                              {"stitch_simplices", it.stitch_simplices},
                              {"fix_simplices", it.fix_simplices}});
  j["complete_rounds"] = t.complete_rounds;
  j["checks_performed"] = t.checks_performed;
  j["checks_avoided"] = t.checks_avoided;
  j["naive_candidates"] = t.naive_candidates;
  j["dimension_after_fix_stage"] = t.dimension_after_fix_stage;
  json phases = json::array();
  for (const auto& [s, phase] : t.provenance)
    if (s.size() >= 2) phases.push_back({{"simplex", s}, {"phase", phase_name(phase)}});
  j["provenance"] = std::move(phases);
  return j;
}

inline json to_json(const MatrixCell& c) {
  json nodes = json::array();
  for (const auto& n : c.graph.nodes) {
    json node = {{"id", n.id}, {"interval", n.interval}, {"size", n.size}};
    if (!n.members.empty()) node["members"] = n.members;
    nodes.push_back(std::move(node));
  }
  json edges = json::array();
  for (auto [a, b] : c.graph.edges) edges.push_back({a, b});
  json j;
  j["row"] = c.row;
  j["col"] = c.col;
  j["graph"] = {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}, {"simplices", c.graph.simplices}};
  j["vectors"] = {{"base", c.base}, {"stitched", c.stitched}, {"diff", c.diff}};
  j["global"] = {{"base", c.global_base}, {"stitched", c.global_stitched}, {"diff", c.global_diff}};
  if (c.verified) j["verified"] = *c.verified;
  if (!c.verification_report.empty()) j["verification_report"] = c.verification_report;
  if (c.trace) j["trace"] = to_json(*c.trace);
  return j;
}

inline json to_json(const MatrixResult& r) {
  json j;
  j["version"] = schema_version;
  j["spec"] = to_json(r.spec);
  j["point_count"] = r.point_count;
  j["epsilon"] = r.epsilon;
  j["cells"] = json::array();
  for (const auto& c : r.cells) j["cells"].push_back(to_json(c));
  return j;
}

/// Reads back the fields written by to_json; traces are not restored.
inline MatrixResult result_from_json(const json& j) {
  if (!j.contains("version")) throw DataError("result has no version");
  const std::string version = j.at("version").get<std::string>();
  if (version.substr(0, version.find('.')) != "1") throw DataError("unsupported result version " + version);
  MatrixResult r;
  r.spec = spec_from_json(j.at("spec"));
  r.point_count = j.at("point_count").get<std::size_t>();
  r.epsilon = j.at("epsilon").get<double>();
  for (const auto& jc : j.at("cells")) {
    MatrixCell c;
    c.row = jc.at("row").get<std::size_t>();
    c.col = jc.at("col").get<std::size_t>();
    for (const auto& jn : jc.at("graph").at("nodes")) {
      NodeView n;
      n.id = jn.at("id").get<VertexIndex>();
      n.interval = jn.at("interval").get<int>();
      n.size = jn.at("size").get<std::size_t>();
      if (jn.contains("members")) n.members = jn.at("members").get<std::vector<PointIndex>>();
      c.graph.nodes.push_back(std::move(n));
    }
    for (const auto& e : jc.at("graph").at("edges"))
      c.graph.edges.emplace_back(e.at(0).get<VertexIndex>(), e.at(1).get<VertexIndex>());
    c.graph.simplices = jc.at("graph").at("simplices").get<std::vector<Simplex>>();
    c.base = jc.at("vectors").at("base").get<std::vector<double>>();
    c.stitched = jc.at("vectors").at("stitched").get<std::vector<double>>();
    c.diff = jc.at("vectors").at("diff").get<std::vector<double>>();
    c.global_base = jc.at("global").at("base").get<double>();
    c.global_stitched = jc.at("global").at("stitched").get<double>();
    c.global_diff = jc.at("global").at("diff").get<double>();
    if (jc.contains("verified")) c.verified = jc.at("verified").get<bool>();
    c.verification_report = jc.value("verification_report", std::string{});
    r.cells.push_back(std::move(c));
  }
  return r;
}

inline std::string dump_result(const MatrixResult& r) { return to_json(r).dump(2) + "\n"; }

}  // namespace mapper_stitch

#endif
