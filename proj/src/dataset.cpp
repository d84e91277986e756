#include "rlvr/dataset.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

namespace rlvr {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw DataError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw DataError(std::string("missing field '") + key + "'");
  return *it;
}

template <typename T>
T get(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const Json::exception& e) {
    throw DataError(std::string("field '") + key + "': " + e.what());
  }
}

std::vector<int> int_list(const Json& j) {
  if (!j.is_array()) throw DataError("expected a list of integers");
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw DataError("expected a list of integers");
    out.push_back(v.get<int>());
  }
  return out;
}

std::int64_t halves_of(const Json& v) {
  if (!v.is_number()) throw DataError("coordinate must be a number");
  const double twice = v.get<double>() * 2.0;
  if (std::nearbyint(twice) != twice || std::abs(twice) > 1e12) throw DataError("coordinate must be a multiple of 0.5");
  return static_cast<std::int64_t>(twice);
}

Json half_pair(spatial::HalfPoint p) {
  return Json::array({static_cast<double>(p.x2) / 2.0, static_cast<double>(p.y2) / 2.0});
}

spatial::HalfPoint half_pair_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw DataError("expected an [x, y] pair");
  return {halves_of(j[0]), halves_of(j[1])};
}

// --- counting --------------------------------------------------------------

Json counting_to_json(const counting::CountingSpec& spec) {
  Json pipeline = Json::array();
  for (const auto& step : spec.pipeline) {
    Json s = {{"op", counting::to_string(step.kind)}};
    if (counting::step_has_param(step.kind)) s["param"] = step.param;
    pipeline.push_back(s);
  }
  Json final_op = {{"op", counting::to_string(spec.final_op.kind)}};
  if (spec.final_op.has_param()) final_op["param"] = spec.final_op.param;
  return {{"kind", "counting"},
          {"range", Json::array({spec.range_lo, spec.range_hi})},
          {"pipeline", pipeline},
          {"final", final_op}};
}

counting::CountingSpec counting_from_json(const Json& j) {
  counting::CountingSpec spec;
  const auto& range = field(j, "range");
  if (!range.is_array() || range.size() != 2 || !range[0].is_number_integer() || !range[1].is_number_integer()) {
    throw DataError("counting range must be [lo, hi]");
  }
  spec.range_lo = range[0].get<std::int64_t>();
  spec.range_hi = range[1].get<std::int64_t>();
  const auto& pipeline = field(j, "pipeline");
  if (!pipeline.is_array()) throw DataError("pipeline must be a list");
  for (const auto& s : pipeline) {
    counting::PipelineStep step;
    step.kind = counting::parse_step_kind(get<std::string>(s, "op"));
    if (counting::step_has_param(step.kind)) step.param = get<std::int64_t>(s, "param");
    spec.pipeline.push_back(step);
  }
  const auto& final_op = field(j, "final");
  spec.final_op.kind = counting::parse_aggregate_kind(get<std::string>(final_op, "op"));
  if (spec.final_op.has_param()) spec.final_op.param = get<std::int64_t>(final_op, "param");
  return spec;
}

// --- graph -----------------------------------------------------------------

Json graph_to_json(const graph::GraphProblem& p) {
  Json nodes = Json::array();
  for (int v = 0; v < p.n_nodes; ++v) nodes.push_back(v);
  Json edges = Json::array();
  Json weights = Json::array();
  for (const auto& e : p.edges) {
    edges.push_back(Json::array({e.u, e.v}));
    weights.push_back(e.weight);
  }
  Json j = {{"kind", "graph"}, {"nodes", nodes}, {"edges", edges}, {"directed", p.directed}};
  if (p.weighted) j["weights"] = weights;
  j["operator"] = graph::to_string(p.op.kind);
  if (p.op.kind == graph::OperatorKind::DensestKSubgraph) j["k"] = p.op.k;
  return j;
}

graph::GraphProblem graph_from_json(const Json& j) {
  graph::GraphProblem p;
  const auto nodes = int_list(field(j, "nodes"));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] != static_cast<int>(i)) throw DataError("graph nodes must be listed as 0..n-1");
  }
  p.n_nodes = static_cast<int>(nodes.size());
  p.directed = get<bool>(j, "directed");
  const auto& edges = field(j, "edges");
  if (!edges.is_array()) throw DataError("edges must be a list");
  for (const auto& e : edges) {
    const auto pair = int_list(e);
    if (pair.size() != 2) throw DataError("each edge must be [u, v]");
    p.edges.push_back(graph::Edge{pair[0], pair[1], 1});
  }
  if (auto it = j.find("weights"); it != j.end()) {
    const auto weights = int_list(*it);
    if (weights.size() != p.edges.size()) throw DataError("weights must align with edges");
    p.weighted = true;
    for (std::size_t i = 0; i < weights.size(); ++i) p.edges[i].weight = weights[i];
  }
  p.op.kind = graph::parse_operator_kind(get<std::string>(j, "operator"));
  if (auto it = j.find("k"); it != j.end()) {
    if (!it->is_number_integer()) throw DataError("k must be an integer");
    p.op.k = it->get<int>();
  }
  return p;
}

// --- spatial ---------------------------------------------------------------

Json spatial_to_json(const spatial::SpatialProblem& p) {
  Json particles = Json::array();
  for (const auto& q : p.particles) {
    particles.push_back(
        {{"id", q.id}, {"position", half_pair(q.position)}, {"orientation", spatial::to_string(q.orientation)}});
  }
  Json actions = Json::array();
  for (const auto& action : p.actions) {
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, spatial::ParticleMove>) {
            actions.push_back({{"type", "move"},
                               {"particle", a.id},
                               {"direction", a.direction == spatial::MoveDirection::Forward ? "forward" : "backward"},
                               {"steps", a.steps}});
          } else if constexpr (std::is_same_v<T, spatial::ParticleTurn>) {
            const char* turn = a.turn == spatial::Turn::Left ? "left" : a.turn == spatial::Turn::Right ? "right" : "around";
            actions.push_back({{"type", "turn"}, {"particle", a.id}, {"turn", turn}});
          } else if constexpr (std::is_same_v<T, spatial::BoardTranslate>) {
            actions.push_back({{"type", "translate"}, {"dx", a.dx}, {"dy", a.dy}});
          } else {
            actions.push_back({{"type", "rotate"}, {"quarter_turns", a.quarter_turns}});
          }
        },
        action);
  }
  Json query = {{"kind", to_string(p.query.kind)}, {"a", p.query.a}};
  if (!p.query.b.empty()) query["b"] = p.query.b;
  return {{"kind", "spatial"},
          {"board",
           {{"size", p.board.size},
            {"center", half_pair(p.board.center)},
            {"orientation", spatial::to_string(p.board.orientation)}}},
          {"particles", particles},
          {"actions", actions},
          {"query", query}};
}

spatial::SpatialProblem spatial_from_json(const Json& j) {
  spatial::SpatialProblem p;
  const auto& board = field(j, "board");
  p.board.size = get<int>(board, "size");
  p.board.center = half_pair_from(field(board, "center"));
  p.board.orientation = spatial::parse_cardinal(get<std::string>(board, "orientation"));
  const auto& particles = field(j, "particles");
  if (!particles.is_array()) throw DataError("particles must be a list");
  for (const auto& q : particles) {
    p.particles.push_back(spatial::Particle{get<std::string>(q, "id"), half_pair_from(field(q, "position")),
                                            spatial::parse_cardinal(get<std::string>(q, "orientation"))});
  }
  const auto& actions = field(j, "actions");
  if (!actions.is_array()) throw DataError("actions must be a list");
  for (const auto& a : actions) {
    const auto type = get<std::string>(a, "type");
    if (type == "move") {
      const auto dir = get<std::string>(a, "direction");
      if (dir != "forward" && dir != "backward") throw DataError("move direction must be forward or backward");
      p.actions.emplace_back(spatial::ParticleMove{
          get<std::string>(a, "particle"),
          dir == "forward" ? spatial::MoveDirection::Forward : spatial::MoveDirection::Backward, get<int>(a, "steps")});
    } else if (type == "turn") {
      const auto turn = get<std::string>(a, "turn");
      spatial::Turn t;
      if (turn == "left") {
        t = spatial::Turn::Left;
      } else if (turn == "right") {
        t = spatial::Turn::Right;
      } else if (turn == "around") {
        t = spatial::Turn::Around;
      } else {
        throw DataError("turn must be left, right or around");
      }
      p.actions.emplace_back(spatial::ParticleTurn{get<std::string>(a, "particle"), t});
    } else if (type == "translate") {
      p.actions.emplace_back(spatial::BoardTranslate{get<int>(a, "dx"), get<int>(a, "dy")});
    } else if (type == "rotate") {
      p.actions.emplace_back(spatial::BoardRotate{get<int>(a, "quarter_turns")});
    } else {
      throw DataError("unknown action type '" + type + "'");
    }
  }
  const auto& query = field(j, "query");
  p.query.kind = parse_query_kind(get<std::string>(query, "kind"));
  p.query.a = get<std::string>(query, "a");
  if (query.contains("b")) p.query.b = get<std::string>(query, "b");
  return p;
}

}  // namespace

// --- ground truth ----------------------------------------------------------

Json to_json(const GroundTruth& truth) {
  Json j = {{"kind", truth_kind(truth)}};
  std::visit(
      [&](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, IntScalar>) {
          j["value"] = t.value;
        } else if constexpr (std::is_same_v<T, RealScalar>) {
          j["value"] = t.value;
          j["precision"] = t.precision;
        } else if constexpr (std::is_same_v<T, VertexSet> || std::is_same_v<T, NodeSequence>) {
          j["nodes"] = t.nodes;
        } else if constexpr (std::is_same_v<T, EdgeSet>) {
          Json edges = Json::array();
          for (const auto& [u, v] : t.edges) edges.push_back(Json::array({u, v}));
          j["edges"] = edges;
        } else if constexpr (std::is_same_v<T, Partition>) {
          j["first"] = t.first;
          j["second"] = t.second;
        } else if constexpr (std::is_same_v<T, Coordinate>) {
          j["x"] = t.x;
          j["y"] = t.y;
        } else {
          j["token"] = t.token;
        }
      },
      truth);
  return j;
}

GroundTruth truth_from_json(const Json& j) {
  const auto kind = get<std::string>(j, "kind");
  if (kind == "int") return IntScalar{get<std::int64_t>(j, "value")};
  if (kind == "real") return RealScalar{get<double>(j, "value"), get<int>(j, "precision")};
  if (kind == "vertex_set") return VertexSet{int_list(field(j, "nodes"))};
  if (kind == "node_sequence") return NodeSequence{int_list(field(j, "nodes"))};
  if (kind == "edge_set") {
    EdgeSet set;
    const auto& edges = field(j, "edges");
    if (!edges.is_array()) throw DataError("edges must be a list");
    for (const auto& e : edges) {
      const auto pair = int_list(e);
      if (pair.size() != 2) throw DataError("each edge must be [u, v]");
      set.edges.emplace_back(pair[0], pair[1]);
    }
    return set;
  }
  if (kind == "partition") return Partition{int_list(field(j, "first")), int_list(field(j, "second"))};
  if (kind == "coordinate") return Coordinate{get<double>(j, "x"), get<double>(j, "y")};
  if (kind == "orientation") return Orientation{get<std::string>(j, "token")};
  if (kind == "relative_orientation") return RelativeOrientation{get<std::string>(j, "token")};
  throw DataError("unknown truth kind '" + kind + "'");
}

// --- spec ------------------------------------------------------------------

Json to_json(const ProblemSpec& spec) {
  if (const auto* c = std::get_if<counting::CountingSpec>(&spec)) return counting_to_json(*c);
  if (const auto* g = std::get_if<graph::GraphProblem>(&spec)) return graph_to_json(*g);
  return spatial_to_json(std::get<spatial::SpatialProblem>(spec));
}

ProblemSpec spec_from_json(const Json& j) {
  const auto kind = get<std::string>(j, "kind");
  if (kind == "counting") return counting_from_json(j);
  if (kind == "graph") return graph_from_json(j);
  if (kind == "spatial") return spatial_from_json(j);
  throw DataError("unknown spec kind '" + kind + "'");
}

// --- complexity ------------------------------------------------------------

Json to_json(const ComplexityMeta& meta) {
  if (const auto* c = std::get_if<CountingComplexity>(&meta)) {
    return {{"range_scale", c->range_scale},
            {"n_filters", c->n_filters},
            {"n_transforms", c->n_transforms},
            {"total_steps", c->total_steps}};
  }
  if (const auto* g = std::get_if<GraphComplexity>(&meta)) {
    return {{"n_nodes", g->n_nodes}, {"n_edges", g->n_edges}, {"directed", g->directed}, {"weighted", g->weighted}};
  }
  const auto& s = std::get<SpatialComplexity>(meta);
  return {{"n_actions", s.n_actions}, {"query_kind", to_string(s.query_kind)}};
}

ComplexityMeta complexity_from_json(const Json& j, TaskFamily family) {
  switch (family) {
    case TaskFamily::Counting:
      return CountingComplexity{get<int>(j, "range_scale"), get<int>(j, "n_filters"), get<int>(j, "n_transforms"),
                                get<int>(j, "total_steps")};
    case TaskFamily::Graph:
      return GraphComplexity{get<int>(j, "n_nodes"), get<int>(j, "n_edges"), get<bool>(j, "directed"),
                             get<bool>(j, "weighted")};
    case TaskFamily::Spatial:
      return SpatialComplexity{get<int>(j, "n_actions"), parse_query_kind(get<std::string>(j, "query_kind"))};
  }
  throw DataError("unknown family");
}

// --- instances -------------------------------------------------------------

Json to_json(const ProblemInstance& instance, bool include_truth) {
  Json j = Json::object();
  j["schema_version"] = kSchemaVersion;
  j["id"] = instance.id;
  j["family"] = to_string(instance.family);
  j["prompt"] = instance.prompt;
  j["spec"] = to_json(instance.spec);
  if (include_truth) j["truth"] = to_json(instance.truth);
  j["complexity"] = to_json(instance.complexity);
  j["seed"] = instance.seed;
  return j;
}

ProblemInstance instance_from_json(const Json& j) {
  const auto version = get<int>(j, "schema_version");
  if (version != kSchemaVersion) {
    throw DataError("schema_version " + std::to_string(version) + " is not supported (expected " +
                    std::to_string(kSchemaVersion) + ")");
  }
  ProblemInstance instance;
  instance.id = get<std::string>(j, "id");
  instance.family = parse_task_family(get<std::string>(j, "family"));
  instance.prompt = get<std::string>(j, "prompt");
  instance.spec = spec_from_json(field(j, "spec"));
  instance.truth = truth_from_json(field(j, "truth"));
  instance.complexity = complexity_from_json(field(j, "complexity"), instance.family);
  instance.seed = get<std::uint64_t>(j, "seed");
  return instance;
}

std::size_t write_dataset(const std::vector<ProblemInstance>& instances, std::ostream& out) {
  std::unordered_set<std::string> ids;
  for (const auto& instance : instances) {
    if (!ids.insert(instance.id).second) throw DataError("duplicate problem id '" + instance.id + "'");
  }
  for (const auto& instance : instances) out << to_json(instance).dump() << '\n';
  if (!out) throw IoError("failed to write dataset");
  return instances.size();
}

std::size_t write_dataset(const std::vector<ProblemInstance>& instances, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return write_dataset(instances, out);
}

std::vector<ProblemInstance> read_dataset(std::istream& in, const ReadOptions& options) {
  std::vector<ProblemInstance> out;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      Json j = Json::parse(line);
      ProblemInstance instance = instance_from_json(j);
      validate_instance(instance, options.resolve_truth);
      if (!ids.insert(instance.id).second) throw DataError("duplicate problem id '" + instance.id + "'");
      out.push_back(std::move(instance));
    } catch (const std::exception& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<ProblemInstance> read_dataset(const std::filesystem::path& path, const ReadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_dataset(in, options);
}

}  // namespace rlvr
