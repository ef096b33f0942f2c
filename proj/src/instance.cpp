#include "ecaopt/instance.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "ecaopt/errors.hpp"

namespace ecaopt {

using nlohmann::json;

void Instance::finalize() {
  vertex_by_id_.clear();
  arc_by_id_.clear();
  option_by_id_.clear();

  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Vertex& v = vertices[i];
    if (v.id.empty()) throw ValidationError("vertex " + std::to_string(i) + " has an empty id");
    if (!vertex_by_id_.emplace(v.id, static_cast<int>(i)).second)
      throw ValidationError("duplicate vertex id '" + v.id + "'");
    if (!(v.weight >= 0.0))
      throw ValidationError("vertex '" + v.id + "': weight must be >= 0");
    if (v.improvement) {
      if (!(v.improvement->weight >= v.weight))
        throw ValidationError("vertex '" + v.id + "': improved weight must be >= base weight");
      if (!(v.improvement->cost > 0.0))
        throw ValidationError("vertex '" + v.id + "': improvement cost must be > 0");
    }
  }

  out_.assign(vertices.size(), {});
  in_.assign(vertices.size(), {});
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const Arc& a = arcs[i];
    if (a.id.empty()) throw ValidationError("arc " + std::to_string(i) + " has an empty id");
    if (!arc_by_id_.emplace(a.id, static_cast<int>(i)).second)
      throw ValidationError("duplicate arc id '" + a.id + "'");
    if (a.source < 0 || a.source >= static_cast<int>(vertices.size()) || a.target < 0 ||
        a.target >= static_cast<int>(vertices.size()))
      throw ValidationError("arc '" + a.id + "': dangling endpoint");
    if (!(a.probability >= 0.0 && a.probability <= 1.0))
      throw ValidationError("arc '" + a.id + "': probability must be in [0, 1]");
    if (a.improvement) {
      if (!(a.improvement->probability > a.probability))
        throw ValidationError("arc '" + a.id + "': improved probability must exceed the base");
      if (!(a.improvement->probability <= 1.0))
        throw ValidationError("arc '" + a.id + "': improved probability must be <= 1");
      if (!(a.improvement->cost > 0.0))
        throw ValidationError("arc '" + a.id + "': improvement cost must be > 0");
    }
    out_[a.source].push_back(static_cast<int>(i));
    in_[a.target].push_back(static_cast<int>(i));
  }

  vertex_option_.assign(vertices.size(), -1);
  for (std::size_t i = 0; i < options.size(); ++i) {
    const ImprovementOption& o = options[i];
    if (o.id.empty()) throw ValidationError("improvement option " + std::to_string(i) + " has an empty id");
    if (!option_by_id_.emplace(o.id, static_cast<int>(i)).second)
      throw ValidationError("duplicate improvement option id '" + o.id + "'");
    if (!(o.cost > 0.0))
      throw ValidationError("improvement option '" + o.id + "': cost must be > 0");
    if (o.kind == OptionKind::arc_upgrade) {
      if (o.arcs.empty()) throw ValidationError("improvement option '" + o.id + "': no arcs");
      for (int ai : o.arcs) {
        if (ai < 0 || ai >= static_cast<int>(arcs.size()))
          throw ValidationError("improvement option '" + o.id + "': bad arc index");
        if (arcs[ai].option != static_cast<int>(i))
          throw ValidationError("improvement option '" + o.id + "': arc link mismatch");
        if (!arcs[ai].improvement)
          throw ValidationError("improvement option '" + o.id + "': arc has no improvement data");
      }
    } else {
      if (o.vertex < 0 || o.vertex >= static_cast<int>(vertices.size()))
        throw ValidationError("improvement option '" + o.id + "': bad vertex index");
      if (!vertices[o.vertex].improvement)
        throw ValidationError("improvement option '" + o.id + "': vertex has no improvement data");
      if (vertex_option_[o.vertex] >= 0)
        throw ValidationError("vertex '" + vertices[o.vertex].id +
                              "' has more than one improvement option");
      vertex_option_[o.vertex] = static_cast<int>(i);
    }
  }

  if (!(budget >= 0.0)) throw ValidationError("budget must be >= 0");
}

int Instance::vertex_index(std::string_view id) const {
  auto it = vertex_by_id_.find(std::string(id));
  return it == vertex_by_id_.end() ? -1 : it->second;
}

int Instance::arc_index(std::string_view id) const {
  auto it = arc_by_id_.find(std::string(id));
  return it == arc_by_id_.end() ? -1 : it->second;
}

int Instance::option_index(std::string_view id) const {
  auto it = option_by_id_.find(std::string(id));
  return it == option_by_id_.end() ? -1 : it->second;
}

double Instance::total_weight() const {
  double s = 0.0;
  for (const Vertex& v : vertices) s += v.weight;
  return s;
}

int Scenario::count() const {
  return static_cast<int>(std::accumulate(bits_.begin(), bits_.end(), std::size_t{0}));
}

double probability_to_length(double p) {
  if (p <= 0.0) return std::numeric_limits<double>::infinity();
  if (p >= 1.0) return 0.0;  // also normalizes -log(1) == -0.0
  return -std::log(p);
}

EffectiveGraph apply_scenario(const Instance& inst, const Scenario& s) {
  if (s.size() != static_cast<int>(inst.options.size()))
    throw std::invalid_argument("scenario size does not match the option count");
  EffectiveGraph g;
  g.instance = &inst;
  g.arc_probability.resize(inst.arcs.size());
  g.arc_length.resize(inst.arcs.size());
  for (std::size_t i = 0; i < inst.arcs.size(); ++i) {
    const Arc& a = inst.arcs[i];
    double p = a.probability;
    if (a.option >= 0 && s.selected(a.option)) p = a.improvement->probability;
    g.arc_probability[i] = p;
    g.arc_length[i] = probability_to_length(p);
  }
  g.vertex_weight.resize(inst.vertices.size());
  for (std::size_t i = 0; i < inst.vertices.size(); ++i) {
    const Vertex& v = inst.vertices[i];
    double w = v.weight;
    const int oi = inst.vertex_option(static_cast<int>(i));
    if (oi >= 0 && s.selected(oi)) w = v.improvement->weight;
    g.vertex_weight[i] = w;
  }
  return g;
}

double scenario_cost(const Instance& inst, const Scenario& s) {
  if (s.size() != static_cast<int>(inst.options.size()))
    throw std::invalid_argument("scenario size does not match the option count");
  double c = 0.0;
  for (int i = 0; i < s.size(); ++i)
    if (s.selected(i)) c += inst.options[i].cost;
  return c;
}

std::vector<std::string> selected_ids(const Instance& inst, const Scenario& s) {
  std::vector<std::string> ids;
  for (int i = 0; i < s.size(); ++i)
    if (s.selected(i)) ids.push_back(inst.options[i].id);
  return ids;
}

namespace {

double require_number(const json& j, const char* field, const std::string& locus) {
  if (!j.contains(field) || !j[field].is_number())
    throw ParseError(locus + ": missing or non-numeric '" + std::string(field) + "'");
  return j[field].get<double>();
}

std::string require_string(const json& j, const char* field, const std::string& locus) {
  if (!j.contains(field) || !j[field].is_string())
    throw ParseError(locus + ": missing or non-string '" + std::string(field) + "'");
  return j[field].get<std::string>();
}

int resolve_vertex(const std::unordered_map<std::string, int>& by_id, const std::string& id,
                   const std::string& locus) {
  auto it = by_id.find(id);
  if (it == by_id.end()) throw ValidationError(locus + ": unknown vertex '" + id + "'");
  return it->second;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("instance JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("instance JSON: top level must be an object");

  Instance inst;

  if (doc.contains("vertices")) {
    if (!doc["vertices"].is_array()) throw ParseError("'vertices' must be an array");
    for (const json& jv : doc["vertices"]) {
      std::string locus = "vertex " + std::to_string(inst.vertices.size());
      Vertex v;
      v.id = require_string(jv, "id", locus);
      v.weight = require_number(jv, "weight", "vertex '" + v.id + "'");
      if (jv.contains("improvement")) {
        const json& ji = jv["improvement"];
        VertexImprovement imp;
        imp.weight = require_number(ji, "weight", "vertex '" + v.id + "' improvement");
        imp.cost = require_number(ji, "cost", "vertex '" + v.id + "' improvement");
        v.improvement = imp;
      }
      inst.vertices.push_back(std::move(v));
    }
  }

  // Vertex ids must resolve while arcs parse; duplicate/range checks all
  // happen in finalize at the end.
  {
    std::unordered_map<std::string, int> vertex_by_id;
    for (std::size_t i = 0; i < inst.vertices.size(); ++i)
      vertex_by_id.emplace(inst.vertices[i].id, static_cast<int>(i));

    auto parse_arc_like = [&](const json& ja, bool undirected) {
      std::string locus = undirected ? "edge" : "arc";
      Arc a;
      a.id = require_string(ja, "id", locus);
      locus += " '" + a.id + "'";
      std::string from = require_string(ja, "from", locus);
      std::string to = require_string(ja, "to", locus);
      a.source = resolve_vertex(vertex_by_id, from, locus);
      a.target = resolve_vertex(vertex_by_id, to, locus);
      a.probability = require_number(ja, "probability", locus);
      std::optional<ArcImprovement> imp;
      if (ja.contains("improvement")) {
        const json& ji = ja["improvement"];
        ArcImprovement ai;
        ai.probability = require_number(ji, "probability", locus + " improvement");
        ai.cost = require_number(ji, "cost", locus + " improvement");
        imp = ai;
      }
      a.improvement = imp;

      if (!undirected) {
        if (imp) {
          a.option = static_cast<int>(inst.options.size());
          ImprovementOption o;
          o.id = a.id;
          o.kind = OptionKind::arc_upgrade;
          o.cost = imp->cost;
          o.arcs = {static_cast<int>(inst.arcs.size())};
          inst.options.push_back(std::move(o));
        }
        inst.arcs.push_back(std::move(a));
        return;
      }

      Arc rev = a;
      rev.id = a.id + "~rev";
      std::swap(rev.source, rev.target);
      int fwd_idx = static_cast<int>(inst.arcs.size());
      a.edge_mate = fwd_idx + 1;
      rev.edge_mate = fwd_idx;
      if (imp) {
        int oi = static_cast<int>(inst.options.size());
        a.option = oi;
        rev.option = oi;
        ImprovementOption o;
        o.id = a.id;
        o.kind = OptionKind::arc_upgrade;
        o.cost = imp->cost;
        o.arcs = {fwd_idx, fwd_idx + 1};
        inst.options.push_back(std::move(o));
      }
      inst.arcs.push_back(std::move(a));
      inst.arcs.push_back(std::move(rev));
    };

    if (doc.contains("arcs")) {
      if (!doc["arcs"].is_array()) throw ParseError("'arcs' must be an array");
      for (const json& ja : doc["arcs"]) parse_arc_like(ja, false);
    }
    if (doc.contains("edges")) {
      if (!doc["edges"].is_array()) throw ParseError("'edges' must be an array");
      for (const json& je : doc["edges"]) parse_arc_like(je, true);
    }
  }

  // Vertex upgrade options come after all arc options, in vertex order.
  for (std::size_t i = 0; i < inst.vertices.size(); ++i) {
    if (!inst.vertices[i].improvement) continue;
    ImprovementOption o;
    o.id = inst.vertices[i].id;
    o.kind = OptionKind::vertex_upgrade;
    o.cost = inst.vertices[i].improvement->cost;
    o.vertex = static_cast<int>(i);
    inst.options.push_back(std::move(o));
  }

  if (doc.contains("budget")) {
    if (!doc["budget"].is_number()) throw ParseError("'budget' must be a number");
    inst.budget = doc["budget"].get<double>();
  }

  inst.finalize();
  return inst;
}

Instance parse_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open instance file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string serialize_instance(const Instance& inst) {
  json doc;
  doc["vertices"] = json::array();
  for (const Vertex& v : inst.vertices) {
    json jv{{"id", v.id}, {"weight", v.weight}};
    if (v.improvement)
      jv["improvement"] = {{"weight", v.improvement->weight}, {"cost", v.improvement->cost}};
    doc["vertices"].push_back(std::move(jv));
  }
  json arcs = json::array();
  json edges = json::array();
  for (std::size_t i = 0; i < inst.arcs.size(); ++i) {
    const Arc& a = inst.arcs[i];
    if (a.edge_mate >= 0 && a.edge_mate < static_cast<int>(i)) continue;  // reverse half
    json ja{{"id", a.id},
            {"from", inst.vertices[a.source].id},
            {"to", inst.vertices[a.target].id},
            {"probability", a.probability}};
    if (a.improvement)
      ja["improvement"] = {{"probability", a.improvement->probability},
                           {"cost", a.improvement->cost}};
    (a.edge_mate >= 0 ? edges : arcs).push_back(std::move(ja));
  }
  if (!arcs.empty()) doc["arcs"] = std::move(arcs);
  if (!edges.empty()) doc["edges"] = std::move(edges);
  doc["budget"] = inst.budget;
  return doc.dump(2) + "\n";
}

}  // namespace ecaopt
