#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ecaopt {

struct VertexImprovement {
  double weight = 0.0;  // weight after the upgrade, >= base weight
  double cost = 0.0;
};

struct Vertex {
  std::string id;
  double weight = 0.0;
  std::optional<VertexImprovement> improvement;
};

struct ArcImprovement {
  double probability = 0.0;  // probability after the upgrade, in (base, 1]
  double cost = 0.0;
};

struct Arc {
  std::string id;
  int source = -1;
  int target = -1;
  double probability = 0.0;
  std::optional<ArcImprovement> improvement;
  int option = -1;     // index into Instance::options, -1 when fixed
  int edge_mate = -1;  // antiparallel partner when expanded from an edge
};

enum class OptionKind { arc_upgrade, vertex_upgrade };

// One purchasable improvement. An undirected edge contributes a single
// option covering both of its antiparallel arcs.
struct ImprovementOption {
  std::string id;
  OptionKind kind = OptionKind::arc_upgrade;
  double cost = 0.0;
  std::vector<int> arcs;  // arc_upgrade: the covered arc indices
  int vertex = -1;        // vertex_upgrade: the covered vertex
};

class Instance {
 public:
  std::vector<Vertex> vertices;
  std::vector<Arc> arcs;
  std::vector<ImprovementOption> options;
  double budget = 0.0;

  // Rebuilds id maps and adjacency; call after mutating the containers.
  // Throws ValidationError on semantic violations.
  void finalize();

  int vertex_index(std::string_view id) const;
  int arc_index(std::string_view id) const;
  int option_index(std::string_view id) const;

  const std::vector<int>& out_arcs(int v) const { return out_[v]; }
  const std::vector<int>& in_arcs(int v) const { return in_[v]; }

  // Option index of the vertex's weight upgrade, -1 when it has none.
  int vertex_option(int v) const { return vertex_option_[v]; }

  double total_weight() const;

 private:
  std::unordered_map<std::string, int> vertex_by_id_;
  std::unordered_map<std::string, int> arc_by_id_;
  std::unordered_map<std::string, int> option_by_id_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  std::vector<int> vertex_option_;
};

// Binary purchase decision per improvement option.
class Scenario {
 public:
  Scenario() = default;
  explicit Scenario(std::size_t n_options, bool selected = false)
      : bits_(n_options, selected ? 1 : 0) {}

  int size() const { return static_cast<int>(bits_.size()); }
  bool selected(int i) const { return bits_[i] != 0; }
  void set(int i, bool on) { bits_[i] = on ? 1 : 0; }
  void flip(int i) { bits_[i] ^= 1; }
  int count() const;

  bool operator==(const Scenario&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

// Arc/vertex attributes under one scenario. Lengths are -log of the
// effective probability; probability 0 maps to +inf (and never to NaN),
// probability 1 maps to +0.0.
struct EffectiveGraph {
  const Instance* instance = nullptr;
  std::vector<double> arc_length;
  std::vector<double> arc_probability;
  std::vector<double> vertex_weight;
};

double probability_to_length(double p);

EffectiveGraph apply_scenario(const Instance& inst, const Scenario& s);
double scenario_cost(const Instance& inst, const Scenario& s);
std::vector<std::string> selected_ids(const Instance& inst, const Scenario& s);

// JSON instance files. parse_instance throws ParseError on malformed
// text and ValidationError on semantic violations; both messages carry
// a locus. Undirected "edges" entries are expanded into antiparallel
// arc pairs (ids <id> and <id>~rev) sharing one improvement option;
// serialize_instance folds such pairs back into an edges entry, so a
// parse/serialize round trip is the identity on the file structure.
Instance parse_instance(std::string_view text);
Instance parse_instance_file(const std::string& path);
std::string serialize_instance(const Instance& inst);

}  // namespace ecaopt
