#pragma once

#include <random>
#include <string>

#include <json.hpp>

#include "ecaopt/instance.hpp"

// JSON scaffolding for hand-built test instances, plus a randomized
// instance source that covers the corners the shipped generators avoid:
// directed arcs, zero and one probabilities, vertex upgrades, zero
// weights, disconnected graphs.

namespace ecaopt::testref {

inline nlohmann::ordered_json jvertex(const std::string& id, double w) {
  nlohmann::ordered_json v;
  v["id"] = id;
  v["weight"] = w;
  return v;
}

inline nlohmann::ordered_json jvertex(const std::string& id, double w, double w_imp,
                                      double cost) {
  nlohmann::ordered_json v = jvertex(id, w);
  v["improvement"] = {{"weight", w_imp}, {"cost", cost}};
  return v;
}

inline nlohmann::ordered_json jarc(const std::string& id, const std::string& from,
                                   const std::string& to, double p) {
  nlohmann::ordered_json a;
  a["id"] = id;
  a["from"] = from;
  a["to"] = to;
  a["probability"] = p;
  return a;
}

inline nlohmann::ordered_json jarc(const std::string& id, const std::string& from,
                                   const std::string& to, double p, double p_imp, double cost) {
  nlohmann::ordered_json a = jarc(id, from, to, p);
  a["improvement"] = {{"probability", p_imp}, {"cost", cost}};
  return a;
}

inline nlohmann::ordered_json jdoc(nlohmann::ordered_json vertices, nlohmann::ordered_json arcs,
                                   nlohmann::ordered_json edges, double budget) {
  nlohmann::ordered_json doc;
  doc["vertices"] = std::move(vertices);
  if (!arcs.empty()) doc["arcs"] = std::move(arcs);
  if (!edges.empty()) doc["edges"] = std::move(edges);
  doc["budget"] = budget;
  return doc;
}

struct RandomTestKnobs {
  int max_vertices = 10;
  int max_arcs = 25;
  int max_options = 12;
  bool vertex_options = true;
};

Instance random_test_instance(std::mt19937_64& rng, const RandomTestKnobs& knobs = {});

}  // namespace ecaopt::testref
