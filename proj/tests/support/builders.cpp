#include "support/builders.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace ecaopt::testref {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace

Instance random_test_instance(std::mt19937_64& rng, const RandomTestKnobs& knobs) {
  const int n = uniform_int(rng, 2, knobs.max_vertices);
  int options = 0;

  nlohmann::ordered_json vertices = nlohmann::ordered_json::array();
  for (int i = 0; i < n; ++i) {
    const std::string id = "v" + std::to_string(i);
    const double w = uniform(rng, 0.0, 1.0) < 0.2 ? 0.0 : uniform(rng, 0.25, 4.0);
    if (knobs.vertex_options && options < knobs.max_options &&
        uniform(rng, 0.0, 1.0) < 0.2) {
      vertices.push_back(jvertex(id, w, w + uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 3.0)));
      ++options;
    } else {
      vertices.push_back(jvertex(id, w));
    }
  }

  nlohmann::ordered_json arcs = nlohmann::ordered_json::array();
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  double total_cost = 0.0;

  int slots = uniform_int(rng, 1, knobs.max_arcs);
  int serial = 0;
  while (slots > 0) {
    const int u = uniform_int(rng, 0, n - 1);
    int v = uniform_int(rng, 0, n - 2);
    if (v >= u) ++v;
    const bool as_edge = slots >= 2 && uniform(rng, 0.0, 1.0) < 0.5;

    const double roll = uniform(rng, 0.0, 1.0);
    const double p = roll < 0.1 ? 0.0 : roll > 0.9 ? 1.0 : uniform(rng, 0.05, 0.98);

    bool improvable = options < knobs.max_options && p < 1.0 && uniform(rng, 0.0, 1.0) < 0.35;
    double p_imp = 0.0;
    double cost = 0.0;
    if (improvable) {
      p_imp = p + (1.0 - p) * uniform(rng, 0.2, 1.0);
      p_imp = std::min(p_imp, 1.0);
      cost = uniform(rng, 0.5, 3.0);
      total_cost += cost;
      ++options;
    }

    const std::string id = (as_edge ? "e" : "a") + std::to_string(serial++);
    const std::string from = "v" + std::to_string(u);
    const std::string to = "v" + std::to_string(v);
    auto& bucket = as_edge ? edges : arcs;
    bucket.push_back(improvable ? jarc(id, from, to, p, p_imp, cost) : jarc(id, from, to, p));
    slots -= as_edge ? 2 : 1;
  }

  const double budget = total_cost > 0.0 ? uniform(rng, 0.0, total_cost) : 0.0;
  return parse_instance(jdoc(std::move(vertices), std::move(arcs), std::move(edges), budget).dump());
}

}  // namespace ecaopt::testref
