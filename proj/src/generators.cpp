#include "ecaopt/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecaopt/errors.hpp"

namespace ecaopt {

namespace {

using nlohmann::ordered_json;

std::string pad2(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d", i);
  return buf;
}

void check_k(int k) {
  if (k < 1 || k > 99) throw std::invalid_argument("generator size k must be in [1, 99]");
}

void check_eps(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("generator epsilon must be in (0, 1)");
}

ordered_json vertex(const std::string& id, double weight) {
  return ordered_json{{"id", id}, {"weight", weight}};
}

// A broken edge that can be fully restored for one unit.
ordered_json dead_edge(const std::string& id, const std::string& from, const std::string& to) {
  return ordered_json{{"id", id},
                      {"from", from},
                      {"to", to},
                      {"probability", 0.0},
                      {"improvement", {{"probability", 1.0}, {"cost", 1.0}}}};
}

Instance from_doc(const ordered_json& doc) { return parse_instance(doc.dump()); }

// Uniform double in [0, 1) from the top 53 bits; identical on every
// platform, unlike std::uniform_real_distribution.
double u01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

Instance make_ig_bad(int k, double epsilon) {
  check_k(k);
  check_eps(epsilon);
  ordered_json doc;
  doc["vertices"] = ordered_json::array();
  doc["edges"] = ordered_json::array();
  auto& vs = doc["vertices"];
  auto& es = doc["edges"];

  vs.push_back(vertex("c", 1.0));
  for (int i = 1; i <= k; ++i) {
    const std::string ii = pad2(i);
    vs.push_back(vertex("m" + ii, 0.0));
    vs.push_back(vertex("l" + ii, 1.0));
    es.push_back(dead_edge("li_" + ii + "_0", "c", "m" + ii));
    es.push_back(dead_edge("li_" + ii + "_1", "m" + ii, "l" + ii));
  }
  for (int i = 1; i <= k; ++i) {
    const std::string ii = pad2(i);
    vs.push_back(vertex("s" + ii, epsilon));
    es.push_back(dead_edge("sh_" + ii, "c", "s" + ii));
  }
  doc["budget"] = 0.0;
  return from_doc(doc);
}

Instance make_dg_bad(int k) {
  check_k(k);
  constexpr double eps = 0.01;
  ordered_json doc;
  doc["vertices"] = ordered_json::array();
  doc["edges"] = ordered_json::array();
  auto& vs = doc["vertices"];
  auto& es = doc["edges"];

  vs.push_back(vertex("c", 1.0));
  for (int i = 1; i <= k; ++i) {
    const std::string ii = pad2(i);
    vs.push_back(vertex("b" + ii, 1.0));
    es.push_back(dead_edge("star_" + ii, "c", "b" + ii));
  }
  for (int j = 1; j <= k - 1; ++j) vs.push_back(vertex("p" + pad2(j), 0.0));
  vs.push_back(vertex("pl", 1.0 + eps));
  for (int j = 0; j <= k - 1; ++j) {
    const std::string from = j == 0 ? "c" : "p" + pad2(j);
    const std::string to = j == k - 1 ? "pl" : "p" + pad2(j + 1);
    es.push_back(dead_edge("path_" + pad2(j), from, to));
  }
  doc["budget"] = 0.0;
  return from_doc(doc);
}

Instance make_both_bad(int k, double epsilon) {
  check_k(k);
  check_eps(epsilon);
  ordered_json doc;
  doc["vertices"] = ordered_json::array();
  doc["edges"] = ordered_json::array();
  auto& vs = doc["vertices"];
  auto& es = doc["edges"];

  vs.push_back(vertex("c", 1.0));
  for (int i = 1; i <= k; ++i) {
    const std::string ii = pad2(i);
    vs.push_back(vertex("m" + ii, 0.0));
    vs.push_back(vertex("l" + ii, 1.0));
    es.push_back(dead_edge("br_" + ii + "_0", "c", "m" + ii));
    es.push_back(dead_edge("br_" + ii + "_1", "m" + ii, "l" + ii));
  }
  const int plen = 2 * k;
  for (int j = 1; j <= plen - 1; ++j) vs.push_back(vertex("p" + pad2(j), epsilon));
  vs.push_back(vertex("pl", 1.0 + epsilon));
  for (int j = 0; j <= plen - 1; ++j) {
    const std::string from = j == 0 ? "c" : "p" + pad2(j);
    const std::string to = j == plen - 1 ? "pl" : "p" + pad2(j + 1);
    es.push_back(dead_edge("path_" + pad2(j), from, to));
  }
  doc["budget"] = 0.0;
  return from_doc(doc);
}

Instance make_random_instance(const RandomInstanceParams& params) {
  if (params.n < 2) throw std::invalid_argument("random instance needs n >= 2");
  if (!(params.mean_degree > 0.0))
    throw std::invalid_argument("random instance needs mean_degree > 0");
  if (!(params.improvable_fraction >= 0.0 && params.improvable_fraction <= 1.0))
    throw std::invalid_argument("improvable_fraction must be in [0, 1]");

  std::mt19937_64 gen(params.seed);
  const int n = params.n;

  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = u01(gen);
    y[i] = u01(gen);
  }
  std::vector<double> weight(n);
  for (int i = 0; i < n; ++i) weight[i] = u01(gen);

  // Expected neighbor count of a point is roughly (n-1) * pi * r^2.
  const double pi = 3.14159265358979323846;
  const double radius = std::sqrt(params.mean_degree / (static_cast<double>(n - 1) * pi));
  const double r2 = radius * radius;

  struct Edge {
    int a, b;
    double dist;
  };
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      const double d2 = dx * dx + dy * dy;
      if (d2 <= r2) edges.push_back({i, j, std::sqrt(d2)});
    }
  }
  if (edges.empty())
    throw ValidationError("random instance has no edges; raise mean_degree or n");

  // Calibrate the decay so the median edge lands at reliability 1/2.
  std::vector<double> dists;
  dists.reserve(edges.size());
  for (const Edge& e : edges) dists.push_back(std::max(e.dist, 1e-12));
  std::sort(dists.begin(), dists.end());
  const double median = dists[(dists.size() - 1) / 2];
  const double alpha = std::log(2.0) / median;

  // Largest connected component, smallest root index on size ties.
  std::vector<int> root(n);
  for (int i = 0; i < n; ++i) root[i] = i;
  const auto find = [&root](int v) {
    while (root[v] != v) {
      root[v] = root[root[v]];
      v = root[v];
    }
    return v;
  };
  for (const Edge& e : edges) {
    const int ra = find(e.a), rb = find(e.b);
    if (ra != rb) root[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::vector<int> comp_size(n, 0);
  for (int i = 0; i < n; ++i) comp_size[find(i)] += 1;
  int best_root = 0;
  for (int i = 1; i < n; ++i)
    if (comp_size[i] > comp_size[best_root]) best_root = i;

  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (find(i) == best_root) keep.push_back(i);

  ordered_json doc;
  doc["vertices"] = ordered_json::array();
  for (int i : keep)
    doc["vertices"].push_back(vertex("v" + std::to_string(i), weight[i]));

  // Directed arc pair per surviving edge; improvements are drawn per arc,
  // so the two directions can upgrade independently.
  struct ArcPlan {
    std::string id, from, to;
    double prob;
    bool improved = false;
  };
  std::vector<ArcPlan> arcs;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    if (find(e.a) != best_root) continue;
    const double prob = std::exp(-alpha * std::max(e.dist, 1e-12));
    const std::string va = "v" + std::to_string(e.a);
    const std::string vb = "v" + std::to_string(e.b);
    arcs.push_back({"a" + std::to_string(k) + "f", va, vb, prob});
    arcs.push_back({"a" + std::to_string(k) + "b", vb, va, prob});
  }

  const int n_arcs = static_cast<int>(arcs.size());
  const int n_improve =
      static_cast<int>(std::llround(params.improvable_fraction * n_arcs));
  std::vector<int> perm(n_arcs);
  for (int i = 0; i < n_arcs; ++i) perm[i] = i;
  for (int i = n_arcs - 1; i > 0; --i) {
    int j = static_cast<int>(u01(gen) * (i + 1));
    if (j > i) j = i;
    std::swap(perm[i], perm[j]);
  }
  for (int i = 0; i < n_improve; ++i) arcs[perm[i]].improved = true;

  doc["arcs"] = ordered_json::array();
  for (const ArcPlan& a : arcs) {
    ordered_json ja{{"id", a.id}, {"from", a.from}, {"to", a.to}, {"probability", a.prob}};
    if (a.improved)
      ja["improvement"] = {{"probability", std::sqrt(a.prob)}, {"cost", 1.0}};
    doc["arcs"].push_back(std::move(ja));
  }
  doc["budget"] = 0.0;
  return from_doc(doc);
}

}  // namespace ecaopt
