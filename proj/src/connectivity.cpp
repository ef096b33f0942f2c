#include "ecaopt/connectivity.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>

#include "ecaopt/kernels.hpp"
#include "ecaopt/parallel.hpp"

namespace ecaopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

DistanceMatrix::DistanceMatrix(int n)
    : n_(n), data_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), kInf) {}

std::vector<double> distances_to_target(const EffectiveGraph& g, int t) {
  const Instance& inst = *g.instance;
  const int n = static_cast<int>(inst.vertices.size());
  std::vector<double> dist(static_cast<std::size_t>(n), kInf);
  std::vector<char> settled(static_cast<std::size_t>(n), 0);

  // Lazy-deletion binary heap; stale entries are skipped on pop.
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
  dist[t] = 0.0;
  heap.emplace(0.0, t);

  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (settled[v] || d != dist[v]) continue;
    settled[v] = 1;
    for (int a : inst.in_arcs(v)) {
      const double len = g.arc_length[a];
      if (len == kInf) continue;
      const int s = inst.arcs[a].source;
      if (settled[s]) continue;
      const double cand = d + len;
      if (cand < dist[s]) {
        dist[s] = cand;
        heap.emplace(cand, s);
      }
    }
  }
  return dist;
}

std::vector<double> reliabilities_to_target(const EffectiveGraph& g, int t) {
  std::vector<double> d = distances_to_target(g, t);
  for (double& x : d) x = std::exp(-x);
  return d;
}

DistanceMatrix build_distance_matrix(const EffectiveGraph& g, int threads) {
  const int n = static_cast<int>(g.instance->vertices.size());
  DistanceMatrix m(n);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t t) {
    std::vector<double> d = distances_to_target(g, static_cast<int>(t));
    double* row = m.row(static_cast<int>(t));
    for (int s = 0; s < n; ++s) row[s] = d[s];
  });
  return m;
}

double f_t(const EffectiveGraph& g, int t) {
  const Instance& inst = *g.instance;
  const int n = static_cast<int>(inst.vertices.size());
  std::vector<double> probs = reliabilities_to_target(g, t);
  return kernels::active().weighted_sum(g.vertex_weight.data(), probs.data(),
                                        static_cast<std::size_t>(n));
}

std::vector<double> per_target_f(const DistanceMatrix& m, const std::vector<double>& weights,
                                 int threads) {
  const int n = m.size();
  if (static_cast<int>(weights.size()) != n)
    throw std::invalid_argument("per_target_f: weight count does not match matrix size");
  std::vector<double> f(static_cast<std::size_t>(n), 0.0);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t t) {
    const double* row = m.row(static_cast<int>(t));
    std::vector<double> probs(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) probs[s] = std::exp(-row[s]);
    f[t] = kernels::active().weighted_sum(weights.data(), probs.data(),
                                          static_cast<std::size_t>(n));
  });
  return f;
}

EcaValue eca_from_matrix(const DistanceMatrix& m, const std::vector<double>& weights,
                         int threads) {
  const int n = m.size();
  if (n == 0) return {};
  std::vector<double> f = per_target_f(m, weights, threads);
  const double squared = kernels::active().weighted_sum(weights.data(), f.data(),
                                                        static_cast<std::size_t>(n));
  EcaValue v;
  v.squared = squared;
  v.eca = std::sqrt(squared < 0.0 ? 0.0 : squared);
  return v;
}

EcaValue eca(const EffectiveGraph& g, int threads) {
  DistanceMatrix m = build_distance_matrix(g, threads);
  return eca_from_matrix(m, g.vertex_weight, threads);
}

double pc(const EcaValue& value, double landscape_area) {
  if (!(landscape_area > 0.0))
    throw std::invalid_argument("pc: landscape area must be positive");
  return value.squared / (landscape_area * landscape_area);
}

void apsp_decrease_update(DistanceMatrix& m, int u, int v, double old_length, double new_length,
                          int threads) {
  if (new_length > old_length)
    throw std::invalid_argument("apsp_decrease_update: length increased; rebuild instead");
  const int n = m.size();
  const std::size_t un = static_cast<std::size_t>(n);
  const double* row_u = m.row(u);
  // d(s,u) cannot improve via a path through (u,v) itself (lengths are
  // nonnegative), so row u is a fixed point and every other row may read
  // it while being rewritten in place.
  parallel_for(un, threads, [&](std::size_t ti) {
    const int t = static_cast<int>(ti);
    if (t == u) return;
    double* row_t = m.row(t);
    const double shift = new_length + row_t[v];
    kernels::active().min_plus_update(row_t, row_u, shift, un);
  });
}

}  // namespace ecaopt
