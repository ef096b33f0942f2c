#include "ecaopt/preprocessing.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "ecaopt/kernels.hpp"
#include "ecaopt/parallel.hpp"

namespace ecaopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative tolerance for "these two path lengths are the same length".
// Equal-length ties decide colors, so the comparisons below must not
// flip on last-ulp noise from different summation orders.
bool nearly_equal(double a, double b) {
  if (a == b) return true;  // also inf == inf
  if (std::isinf(a) || std::isinf(b)) return false;
  const double scale = std::fmax(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= 1e-12 * scale;
}

enum class Color : std::uint8_t { none, blue, red };

struct SweepConfig {
  // true: pivot head starts blue at the upper length, siblings red at the
  // lower (the strong-style sweeps). false: the useless sweep, colors and
  // bounds swapped.
  bool pivot_blue = true;
  // true: blue wins equal keys, both at the pop and in relaxations.
  bool blue_takes_ties = true;
};

// One colored Dijkstra from the pivot's tail. Blue vertices propagate with
// upper lengths, red with lower lengths; the config decides which color
// keeps equal-length ties. The tail is not settled up front: walks that
// come back through it at zero extra cost (probability-one cycles) leave
// again at the seed prices, which is what the fiber definition counts.
// Returns the blue-settled vertices except the tail itself.
std::vector<int> run_sweep(const IntervalGraph& g, int pivot_arc, SweepConfig cfg,
                           SweepStats* stats) {
  const IntervalArc& pivot = g.arcs[pivot_arc];
  const int u = pivot.source;
  const int n = g.n;

  std::vector<double> dist(static_cast<std::size_t>(n), kInf);
  std::vector<Color> color(static_cast<std::size_t>(n), Color::none);
  std::vector<char> settled(static_cast<std::size_t>(n), 0);

  const auto rank = [&](Color c) {
    return ((c == Color::blue) == cfg.blue_takes_ties) ? 0 : 1;
  };

  using Entry = std::tuple<double, int, int>;  // (distance, color rank, vertex)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;

  // A shorter candidate takes the vertex, an equal-length one recolors it
  // to whichever color keeps ties. Covers seeds, relaxations and parallel
  // arcs alike.
  const auto offer = [&](int w, double cand, Color c) {
    if (cand == kInf || settled[w]) return;
    bool changed = false;
    if (nearly_equal(cand, dist[w])) {
      const Color win = (color[w] == c) ? c : (cfg.blue_takes_ties ? Color::blue : Color::red);
      if (cand < dist[w]) dist[w] = cand;
      if (win != color[w]) {
        color[w] = win;
        changed = true;
      }
    } else if (cand < dist[w]) {
      dist[w] = cand;
      color[w] = c;
      changed = true;
    }
    if (changed) heap.emplace(dist[w], rank(color[w]), w);
  };

  const Color pivot_color = cfg.pivot_blue ? Color::blue : Color::red;
  const Color sibling_color = cfg.pivot_blue ? Color::red : Color::blue;
  const auto leave_tail = [&](double base, Color via_sibling) {
    for (int a : g.out[u]) {
      if (stats) stats->relaxations += 1;
      const IntervalArc& arc = g.arcs[a];
      if (a == pivot_arc)
        offer(arc.target, base + (cfg.pivot_blue ? arc.upper : arc.lower), pivot_color);
      else
        offer(arc.target, base + (cfg.pivot_blue ? arc.lower : arc.upper), via_sibling);
    }
  };
  leave_tail(0.0, sibling_color);

  while (!heap.empty()) {
    const auto [d, rk, t] = heap.top();
    heap.pop();
    if (settled[t] || d != dist[t] || rk != rank(color[t])) continue;
    settled[t] = 1;
    if (stats) stats->settled += 1;

    if (t == u) {
      // A walk through the tail keeps its own color over sibling arcs and
      // turns pivot-colored over the pivot; prices stay the seed prices.
      leave_tail(d, color[u]);
      continue;
    }

    const bool from_blue = color[t] == Color::blue;
    for (int a : g.out[t]) {
      if (stats) stats->relaxations += 1;
      const IntervalArc& arc = g.arcs[a];
      offer(arc.target, d + (from_blue ? arc.upper : arc.lower),
            from_blue ? Color::blue : Color::red);
    }
  }

  std::vector<int> result;
  for (int z = 0; z < n; ++z)
    if (z != u && settled[z] && color[z] == Color::blue) result.push_back(z);
  return result;
}

}  // namespace

void IntervalGraph::rebuild_adjacency() {
  out.assign(static_cast<std::size_t>(n), {});
  for (int a = 0; a < static_cast<int>(arcs.size()); ++a)
    out[arcs[a].source].push_back(a);
}

IntervalGraph interval_graph(const Instance& inst) {
  IntervalGraph g;
  g.n = static_cast<int>(inst.vertices.size());
  g.arcs.reserve(inst.arcs.size());
  for (const Arc& arc : inst.arcs) {
    IntervalArc ia;
    ia.source = arc.source;
    ia.target = arc.target;
    ia.upper = probability_to_length(arc.probability);
    ia.lower = arc.improvement ? probability_to_length(arc.improvement->probability) : ia.upper;
    ia.option = arc.option;
    g.arcs.push_back(ia);
  }
  g.rebuild_adjacency();
  return g;
}

std::vector<int> strong_targets(const IntervalGraph& g, int pivot_arc, SweepStats* stats) {
  return run_sweep(g, pivot_arc, SweepConfig{true, true}, stats);
}

std::vector<int> strict_strong_targets(const IntervalGraph& g, int pivot_arc,
                                       SweepStats* stats) {
  return run_sweep(g, pivot_arc, SweepConfig{true, false}, stats);
}

std::vector<int> useless_targets(const IntervalGraph& g, int pivot_arc, SweepStats* stats) {
  return run_sweep(g, pivot_arc, SweepConfig{false, false}, stats);
}

TargetSets compute_all_sets(const IntervalGraph& g, int threads) {
  const int m = static_cast<int>(g.arcs.size());
  std::vector<std::vector<int>> strong_by_arc(static_cast<std::size_t>(m));
  std::vector<std::vector<int>> strict_by_arc(static_cast<std::size_t>(m));
  std::vector<std::vector<int>> useless_by_arc(static_cast<std::size_t>(m));
  parallel_for(static_cast<std::size_t>(m), threads, [&](std::size_t a) {
    strong_by_arc[a] = strong_targets(g, static_cast<int>(a));
    strict_by_arc[a] = strict_strong_targets(g, static_cast<int>(a));
    useless_by_arc[a] = useless_targets(g, static_cast<int>(a));
  });

  TargetSets sets;
  sets.strong_arcs.assign(static_cast<std::size_t>(g.n), {});
  sets.strict_arcs.assign(static_cast<std::size_t>(g.n), {});
  sets.useless_arcs.assign(static_cast<std::size_t>(g.n), {});
  for (int a = 0; a < m; ++a) {
    for (int t : strong_by_arc[a]) sets.strong_arcs[t].push_back(a);
    for (int t : strict_by_arc[a]) sets.strict_arcs[t].push_back(a);
    for (int t : useless_by_arc[a]) sets.useless_arcs[t].push_back(a);
  }
  return sets;
}

void ReducedGraph::rebuild_adjacency() {
  in_arcs.assign(vertices.size(), {});
  for (int a = 0; a < static_cast<int>(arcs.size()); ++a)
    in_arcs[arcs[a].target].push_back(a);
}

TargetReduction reduce_for_target(const Instance& inst, int target,
                                  const std::vector<int>& strict_arcs,
                                  const std::vector<int>& useless_arcs) {
  const int n = static_cast<int>(inst.vertices.size());
  const int m = static_cast<int>(inst.arcs.size());

  std::vector<char> removed(static_cast<std::size_t>(m), 0);
  for (int a : useless_arcs) removed[a] = 1;

  // Contraction as parent pointers: parent[u] = head of the strict arc u was
  // merged along, step[u] its length. Roots keep parent -1.
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  std::vector<double> step(static_cast<std::size_t>(n), 0.0);

  for (int a : strict_arcs) {
    if (removed[a]) continue;
    const Arc& arc = inst.arcs[a];
    if (arc.option >= 0) continue;  // improvable arcs keep both endpoints
    const int u = arc.source;
    if (u == target) continue;                   // the target must survive
    if (inst.vertices[u].improvement) continue;  // so must a vertex-option carrier
    if (parent[u] != -1) continue;
    // Refuse to close a cycle: u must not already be on v's root chain.
    int r = arc.target;
    bool cycles = r == u;
    while (!cycles && parent[r] != -1) {
      r = parent[r];
      cycles = r == u;
    }
    if (cycles) continue;
    parent[u] = arc.target;
    step[u] = probability_to_length(arc.probability);
  }

  TargetReduction red;
  red.target = target;
  red.removed = static_cast<int>(useless_arcs.size());

  std::vector<int> slot_of(static_cast<std::size_t>(n), -1);
  for (int z = 0; z < n; ++z) {
    if (parent[z] != -1) continue;
    slot_of[z] = static_cast<int>(red.graph.vertices.size());
    ReducedVertex rv;
    rv.original = z;
    rv.option = inst.vertex_option(z);
    red.graph.vertices.push_back(rv);
  }
  red.contracted = n - static_cast<int>(red.graph.vertices.size());

  red.vertex_map.resize(static_cast<std::size_t>(n));
  for (int z = 0; z < n; ++z) {
    double off = 0.0;
    int r = z;
    while (parent[r] != -1) {
      off += step[r];
      r = parent[r];
    }
    red.vertex_map[z] = VertexMapping{slot_of[r], off};
  }

  for (int z = 0; z < n; ++z) {
    const VertexMapping& vm = red.vertex_map[z];
    red.graph.vertices[vm.slot].weight += inst.vertices[z].weight * std::exp(-vm.offset);
  }
  for (ReducedVertex& rv : red.graph.vertices) {
    const Vertex& orig = inst.vertices[rv.original];
    const double delta = orig.improvement ? orig.improvement->weight - orig.weight : 0.0;
    rv.improved_weight = rv.weight + delta;
  }

  for (int a = 0; a < m; ++a) {
    if (removed[a]) continue;
    const Arc& arc = inst.arcs[a];
    if (parent[arc.source] != -1) continue;  // out-arcs of merged vertices vanish
    const VertexMapping& vm = red.vertex_map[arc.target];
    const int src = slot_of[arc.source];
    if (src == vm.slot) continue;  // collapsed to a self-loop
    ReducedArc ra;
    ra.source = src;
    ra.target = vm.slot;
    ra.upper = probability_to_length(arc.probability) + vm.offset;
    ra.lower = (arc.improvement ? probability_to_length(arc.improvement->probability)
                                : probability_to_length(arc.probability)) +
               vm.offset;
    ra.option = arc.option;
    ra.origin = a;
    red.graph.arcs.push_back(ra);
  }

  red.graph.target = slot_of[target];
  red.graph.rebuild_adjacency();
  return red;
}

std::vector<TargetReduction> reduce_all(const Instance& inst, const TargetSets& sets,
                                        int threads) {
  const int n = static_cast<int>(inst.vertices.size());
  std::vector<TargetReduction> out(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t t) {
    out[t] = reduce_for_target(inst, static_cast<int>(t), sets.strict_arcs[t],
                               sets.useless_arcs[t]);
  });
  return out;
}

std::vector<TargetReduction> reduce_all(const Instance& inst, int threads) {
  return reduce_all(inst, compute_all_sets(interval_graph(inst), threads), threads);
}

double f_t_reduced(const ReducedGraph& g, const Scenario& scenario) {
  const int n = static_cast<int>(g.vertices.size());
  std::vector<double> dist(static_cast<std::size_t>(n), kInf);
  std::vector<char> settled(static_cast<std::size_t>(n), 0);

  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
  dist[g.target] = 0.0;
  heap.emplace(0.0, g.target);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (settled[v] || d != dist[v]) continue;
    settled[v] = 1;
    for (int a : g.in_arcs[v]) {
      const ReducedArc& arc = g.arcs[a];
      const bool improved = arc.option >= 0 && scenario.selected(arc.option);
      const double len = improved ? arc.lower : arc.upper;
      if (len == kInf) continue;
      const int s = arc.source;
      if (settled[s]) continue;
      const double cand = d + len;
      if (cand < dist[s]) {
        dist[s] = cand;
        heap.emplace(cand, s);
      }
    }
  }

  std::vector<double> weights(static_cast<std::size_t>(n));
  std::vector<double> probs(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    const ReducedVertex& rv = g.vertices[s];
    const bool improved = rv.option >= 0 && scenario.selected(rv.option);
    weights[s] = improved ? rv.improved_weight : rv.weight;
    probs[s] = std::exp(-dist[s]);
  }
  return kernels::active().weighted_sum(weights.data(), probs.data(),
                                        static_cast<std::size_t>(n));
}

}  // namespace ecaopt
