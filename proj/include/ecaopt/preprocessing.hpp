#pragma once

#include <cstdint>
#include <vector>

#include "ecaopt/instance.hpp"

namespace ecaopt {

// The scenario-independent view the sweeps run on: every arc carries the
// interval [lower, upper] of lengths it can take. Non-improvable arcs have
// lower == upper.
struct IntervalArc {
  int source = -1;
  int target = -1;
  double lower = 0.0;
  double upper = 0.0;
  int option = -1;  // improvement option index, -1 when fixed
};

struct IntervalGraph {
  int n = 0;
  std::vector<IntervalArc> arcs;
  std::vector<std::vector<int>> out;  // arc indices by source vertex

  void rebuild_adjacency();
};

IntervalGraph interval_graph(const Instance& inst);

struct SweepStats {
  std::size_t relaxations = 0;  // arc scans during settle steps
  std::size_t settled = 0;
};

// Targets t != source(pivot) with d_x(u,t) = l_x(pivot) + d_x(v,t) < inf in
// every scenario x (pivot = (u,v)). "strict" additionally demands that the
// identity fails once the pivot is deleted, i.e. the pivot is on every
// optimal u-t path.
std::vector<int> strong_targets(const IntervalGraph& g, int pivot_arc,
                                SweepStats* stats = nullptr);
std::vector<int> strict_strong_targets(const IntervalGraph& g, int pivot_arc,
                                       SweepStats* stats = nullptr);
// Targets for which the identity fails in every scenario: the pivot is on
// no optimal u-t path no matter which improvements are bought.
std::vector<int> useless_targets(const IntervalGraph& g, int pivot_arc,
                                 SweepStats* stats = nullptr);

// Per-target aggregation of the per-arc sweeps: S(t) collects the arcs t is
// strong for, W(t) the arcs t is useless for.
struct TargetSets {
  std::vector<std::vector<int>> strong_arcs;   // indexed by target
  std::vector<std::vector<int>> strict_arcs;   // strictly strong, ⊆ strong
  std::vector<std::vector<int>> useless_arcs;  // indexed by target
};

TargetSets compute_all_sets(const IntervalGraph& g, int threads = 1);

// Target-specific contracted graph. Vertices are the surviving
// representatives in original index order; each keeps the option index of
// its vertex improvement (weights already merged, delta preserved).
struct ReducedVertex {
  int original = -1;
  double weight = 0.0;
  double improved_weight = 0.0;
  int option = -1;
};

struct ReducedArc {
  int source = -1;
  int target = -1;
  double lower = 0.0;
  double upper = 0.0;
  int option = -1;
  int origin = -1;  // arc index in the instance this one descends from
};

struct ReducedGraph {
  int target = -1;  // slot index of the target
  std::vector<ReducedVertex> vertices;
  std::vector<ReducedArc> arcs;
  std::vector<std::vector<int>> in_arcs;  // arc indices by target slot

  void rebuild_adjacency();
};

// Where an original vertex went: its representative's slot and the length
// offset accumulated along the contraction chain (0 for survivors).
struct VertexMapping {
  int slot = -1;
  double offset = 0.0;
};

struct TargetReduction {
  int target = -1;  // original vertex index
  ReducedGraph graph;
  std::vector<VertexMapping> vertex_map;
  int contracted = 0;  // vertices merged away
  int removed = 0;     // arcs deleted via W(t)
};

// Contraction follows strictly strong arcs only: a merely tying arc may
// share its traffic with a sibling, and dropping the sibling then loses
// walks that zero-length cycles route back through the merged tail.
TargetReduction reduce_for_target(const Instance& inst, int target,
                                  const std::vector<int>& strict_arcs,
                                  const std::vector<int>& useless_arcs);

std::vector<TargetReduction> reduce_all(const Instance& inst, const TargetSets& sets,
                                        int threads = 1);

// Convenience overload that derives the sets itself.
std::vector<TargetReduction> reduce_all(const Instance& inst, int threads = 1);

// f_t on the reduced graph under a concrete improvement choice; matches
// f_t on the full graph for the reduction's own target.
double f_t_reduced(const ReducedGraph& g, const Scenario& scenario);

}  // namespace ecaopt
