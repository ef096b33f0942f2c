#pragma once

#include <vector>

#include "ecaopt/instance.hpp"
#include "ecaopt/solution.hpp"

namespace ecaopt {

enum class GreedyKind {
  incremental,         // buy best delta-ECA per cost, re-evaluated each step
  decremental,         // start full, drop cheapest losses until affordable
  static_incremental,  // one ranking against the empty selection
  static_decremental,  // one ranking against the full selection
};

struct TraceEntry {
  int step = 0;
  bool add = true;  // false: removal
  int option = -1;
  double ratio = 0.0;  // delta ECA per unit cost at decision time
  double eca_after = 0.0;
};

struct GreedyResult {
  Solution solution;
  std::vector<TraceEntry> trace;
  double baseline_eca = 0.0;  // ECA of the empty selection
};

GreedyResult greedy_incremental(const Instance& inst, double budget, int threads = 1);
GreedyResult greedy_decremental(const Instance& inst, double budget, int threads = 1);
GreedyResult greedy_static_incremental(const Instance& inst, double budget, int threads = 1);
GreedyResult greedy_static_decremental(const Instance& inst, double budget, int threads = 1);

GreedyResult run_greedy(GreedyKind kind, const Instance& inst, double budget, int threads = 1);

const char* greedy_kind_name(GreedyKind kind);  // "ig", "dg", "si", "sd"

}  // namespace ecaopt
