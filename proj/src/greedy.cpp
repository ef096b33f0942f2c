#include "ecaopt/greedy.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ecaopt/connectivity.hpp"
#include "ecaopt/parallel.hpp"

namespace ecaopt {

namespace {

constexpr double kBudgetSlack = 1e-9;

struct EvalState {
  const Instance* inst = nullptr;
  Scenario sel;
  EffectiveGraph eff;
  DistanceMatrix matrix;
  double eca = 0.0;
  double eca_squared = 0.0;
};

void refresh_eca(EvalState& st, int threads) {
  const EcaValue v = eca_from_matrix(st.matrix, st.eff.vertex_weight, threads);
  st.eca = v.eca;
  st.eca_squared = v.squared;
}

EvalState make_state(const Instance& inst, Scenario sel, int threads) {
  EvalState st;
  st.inst = &inst;
  st.sel = std::move(sel);
  st.eff = apply_scenario(inst, st.sel);
  st.matrix = build_distance_matrix(st.eff, threads);
  refresh_eca(st, threads);
  return st;
}

// ECA if the (currently unselected) option were bought, evaluated on a
// scratch copy of the distance matrix.
double eca_with_option(const EvalState& st, int oi) {
  const Instance& inst = *st.inst;
  const ImprovementOption& o = inst.options[oi];
  if (o.kind == OptionKind::vertex_upgrade) {
    std::vector<double> w = st.eff.vertex_weight;
    w[o.vertex] = inst.vertices[o.vertex].improvement->weight;
    return eca_from_matrix(st.matrix, w, 1).eca;
  }
  DistanceMatrix scratch = st.matrix;
  for (int a : o.arcs) {
    const Arc& arc = inst.arcs[a];
    apsp_decrease_update(scratch, arc.source, arc.target, st.eff.arc_length[a],
                         probability_to_length(arc.improvement->probability), 1);
  }
  return eca_from_matrix(scratch, st.eff.vertex_weight, 1).eca;
}

// ECA if the (currently selected) option were dropped. Arc removals raise
// lengths, so these rebuild the matrix outright.
double eca_without_option(const EvalState& st, int oi) {
  const Instance& inst = *st.inst;
  const ImprovementOption& o = inst.options[oi];
  if (o.kind == OptionKind::vertex_upgrade) {
    std::vector<double> w = st.eff.vertex_weight;
    w[o.vertex] = inst.vertices[o.vertex].weight;
    return eca_from_matrix(st.matrix, w, 1).eca;
  }
  EffectiveGraph eff = st.eff;
  for (int a : o.arcs) {
    const Arc& arc = inst.arcs[a];
    eff.arc_length[a] = probability_to_length(arc.probability);
    eff.arc_probability[a] = arc.probability;
  }
  const DistanceMatrix m = build_distance_matrix(eff, 1);
  return eca_from_matrix(m, eff.vertex_weight, 1).eca;
}

void buy_option(EvalState& st, int oi, int threads) {
  const Instance& inst = *st.inst;
  const ImprovementOption& o = inst.options[oi];
  st.sel.set(oi, true);
  if (o.kind == OptionKind::vertex_upgrade) {
    st.eff.vertex_weight[o.vertex] = inst.vertices[o.vertex].improvement->weight;
  } else {
    for (int a : o.arcs) {
      const Arc& arc = inst.arcs[a];
      const double nl = probability_to_length(arc.improvement->probability);
      apsp_decrease_update(st.matrix, arc.source, arc.target, st.eff.arc_length[a], nl,
                           threads);
      st.eff.arc_length[a] = nl;
      st.eff.arc_probability[a] = arc.improvement->probability;
    }
  }
  refresh_eca(st, threads);
}

void drop_option(EvalState& st, int oi, int threads) {
  const Instance& inst = *st.inst;
  const ImprovementOption& o = inst.options[oi];
  st.sel.set(oi, false);
  if (o.kind == OptionKind::vertex_upgrade) {
    st.eff.vertex_weight[o.vertex] = inst.vertices[o.vertex].weight;
  } else {
    for (int a : o.arcs) {
      const Arc& arc = inst.arcs[a];
      st.eff.arc_length[a] = probability_to_length(arc.probability);
      st.eff.arc_probability[a] = arc.probability;
    }
    st.matrix = build_distance_matrix(st.eff, threads);
  }
  refresh_eca(st, threads);
}

// Ratio comparison with id tie-break; returns true when (r2, o2) should
// replace (r1, o1) as the better purchase.
bool better_buy(const Instance& inst, double r1, int o1, double r2, int o2) {
  if (r2 > r1) return true;
  if (r2 < r1) return false;
  return inst.options[o2].id < inst.options[o1].id;
}

bool better_drop(const Instance& inst, double r1, int o1, double r2, int o2) {
  if (r2 < r1) return true;
  if (r2 > r1) return false;
  return inst.options[o2].id < inst.options[o1].id;
}

Solution to_solution(const EvalState& st) {
  Solution sol;
  sol.scenario = st.sel;
  for (int oi = 0; oi < st.sel.size(); ++oi)
    if (st.sel.selected(oi)) sol.selected.push_back(oi);
  sol.cost = scenario_cost(*st.inst, st.sel);
  sol.eca = st.eca;
  sol.eca_squared = st.eca_squared;
  return sol;
}

// The re-evaluating purchase loop shared by IG and the tail of DG.
void incremental_fill(EvalState& st, double budget, int& step, std::vector<TraceEntry>& trace,
                      int threads) {
  const Instance& inst = *st.inst;
  while (true) {
    const double spent = scenario_cost(inst, st.sel);
    std::vector<int> cands;
    for (int oi = 0; oi < static_cast<int>(inst.options.size()); ++oi)
      if (!st.sel.selected(oi) && spent + inst.options[oi].cost <= budget + kBudgetSlack)
        cands.push_back(oi);
    if (cands.empty()) break;

    std::vector<double> gain(cands.size());
    parallel_for(cands.size(), threads, [&](std::size_t i) {
      gain[i] = eca_with_option(st, cands[i]);
    });

    int best = -1;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      const double ratio = (gain[i] - st.eca) / inst.options[cands[i]].cost;
      if (best < 0 || better_buy(inst, best_ratio, best, ratio, cands[i])) {
        best = cands[i];
        best_ratio = ratio;
      }
    }
    buy_option(st, best, threads);
    trace.push_back({++step, true, best, best_ratio, st.eca});
  }
}

}  // namespace

GreedyResult greedy_incremental(const Instance& inst, double budget, int threads) {
  EvalState st = make_state(inst, Scenario(static_cast<int>(inst.options.size())), threads);
  GreedyResult res;
  res.baseline_eca = st.eca;
  int step = 0;
  incremental_fill(st, budget, step, res.trace, threads);
  res.solution = to_solution(st);
  return res;
}

GreedyResult greedy_decremental(const Instance& inst, double budget, int threads) {
  const int k = static_cast<int>(inst.options.size());
  Scenario all(k);
  for (int oi = 0; oi < k; ++oi) all.set(oi, true);

  GreedyResult res;
  res.baseline_eca = eca(apply_scenario(inst, Scenario(k)), threads).eca;

  EvalState st = make_state(inst, std::move(all), threads);
  int step = 0;
  while (scenario_cost(inst, st.sel) > budget + kBudgetSlack) {
    std::vector<int> cands;
    for (int oi = 0; oi < k; ++oi)
      if (st.sel.selected(oi)) cands.push_back(oi);

    std::vector<double> without(cands.size());
    parallel_for(cands.size(), threads, [&](std::size_t i) {
      without[i] = eca_without_option(st, cands[i]);
    });

    int worst = -1;
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      const double ratio = (st.eca - without[i]) / inst.options[cands[i]].cost;
      if (worst < 0 || better_drop(inst, worst_ratio, worst, ratio, cands[i])) {
        worst = cands[i];
        worst_ratio = ratio;
      }
    }
    drop_option(st, worst, threads);
    res.trace.push_back({++step, false, worst, worst_ratio, st.eca});
  }

  // Whatever budget the last removal freed up gets spent again, with the
  // ratios re-evaluated against the current state.
  incremental_fill(st, budget, step, res.trace, threads);
  res.solution = to_solution(st);
  return res;
}

GreedyResult greedy_static_incremental(const Instance& inst, double budget, int threads) {
  const int k = static_cast<int>(inst.options.size());
  EvalState st = make_state(inst, Scenario(k), threads);
  GreedyResult res;
  res.baseline_eca = st.eca;

  std::vector<double> ratio(static_cast<std::size_t>(k));
  parallel_for(static_cast<std::size_t>(k), threads, [&](std::size_t oi) {
    ratio[oi] = (eca_with_option(st, static_cast<int>(oi)) - st.eca) / inst.options[oi].cost;
  });
  std::vector<int> order(static_cast<std::size_t>(k));
  for (int oi = 0; oi < k; ++oi) order[oi] = oi;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (ratio[a] != ratio[b]) return ratio[a] > ratio[b];
    return inst.options[a].id < inst.options[b].id;
  });

  int step = 0;
  double spent = 0.0;
  for (int oi : order) {
    if (spent + inst.options[oi].cost > budget + kBudgetSlack) continue;
    buy_option(st, oi, threads);
    spent += inst.options[oi].cost;
    res.trace.push_back({++step, true, oi, ratio[oi], st.eca});
  }
  res.solution = to_solution(st);
  return res;
}

GreedyResult greedy_static_decremental(const Instance& inst, double budget, int threads) {
  const int k = static_cast<int>(inst.options.size());
  Scenario all(k);
  for (int oi = 0; oi < k; ++oi) all.set(oi, true);

  GreedyResult res;
  res.baseline_eca = eca(apply_scenario(inst, Scenario(k)), threads).eca;

  EvalState st = make_state(inst, std::move(all), threads);
  std::vector<double> ratio(static_cast<std::size_t>(k));
  parallel_for(static_cast<std::size_t>(k), threads, [&](std::size_t oi) {
    ratio[oi] = (st.eca - eca_without_option(st, static_cast<int>(oi))) /
                inst.options[oi].cost;
  });

  std::vector<int> order(static_cast<std::size_t>(k));
  for (int oi = 0; oi < k; ++oi) order[oi] = oi;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (ratio[a] != ratio[b]) return ratio[a] < ratio[b];
    return inst.options[a].id < inst.options[b].id;
  });

  int step = 0;
  std::vector<int> dropped;
  for (int oi : order) {
    if (scenario_cost(inst, st.sel) <= budget + kBudgetSlack) break;
    drop_option(st, oi, threads);
    dropped.push_back(oi);
    res.trace.push_back({++step, false, oi, ratio[oi], st.eca});
  }

  // Refill from the same static ranking, most valuable first.
  std::sort(dropped.begin(), dropped.end(), [&](int a, int b) {
    if (ratio[a] != ratio[b]) return ratio[a] > ratio[b];
    return inst.options[a].id < inst.options[b].id;
  });
  for (int oi : dropped) {
    if (scenario_cost(inst, st.sel) + inst.options[oi].cost > budget + kBudgetSlack) continue;
    buy_option(st, oi, threads);
    res.trace.push_back({++step, true, oi, ratio[oi], st.eca});
  }
  res.solution = to_solution(st);
  return res;
}

GreedyResult run_greedy(GreedyKind kind, const Instance& inst, double budget, int threads) {
  switch (kind) {
    case GreedyKind::incremental:
      return greedy_incremental(inst, budget, threads);
    case GreedyKind::decremental:
      return greedy_decremental(inst, budget, threads);
    case GreedyKind::static_incremental:
      return greedy_static_incremental(inst, budget, threads);
    case GreedyKind::static_decremental:
      return greedy_static_decremental(inst, budget, threads);
  }
  throw std::invalid_argument("run_greedy: unknown kind");
}

const char* greedy_kind_name(GreedyKind kind) {
  switch (kind) {
    case GreedyKind::incremental:
      return "ig";
    case GreedyKind::decremental:
      return "dg";
    case GreedyKind::static_incremental:
      return "si";
    case GreedyKind::static_decremental:
      return "sd";
  }
  return "?";
}

}  // namespace ecaopt
