#include "ecaopt/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecaopt/connectivity.hpp"
#include "ecaopt/errors.hpp"
#include "ecaopt/greedy.hpp"
#include "ecaopt/kernels.hpp"
#include "ecaopt/parallel.hpp"
#include "ecaopt/preprocessing.hpp"

namespace ecaopt {

namespace {

constexpr double kSlack = 1e-9;

// Blocks are a function of the option count alone, never of the thread
// count: every run walks the same subsets in the same order inside each
// block, so results are bitwise reproducible however the blocks get
// scheduled.
int block_bits_for(int n) { return n >= 8 ? 4 : 0; }

// Vertex options sit at the fast-flipping low positions of the Gray walk
// (a weight swap costs nothing); arc options flip rarely and the
// high-order ones never flip inside a block.
std::vector<int> enumeration_order(const Instance& inst) {
  std::vector<int> order;
  for (int oi = 0; oi < static_cast<int>(inst.options.size()); ++oi)
    if (inst.options[oi].kind == OptionKind::vertex_upgrade) order.push_back(oi);
  for (int oi = 0; oi < static_cast<int>(inst.options.size()); ++oi)
    if (inst.options[oi].kind == OptionKind::arc_upgrade) order.push_back(oi);
  return order;
}

std::vector<std::string> sorted_selected_ids(const Instance& inst, const Scenario& sc) {
  std::vector<std::string> ids;
  for (int oi = 0; oi < sc.size(); ++oi)
    if (sc.selected(oi)) ids.push_back(inst.options[oi].id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

struct Champion {
  bool valid = false;
  double squared = 0.0;
  double cost = 0.0;
  Scenario scenario{0};
};

bool improves(const Instance& inst, const Champion& incumbent, double squared, double cost,
              const Scenario& cand) {
  if (!incumbent.valid) return true;
  if (squared != incumbent.squared) return squared > incumbent.squared;
  if (cost != incumbent.cost) return cost < incumbent.cost;
  return sorted_selected_ids(inst, cand) < sorted_selected_ids(inst, incumbent.scenario);
}

// Walks every subset whose high `block_bits` positions (of `order`) equal
// `block`, Gray-coding the low positions so consecutive subsets differ by
// one option. visit(scenario, cost, eca_squared) fires for subsets within
// prune_budget; the graph state is kept current either way.
template <typename Visit>
void walk_block(const Instance& inst, const std::vector<int>& order, int block, int block_bits,
                double prune_budget, const std::vector<TargetReduction>* reds, Visit&& visit) {
  const int n = static_cast<int>(order.size());
  const int low = n - block_bits;

  Scenario cur(n);
  for (int j = 0; j < block_bits; ++j)
    if ((block >> j) & 1) cur.set(order[low + j], true);

  const bool matrix_path = reds == nullptr;
  EffectiveGraph eff;
  DistanceMatrix matrix;
  if (matrix_path) {
    eff = apply_scenario(inst, cur);
    matrix = build_distance_matrix(eff, 1);
  }

  const auto eval_squared = [&]() {
    if (matrix_path) return eca_from_matrix(matrix, eff.vertex_weight, 1).squared;
    const int nv = static_cast<int>(inst.vertices.size());
    std::vector<double> f(static_cast<std::size_t>(nv));
    std::vector<double> w(static_cast<std::size_t>(nv));
    for (int t = 0; t < nv; ++t) {
      f[t] = f_t_reduced((*reds)[t].graph, cur);
      const Vertex& v = inst.vertices[t];
      const int vo = inst.vertex_option(t);
      w[t] = (vo >= 0 && cur.selected(vo)) ? v.improvement->weight : v.weight;
    }
    return kernels::active().weighted_sum(w.data(), f.data(), f.size());
  };

  double cost = scenario_cost(inst, cur);
  if (cost <= prune_budget + kSlack) visit(cur, cost, eval_squared());

  const std::uint64_t steps = std::uint64_t{1} << low;
  for (std::uint64_t s = 1; s < steps; ++s) {
    const int oi = order[std::countr_zero(s)];
    const ImprovementOption& o = inst.options[oi];
    const bool on = !cur.selected(oi);
    if (matrix_path) {
      if (o.kind == OptionKind::vertex_upgrade) {
        const Vertex& v = inst.vertices[o.vertex];
        eff.vertex_weight[o.vertex] = on ? v.improvement->weight : v.weight;
      } else if (on) {
        for (int a : o.arcs) {
          const Arc& arc = inst.arcs[a];
          const double nl = probability_to_length(arc.improvement->probability);
          apsp_decrease_update(matrix, arc.source, arc.target, eff.arc_length[a], nl, 1);
          eff.arc_length[a] = nl;
          eff.arc_probability[a] = arc.improvement->probability;
        }
      } else {
        for (int a : o.arcs) {
          const Arc& arc = inst.arcs[a];
          eff.arc_length[a] = probability_to_length(arc.probability);
          eff.arc_probability[a] = arc.probability;
        }
        matrix = build_distance_matrix(eff, 1);
      }
    }
    cur.flip(oi);
    cost = scenario_cost(inst, cur);
    if (cost <= prune_budget + kSlack) visit(cur, cost, eval_squared());
  }
}

void check_size(const Instance& inst) {
  const int n = static_cast<int>(inst.options.size());
  if (n > kMaxExhaustiveOptions)
    throw CapabilityError("exhaustive search handles at most " +
                          std::to_string(kMaxExhaustiveOptions) + " options, instance has " +
                          std::to_string(n));
}

}  // namespace

Solution exhaustive_optimum(const Instance& inst, double budget, const OracleOptions& opts,
                            std::uint64_t* evaluated_subsets) {
  check_size(inst);
  if (!(budget >= 0.0))
    throw std::invalid_argument("exhaustive_optimum: budget must be >= 0");

  const std::vector<int> order = enumeration_order(inst);
  const int n = static_cast<int>(order.size());
  const int bits = block_bits_for(n);
  const int blocks = 1 << bits;

  std::vector<TargetReduction> reds;
  if (opts.use_reductions) reds = reduce_all(inst, opts.threads);
  const std::vector<TargetReduction>* redp = opts.use_reductions ? &reds : nullptr;

  std::vector<Champion> best(static_cast<std::size_t>(blocks));
  std::vector<std::uint64_t> visits(static_cast<std::size_t>(blocks), 0);
  parallel_for(static_cast<std::size_t>(blocks), opts.threads, [&](std::size_t b) {
    Champion ch;
    walk_block(inst, order, static_cast<int>(b), bits, budget, redp,
               [&](const Scenario& sc, double cost, double sq) {
                 ++visits[b];
                 if (improves(inst, ch, sq, cost, sc)) {
                   ch.valid = true;
                   ch.squared = sq;
                   ch.cost = cost;
                   ch.scenario = sc;
                 }
               });
    best[b] = std::move(ch);
  });

  if (evaluated_subsets) {
    *evaluated_subsets = 0;
    for (std::uint64_t v : visits) *evaluated_subsets += v;
  }
  Champion overall;
  for (const Champion& ch : best) {
    if (!ch.valid) continue;
    if (improves(inst, overall, ch.squared, ch.cost, ch.scenario)) overall = ch;
  }
  return evaluate_scenario(inst, overall.scenario, opts.threads);
}

std::vector<SweepPoint> exhaustive_budget_sweep(const Instance& inst,
                                                const std::vector<double>& budgets,
                                                const OracleOptions& opts) {
  check_size(inst);
  if (budgets.empty()) return {};
  double prune = 0.0;
  for (double b : budgets) {
    if (!(b >= 0.0))
      throw std::invalid_argument("exhaustive_budget_sweep: budgets must be >= 0");
    prune = std::max(prune, b);
  }

  const std::vector<int> order = enumeration_order(inst);
  const int n = static_cast<int>(order.size());
  const int bits = block_bits_for(n);
  const int blocks = 1 << bits;

  std::vector<TargetReduction> reds;
  if (opts.use_reductions) reds = reduce_all(inst, opts.threads);
  const std::vector<TargetReduction>* redp = opts.use_reductions ? &reds : nullptr;

  std::vector<std::vector<double>> best(static_cast<std::size_t>(blocks),
                                        std::vector<double>(budgets.size(), -1.0));
  parallel_for(static_cast<std::size_t>(blocks), opts.threads, [&](std::size_t b) {
    std::vector<double>& mine = best[b];
    walk_block(inst, order, static_cast<int>(b), bits, prune, redp,
               [&](const Scenario&, double cost, double sq) {
                 for (std::size_t j = 0; j < budgets.size(); ++j)
                   if (cost <= budgets[j] + kSlack && sq > mine[j]) mine[j] = sq;
               });
  });

  std::vector<SweepPoint> points(budgets.size());
  for (std::size_t j = 0; j < budgets.size(); ++j) {
    double sq = -1.0;
    for (int b = 0; b < blocks; ++b) sq = std::max(sq, best[b][j]);
    points[j].budget = budgets[j];
    points[j].opt_eca_squared = sq;
    points[j].opt_eca = sq > 0.0 ? std::sqrt(sq) : 0.0;
  }
  return points;
}

OracleReport budget_sweep(const Instance& inst, const std::vector<double>& budgets,
                          const OracleOptions& opts) {
  check_size(inst);

  OracleReport rep;
  rep.baseline_eca = evaluate_scenario(inst, Scenario(static_cast<int>(inst.options.size())),
                                       opts.threads)
                         .eca;
  if (budgets.empty()) {
    rep.best = evaluate_scenario(inst, Scenario(static_cast<int>(inst.options.size())),
                                 opts.threads);
    return rep;
  }

  double prune = 0.0;
  for (double b : budgets) {
    if (!(b >= 0.0)) throw std::invalid_argument("budget_sweep: budgets must be >= 0");
    prune = std::max(prune, b);
  }

  const std::vector<int> order = enumeration_order(inst);
  const int n = static_cast<int>(order.size());
  const int bits = block_bits_for(n);
  const int blocks = 1 << bits;

  std::vector<TargetReduction> reds;
  if (opts.use_reductions) reds = reduce_all(inst, opts.threads);
  const std::vector<TargetReduction>* redp = opts.use_reductions ? &reds : nullptr;

  std::vector<std::vector<double>> best(static_cast<std::size_t>(blocks),
                                        std::vector<double>(budgets.size(), -1.0));
  std::vector<Champion> champs(static_cast<std::size_t>(blocks));
  std::vector<std::uint64_t> visits(static_cast<std::size_t>(blocks), 0);
  parallel_for(static_cast<std::size_t>(blocks), opts.threads, [&](std::size_t b) {
    std::vector<double>& mine = best[b];
    Champion& ch = champs[b];
    walk_block(inst, order, static_cast<int>(b), bits, prune, redp,
               [&](const Scenario& sc, double cost, double sq) {
                 ++visits[b];
                 for (std::size_t j = 0; j < budgets.size(); ++j)
                   if (cost <= budgets[j] + kSlack && sq > mine[j]) mine[j] = sq;
                 if (improves(inst, ch, sq, cost, sc)) {
                   ch.valid = true;
                   ch.squared = sq;
                   ch.cost = cost;
                   ch.scenario = sc;
                 }
               });
  });

  for (std::uint64_t v : visits) rep.evaluated_subsets += v;
  Champion overall;
  for (const Champion& ch : champs) {
    if (!ch.valid) continue;
    if (improves(inst, overall, ch.squared, ch.cost, ch.scenario)) overall = ch;
  }
  rep.best = evaluate_scenario(inst, overall.scenario, opts.threads);

  rep.rows.resize(budgets.size());
  for (std::size_t j = 0; j < budgets.size(); ++j) {
    SweepRow& row = rep.rows[j];
    row.budget = budgets[j];
    double sq = -1.0;
    for (int b = 0; b < blocks; ++b) sq = std::max(sq, best[b][j]);
    row.opt_eca = sq > 0.0 ? std::sqrt(sq) : 0.0;

    const double gain = row.opt_eca - rep.baseline_eca;
    auto ratio = [&](double alg) {
      return gain > 0.0 ? (alg - rep.baseline_eca) / gain : 1.0;
    };
    row.ig_eca = run_greedy(GreedyKind::incremental, inst, budgets[j], opts.threads).solution.eca;
    row.dg_eca = run_greedy(GreedyKind::decremental, inst, budgets[j], opts.threads).solution.eca;
    row.si_eca =
        run_greedy(GreedyKind::static_incremental, inst, budgets[j], opts.threads).solution.eca;
    row.sd_eca =
        run_greedy(GreedyKind::static_decremental, inst, budgets[j], opts.threads).solution.eca;
    row.ig_ratio = ratio(row.ig_eca);
    row.dg_ratio = ratio(row.dg_eca);
    row.si_ratio = ratio(row.si_eca);
    row.sd_ratio = ratio(row.sd_eca);
  }
  return rep;
}

}  // namespace ecaopt
