#pragma once

#include <cstdint>
#include <vector>

#include "ecaopt/instance.hpp"
#include "ecaopt/solution.hpp"

namespace ecaopt {

// Full subset enumeration stops being a sane oracle well before memory
// does; anything larger should go through the MIP.
inline constexpr int kMaxExhaustiveOptions = 22;

struct OracleOptions {
  int threads = 1;
  // Evaluate ECA^2 through the per-target reduced graphs instead of the
  // distance matrix. Much slower; exists so tests can cross-check the two.
  bool use_reductions = false;
};

// Fully evaluates a single selection: cost, ECA, per-target f.
Solution evaluate_scenario(const Instance& inst, const Scenario& scenario, int threads = 1);

// The best affordable subset of options. Ties go to the cheaper selection,
// then to the lexicographically smaller set of option ids. Throws
// CapabilityError beyond kMaxExhaustiveOptions options.
Solution exhaustive_optimum(const Instance& inst, double budget,
                            const OracleOptions& opts = {},
                            std::uint64_t* evaluated_subsets = nullptr);

struct SweepPoint {
  double budget = 0.0;
  double opt_eca = 0.0;
  double opt_eca_squared = 0.0;
};

// Optimal values for several budgets out of one enumeration pass.
std::vector<SweepPoint> exhaustive_budget_sweep(const Instance& inst,
                                                const std::vector<double>& budgets,
                                                const OracleOptions& opts = {});

// One line of the optimum-vs-heuristics comparison. Ratios are gains over
// the empty-selection baseline, (alg - base) / (opt - base), defined as 1
// when the optimum gains nothing.
struct SweepRow {
  double budget = 0.0;
  double opt_eca = 0.0;
  double ig_eca = 0.0, dg_eca = 0.0, si_eca = 0.0, sd_eca = 0.0;
  double ig_ratio = 1.0, dg_ratio = 1.0, si_ratio = 1.0, sd_ratio = 1.0;
};

struct OracleReport {
  Solution best;  // optimum at the largest budget in the sweep
  std::uint64_t evaluated_subsets = 0;
  double baseline_eca = 0.0;
  std::vector<SweepRow> rows;  // in the caller's budget order
};

// Runs the oracle and all four greedy heuristics across the budgets.
OracleReport budget_sweep(const Instance& inst, const std::vector<double>& budgets,
                          const OracleOptions& opts = {});

}  // namespace ecaopt
