#include "ecaopt/oracle.hpp"

#include <cmath>

#include "ecaopt/connectivity.hpp"
#include "ecaopt/kernels.hpp"

namespace ecaopt {

Solution evaluate_scenario(const Instance& inst, const Scenario& scenario, int threads) {
  const EffectiveGraph eff = apply_scenario(inst, scenario);
  const DistanceMatrix m = build_distance_matrix(eff, threads);
  const std::vector<double> f = per_target_f(m, eff.vertex_weight, threads);
  const double squared = kernels::active().weighted_sum(eff.vertex_weight.data(), f.data(),
                                                        f.size());
  Solution sol;
  sol.scenario = scenario;
  for (int oi = 0; oi < scenario.size(); ++oi)
    if (scenario.selected(oi)) sol.selected.push_back(oi);
  sol.cost = scenario_cost(inst, scenario);
  sol.eca_squared = squared;
  sol.eca = std::sqrt(squared < 0.0 ? 0.0 : squared);
  sol.per_target_f = f;
  return sol;
}

}  // namespace ecaopt
