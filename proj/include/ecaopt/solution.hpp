#pragma once

#include <vector>

#include "ecaopt/instance.hpp"

namespace ecaopt {

// A concrete purchase decision plus its evaluated quality. Produced by the
// greedy heuristics, the exhaustive search, and MIP solution decoding.
struct Solution {
  Scenario scenario;
  std::vector<int> selected;  // option indices, ascending
  double cost = 0.0;
  double eca = 0.0;
  double eca_squared = 0.0;
  std::vector<double> per_target_f;  // per-vertex f_t; filled where cheap to have
};

}  // namespace ecaopt
