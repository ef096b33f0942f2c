#pragma once

#include <cstdint>

#include "ecaopt/instance.hpp"

namespace ecaopt {

// Star of k broken two-edge branches (free leaf weight 1 each) plus k cheap
// stubs of weight epsilon. Buying a stub pays off instantly, a branch only
// pays once both its edges are bought, so ratio greedies chase the stubs.
Instance make_ig_bad(int k, double epsilon = 0.01);

// A k-leaf star and a k-edge path to one slightly heavier leaf. Removing
// the lexicographically first path edge strands the rest of the path, and
// a decremental greedy then cascades down the whole path.
Instance make_dg_bad(int k);

// Combines the two traps: k two-edge branches against one 2k-edge path, so
// incremental and decremental greedies fail on the same instance.
Instance make_both_bad(int k, double epsilon = 0.01);

struct RandomInstanceParams {
  int n = 200;
  double mean_degree = 8.0;
  double improvable_fraction = 0.2;
  std::uint64_t seed = 1;
};

// Random geometric graph on the unit square, largest connected component
// kept. Reliabilities decay with distance, calibrated so the median edge
// sits at 1/2; a fraction of the (directed) arcs can be upgraded to the
// square root of their reliability at unit cost. Bit-reproducible for a
// given parameter set on any platform.
Instance make_random_instance(const RandomInstanceParams& params = {});

}  // namespace ecaopt
