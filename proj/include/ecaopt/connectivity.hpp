#pragma once

#include <vector>

#include "ecaopt/instance.hpp"

namespace ecaopt {

// Shortest-path distances stored one row per target: row(t)[s] = d(s, t)
// under the -log probability lengths, so exp(-row(t)[s]) is the best
// reliability of any s-t path. Unreachable pairs hold +inf.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(int n);

  int size() const { return n_; }
  double* row(int t) { return data_.data() + static_cast<std::size_t>(t) * n_; }
  const double* row(int t) const { return data_.data() + static_cast<std::size_t>(t) * n_; }
  double at(int s, int t) const { return row(t)[s]; }

 private:
  int n_ = 0;
  std::vector<double> data_;
};

struct EcaValue {
  double eca = 0.0;
  double squared = 0.0;
};

// Distances from every vertex to t (one reverse Dijkstra).
std::vector<double> distances_to_target(const EffectiveGraph& g, int t);

// exp(-d) of the above: max path reliability into t.
std::vector<double> reliabilities_to_target(const EffectiveGraph& g, int t);

DistanceMatrix build_distance_matrix(const EffectiveGraph& g, int threads = 1);

// f_t = sum_s w_s * Pi(s, t); the target's own term contributes w_t.
double f_t(const EffectiveGraph& g, int t);
std::vector<double> per_target_f(const DistanceMatrix& m, const std::vector<double>& weights,
                                 int threads = 1);

EcaValue eca_from_matrix(const DistanceMatrix& m, const std::vector<double>& weights,
                         int threads = 1);
EcaValue eca(const EffectiveGraph& g, int threads = 1);

// Probability of connectivity: ECA^2 / area^2. Throws on area <= 0.
double pc(const EcaValue& value, double landscape_area);

// Refreshes all rows after the single arc (u, v) drops from old_length
// to new_length: d(s,t) = min(d(s,t), d(s,u) + new_length + d(v,t)).
// O(|V|^2). Throws std::invalid_argument when new_length > old_length
// (an increase needs a from-scratch rebuild).
void apsp_decrease_update(DistanceMatrix& m, int u, int v, double old_length, double new_length,
                          int threads = 1);

}  // namespace ecaopt
