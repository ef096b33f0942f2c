#pragma once

#include <cstddef>

// Shared pieces of the kernel implementations. Both the scalar and the
// AVX2 translation units include this header and are compiled with
// -ffp-contract=off, so the scalar tail handling and the lane merge are
// the same instruction-for-instruction arithmetic in every variant.

namespace ecaopt::kernels::detail {

struct Kahan {
  double sum = 0.0;
  double comp = 0.0;

  inline void add(double value) {
    double y = value - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

// Fold four per-lane Kahan accumulators into one value. The order is
// fixed (sums lane 0..3, then residuals lane 0..3) so that any two
// implementations sharing per-lane states produce the same double.
inline double merge_lanes(const double lane_sum[4], const double lane_comp[4]) {
  Kahan total;
  for (int j = 0; j < 4; ++j) total.add(lane_sum[j]);
  for (int j = 0; j < 4; ++j) total.add(-lane_comp[j]);
  return total.sum;
}

// Scalar tail for weighted_sum: elements [n4, n) continue the lane
// pattern (element i belongs to lane i % 4; n4 is a multiple of 4).
inline void weighted_sum_tail(const double* w, const double* p, std::size_t n4, std::size_t n,
                              double lane_sum[4], double lane_comp[4]) {
  for (std::size_t i = n4; i < n; ++i) {
    int lane = static_cast<int>(i & 3);
    double y = w[i] * p[i] - lane_comp[lane];
    double t = lane_sum[lane] + y;
    lane_comp[lane] = (t - lane_sum[lane]) - y;
    lane_sum[lane] = t;
  }
}

}  // namespace ecaopt::kernels::detail
