#include <limits>

#include "ecaopt/kernels.hpp"
#include "kernels_detail.hpp"

namespace ecaopt::kernels {

namespace {

void min_plus_update_scalar(double* dst, const double* src, double shift, std::size_t n) {
  if (shift == std::numeric_limits<double>::infinity()) return;
  for (std::size_t i = 0; i < n; ++i) {
    double v = src[i] + shift;
    dst[i] = v < dst[i] ? v : dst[i];
  }
}

double weighted_sum_scalar(const double* w, const double* p, std::size_t n) {
  double lane_sum[4] = {0.0, 0.0, 0.0, 0.0};
  double lane_comp[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    for (int lane = 0; lane < 4; ++lane) {
      double y = w[i + lane] * p[i + lane] - lane_comp[lane];
      double t = lane_sum[lane] + y;
      lane_comp[lane] = (t - lane_sum[lane]) - y;
      lane_sum[lane] = t;
    }
  }
  detail::weighted_sum_tail(w, p, n4, n, lane_sum, lane_comp);
  return detail::merge_lanes(lane_sum, lane_comp);
}

}  // namespace

extern const KernelTable kScalarTable;
const KernelTable kScalarTable = {&min_plus_update_scalar, &weighted_sum_scalar, "scalar"};

}  // namespace ecaopt::kernels
