#include <immintrin.h>

#include <limits>

#include "ecaopt/kernels.hpp"
#include "kernels_detail.hpp"

// Compiled with -mavx2 -ffp-contract=off. The vector body mirrors the
// scalar reference lane for lane: same multiply/add/sub sequence, no
// FMA, so results are bit-identical to the scalar kernel.

namespace ecaopt::kernels {

namespace {

void min_plus_update_avx2(double* dst, const double* src, double shift, std::size_t n) {
  if (shift == std::numeric_limits<double>::infinity()) return;
  __m256d vshift = _mm256_set1_pd(shift);
  std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d d = _mm256_loadu_pd(dst + i);
    __m256d v = _mm256_add_pd(_mm256_loadu_pd(src + i), vshift);
    // min_pd picks the second operand on ties; with v==d the stored bits
    // match the scalar kernel because no -0.0 ever reaches a length.
    _mm256_storeu_pd(dst + i, _mm256_min_pd(v, d));
  }
  for (std::size_t i = n4; i < n; ++i) {
    double v = src[i] + shift;
    dst[i] = v < dst[i] ? v : dst[i];
  }
}

double weighted_sum_avx2(const double* w, const double* p, std::size_t n) {
  __m256d vsum = _mm256_setzero_pd();
  __m256d vcomp = _mm256_setzero_pd();
  std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d y = _mm256_sub_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(p + i)), vcomp);
    __m256d t = _mm256_add_pd(vsum, y);
    vcomp = _mm256_sub_pd(_mm256_sub_pd(t, vsum), y);
    vsum = t;
  }
  alignas(32) double lane_sum[4];
  alignas(32) double lane_comp[4];
  _mm256_store_pd(lane_sum, vsum);
  _mm256_store_pd(lane_comp, vcomp);
  detail::weighted_sum_tail(w, p, n4, n, lane_sum, lane_comp);
  return detail::merge_lanes(lane_sum, lane_comp);
}

}  // namespace

extern const KernelTable kAvx2Table;
const KernelTable kAvx2Table = {&min_plus_update_avx2, &weighted_sum_avx2, "avx2"};

}  // namespace ecaopt::kernels
