#pragma once

#include <cstddef>

// Dense inner-loop kernels behind the distance-matrix refresh and the
// weighted reliability sums. Every kernel exists in a scalar reference
// form and, on x86-64, an AVX2 form. Both forms run the exact same
// floating-point operation schedule (fixed 4-lane compensated
// accumulation, no FMA contraction), so their results are bit-identical
// and the active variant can be chosen at runtime without affecting any
// reported number.

namespace ecaopt::kernels {

// dst[i] = min(dst[i], src[i] + shift) for i in [0, n).
// A +inf shift is a no-op. Inputs must be non-negative or +inf and must
// not contain NaN; lengths in this codebase are normalized so no -0.0
// appears.
using MinPlusFn = void (*)(double* dst, const double* src, double shift, std::size_t n);

// Returns sum_i w[i] * p[i] under the fixed 4-lane Kahan schedule.
using WeightedSumFn = double (*)(const double* w, const double* p, std::size_t n);

struct KernelTable {
  MinPlusFn min_plus_update;
  WeightedSumFn weighted_sum;
  const char* name;
};

enum class Isa { scalar, avx2 };

bool isa_supported(Isa isa);

// Force a specific implementation (tests, ECAOPT_KERNEL=scalar|avx2).
// Throws CapabilityError if the requested ISA is not available here.
void force_isa(Isa isa);

// Active table. First call resolves: ECAOPT_KERNEL env override if set,
// otherwise the widest supported ISA. Subsequent calls are a load.
const KernelTable& active();

const char* active_name();

}  // namespace ecaopt::kernels
