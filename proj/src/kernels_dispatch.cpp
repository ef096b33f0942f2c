#include <atomic>
#include <cstdlib>
#include <string>

#include "ecaopt/errors.hpp"
#include "ecaopt/kernels.hpp"

namespace ecaopt::kernels {

extern const KernelTable kScalarTable;
#if defined(ECAOPT_HAVE_AVX2_TU)
extern const KernelTable kAvx2Table;
#endif

namespace {

std::atomic<const KernelTable*> g_active{nullptr};

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &kScalarTable;
    case Isa::avx2:
#if defined(ECAOPT_HAVE_AVX2_TU)
      if (__builtin_cpu_supports("avx2")) return &kAvx2Table;
#endif
      return nullptr;
  }
  return nullptr;
}

const KernelTable* resolve_default() {
  if (const char* env = std::getenv("ECAOPT_KERNEL")) {
    std::string want(env);
    if (want == "scalar") return table_for(Isa::scalar);
    if (want == "avx2") {
      const KernelTable* t = table_for(Isa::avx2);
      if (!t) throw CapabilityError("ECAOPT_KERNEL=avx2 requested but AVX2 is unavailable");
      return t;
    }
    if (!want.empty() && want != "auto")
      throw CapabilityError("unknown ECAOPT_KERNEL value '" + want + "' (scalar|avx2|auto)");
  }
  if (const KernelTable* t = table_for(Isa::avx2)) return t;
  return table_for(Isa::scalar);
}

}  // namespace

bool isa_supported(Isa isa) { return table_for(isa) != nullptr; }

void force_isa(Isa isa) {
  const KernelTable* t = table_for(isa);
  if (!t) throw CapabilityError("requested kernel ISA is not supported on this machine");
  g_active.store(t, std::memory_order_release);
}

const KernelTable& active() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (!t) {
    t = resolve_default();
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

const char* active_name() { return active().name; }

}  // namespace ecaopt::kernels
