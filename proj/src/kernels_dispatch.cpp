#include <atomic>
#include <cstdlib>
#include <string>

#include "giso/error.hpp"
#include "giso/kernels.hpp"

namespace giso::kernels {

const KernelTable* avx2_table_unchecked();

namespace {

const KernelTable* select_default() {
  const char* env = std::getenv("GISO_SIMD");
  if (env != nullptr && std::string(env) == "scalar") return &scalar_table();
  if (const KernelTable* t = avx2_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{select_default()};
  return slot;
}

}  // namespace

std::string to_string(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

bool cpu_supports(Isa isa) {
  if (isa == Isa::kScalar) return true;
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* avx2_table() {
  static const KernelTable* table = cpu_supports(Isa::kAvx2) ? avx2_table_unchecked() : nullptr;
  return table;
}

const KernelTable& active() { return *active_slot().load(std::memory_order_acquire); }

void set_active(Isa isa) {
  if (isa == Isa::kScalar) {
    active_slot().store(&scalar_table(), std::memory_order_release);
    return;
  }
  const KernelTable* t = avx2_table();
  if (t == nullptr) throw InputError("AVX2 kernels are not available on this CPU or build");
  active_slot().store(t, std::memory_order_release);
}

ScopedIsa::ScopedIsa(Isa isa) : previous_(active().isa) { set_active(isa); }

ScopedIsa::~ScopedIsa() { set_active(previous_); }

}  // namespace giso::kernels
