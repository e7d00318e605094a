#include "markagg/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace markagg::simd {
namespace {

std::atomic<const KernelTable*> g_active{nullptr};
std::atomic<Isa> g_active_isa{Isa::scalar};

void install(Isa isa) noexcept {
  g_active_isa.store(isa, std::memory_order_relaxed);
  g_active.store(table_for(isa), std::memory_order_release);
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

const KernelTable* table_for(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return &detail::scalar_table;
    case Isa::avx2:
#if defined(MARKAGG_HAVE_AVX2)
      return &detail::avx2_table;
#else
      return nullptr;
#endif
    case Isa::neon:
#if defined(MARKAGG_HAVE_NEON)
      return &detail::neon_table;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

bool cpu_supports(Isa isa) noexcept {
  if (table_for(isa) == nullptr) return false;
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
      // Advanced SIMD is mandatory on aarch64.
      return true;
  }
  return false;
}

Isa detect_isa() noexcept {
  if (const char* env = std::getenv("MARKAGG_SIMD")) {
    const std::string requested(env);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (requested == to_string(isa) && cpu_supports(isa)) return isa;
    }
  }
  if (cpu_supports(Isa::avx2)) return Isa::avx2;
  if (cpu_supports(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

const KernelTable& kernels() noexcept {
  const KernelTable* table = g_active.load(std::memory_order_acquire);
  if (table == nullptr) {
    install(detect_isa());
    table = g_active.load(std::memory_order_acquire);
  }
  return *table;
}

Isa active_isa() noexcept {
  kernels();
  return g_active_isa.load(std::memory_order_relaxed);
}

bool set_isa(Isa isa) noexcept {
  if (!cpu_supports(isa)) return false;
  install(isa);
  return true;
}

}  // namespace markagg::simd
