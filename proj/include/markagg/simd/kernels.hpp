#pragma once

// Vector kernels used by the forward recursions and the stationary solver.
//
// Every kernel has a portable scalar reference and, where the target allows
// it, an AVX2+FMA (x86-64) or NEON (aarch64) variant. The variant is chosen
// once at first use from the CPU features; MARKAGG_SIMD=scalar in the
// environment or set_isa() forces a specific table. All variants agree with
// the scalar reference up to floating-point reassociation.

#include <cstddef>
#include <span>
#include <string_view>

namespace markagg::simd {

enum class Isa { scalar, avx2, neon };

std::string_view to_string(Isa isa) noexcept;

struct KernelTable {
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // sum_i x[i]
  double (*sum)(const double* x, std::size_t n);
  // x[i] *= a
  void (*scale)(double a, double* x, std::size_t n);
  // sum_i |x[i] - y[i]|
  double (*l1_distance)(const double* x, const double* y, std::size_t n);
};

// Tables compiled into this binary. Returns nullptr for an ISA that was not
// compiled in.
const KernelTable* table_for(Isa isa) noexcept;

// True when the running CPU can execute the given table.
bool cpu_supports(Isa isa) noexcept;

// Best supported ISA on this CPU, honoring MARKAGG_SIMD.
Isa detect_isa() noexcept;

Isa active_isa() noexcept;

// Switches the active table. Returns false (and leaves the table unchanged)
// if the ISA is unavailable.
bool set_isa(Isa isa) noexcept;

const KernelTable& kernels() noexcept;

inline void axpy(double a, std::span<const double> x, std::span<double> y) noexcept {
  kernels().axpy(a, x.data(), y.data(), x.size());
}
inline double dot(std::span<const double> x, std::span<const double> y) noexcept {
  return kernels().dot(x.data(), y.data(), x.size());
}
inline double sum(std::span<const double> x) noexcept {
  return kernels().sum(x.data(), x.size());
}
inline void scale(double a, std::span<double> x) noexcept {
  kernels().scale(a, x.data(), x.size());
}
inline double l1_distance(std::span<const double> x, std::span<const double> y) noexcept {
  return kernels().l1_distance(x.data(), y.data(), x.size());
}

namespace detail {
extern const KernelTable scalar_table;
#if defined(MARKAGG_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
#if defined(MARKAGG_HAVE_NEON)
extern const KernelTable neon_table;
#endif
}  // namespace detail

}  // namespace markagg::simd
