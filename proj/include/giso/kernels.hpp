#pragma once

// Data-parallel inner loops of the objective evaluation. Every kernel has a
// scalar reference implementation and an AVX2+FMA variant; the variant is
// picked once at runtime from CPU support and can be overridden (tests use
// this to check the two against each other).

#include <cstddef>
#include <string>

namespace giso::kernels {

enum class Isa { kScalar, kAvx2 };

std::string to_string(Isa isa);

/// Exponent arguments are clamped to this magnitude before exponentiation.
inline constexpr double kExpClamp = 700.0;

struct KernelTable {
  Isa isa;
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // out[i] = w[i] * exp(-e[i]); returns sum_i out[i]
  double (*exp_neg_weighted)(const double* e, const double* w, double* out, std::size_t n);
};

const KernelTable& scalar_table();
/// Null when the translation unit was not compiled or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

bool cpu_supports(Isa isa);

/// Active table. First call selects AVX2 when supported unless the
/// environment variable GISO_SIMD is set to "scalar".
const KernelTable& active();

/// Forces a table; throws InputError when the ISA is not available.
void set_active(Isa isa);

/// Scoped override for tests.
class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa);
  ~ScopedIsa();
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa previous_;
};

}  // namespace giso::kernels
