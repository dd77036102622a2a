#include <algorithm>
#include <cmath>

#include "giso/kernels.hpp"

namespace giso::kernels {
namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += x[i] * y[i];
  return sum;
}

double exp_neg_weighted_scalar(const double* e, const double* w, double* out, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double arg = std::clamp(-e[i], -kExpClamp, kExpClamp);
    out[i] = w[i] * std::exp(arg);
    sum += out[i];
  }
  return sum;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::kScalar, axpy_scalar, dot_scalar, exp_neg_weighted_scalar};
  return table;
}

}  // namespace giso::kernels
