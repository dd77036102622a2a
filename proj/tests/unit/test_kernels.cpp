#include <doctest.h>

#include <cmath>
#include <vector>

#include "giso/kernels.hpp"
#include "giso/objective.hpp"
#include "giso/rng.hpp"
#include "support.hpp"

using namespace giso;

TEST_CASE("scalar kernels on small inputs") {
  const auto& k = kernels::scalar_table();
  std::vector<double> x{1, 2, 3};
  std::vector<double> y{1, 1, 1};
  k.axpy(2.0, x.data(), y.data(), 3);
  CHECK(y == std::vector<double>{3, 5, 7});
  CHECK(k.dot(x.data(), y.data(), 3) == 34.0);
  std::vector<double> e{0.0, 1.0};
  std::vector<double> w{0.5, 0.5};
  std::vector<double> out(2);
  const double s = k.exp_neg_weighted(e.data(), w.data(), out.data(), 2);
  CHECK(out[0] == 0.5);
  CHECK(out[1] == doctest::Approx(0.5 * std::exp(-1.0)).epsilon(1e-15));
  CHECK(s == doctest::Approx(0.5 + 0.5 * std::exp(-1.0)).epsilon(1e-15));
  CHECK(k.dot(x.data(), y.data(), 0) == 0.0);
}

TEST_CASE("avx2 kernels agree with scalar") {
  const auto* wide = kernels::avx2_table();
  if (wide == nullptr) {
    MESSAGE("AVX2 unavailable; skipped");
    return;
  }
  const auto& narrow = kernels::scalar_table();
  Rng rng(21);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 17u, 100u, 1023u}) {
    std::vector<double> x(n);
    std::vector<double> y(n);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.uniform(-20, 20);
      y[i] = rng.uniform(-1, 1);
      w[i] = rng.uniform(0, 1);
    }
    const double d0 = narrow.dot(x.data(), y.data(), n);
    const double d1 = wide->dot(x.data(), y.data(), n);
    CHECK(std::abs(d0 - d1) <= 1e-12 * (1.0 + std::abs(d0)) * static_cast<double>(n + 1));

    auto y0 = y;
    auto y1 = y;
    narrow.axpy(0.37, x.data(), y0.data(), n);
    wide->axpy(0.37, x.data(), y1.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y0[i] - y1[i]) <= 1e-15 * (1.0 + std::abs(y0[i])));

    std::vector<double> o0(n);
    std::vector<double> o1(n);
    const double s0 = narrow.exp_neg_weighted(x.data(), w.data(), o0.data(), n);
    const double s1 = wide->exp_neg_weighted(x.data(), w.data(), o1.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(o0[i] - o1[i]) <= 1e-13 * (std::abs(o0[i]) + 1e-300));
    CHECK(std::abs(s0 - s1) <= 1e-12 * (std::abs(s0) + 1e-300));
  }
}

TEST_CASE("exponent clamp") {
  std::vector<double> e{-1000.0, 1000.0};
  std::vector<double> w{1.0, 1.0};
  std::vector<double> out(2);
  for (const auto* k : {&kernels::scalar_table(), kernels::avx2_table()}) {
    if (k == nullptr) continue;
    k->exp_neg_weighted(e.data(), w.data(), out.data(), 2);
    CHECK(std::isfinite(out[0]));
    CHECK(out[0] == doctest::Approx(std::exp(kernels::kExpClamp)).epsilon(1e-12));
    CHECK(out[1] == doctest::Approx(std::exp(-kernels::kExpClamp)).epsilon(1e-12));
  }
}

TEST_CASE("objective evaluation is ISA independent") {
  if (!kernels::cpu_supports(kernels::Isa::kAvx2)) return;
  Rng rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const auto desk = support::random_desk_problem(rng, 12, 500);
    const BasisTables tables(desk.model.graph, desk.model.alphabet, desk.model.basis);
    const auto problem = build_local_problem(desk.model.graph, tables, desk.samples, desk.vertex, 1.0,
                                             ConstraintDescriptor::trivial());
    std::vector<double> theta(problem.dimension());
    for (double& t : theta) t = rng.uniform(-0.3, 0.3);
    ObjectiveEvaluation a;
    ObjectiveEvaluation b;
    {
      kernels::ScopedIsa scope(kernels::Isa::kScalar);
      CHECK(kernels::active().isa == kernels::Isa::kScalar);
      a = eval_giso(problem, theta);
    }
    {
      kernels::ScopedIsa scope(kernels::Isa::kAvx2);
      b = eval_giso(problem, theta);
    }
    CHECK(std::abs(a.value - b.value) <= 1e-13 * a.value);
    for (std::size_t k = 0; k < theta.size(); ++k) CHECK(std::abs(a.gradient[k] - b.gradient[k]) <= 1e-13);
  }
}
