#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "giso/basis.hpp"
#include "giso/model.hpp"
#include "giso/samples.hpp"

namespace giso {

enum class Parameterization { kRaw, kCentered };

/// P(sigma_u = a | sigma_{-u}) for every a, from the factors in K_u only.
/// `kCentered` uses g_uk in place of f_k; the two agree because the centering
/// terms do not depend on sigma_u.
std::vector<double> conditional_distribution(const GraphicalModel& model, const BasisTables& tables, int vertex,
                                             std::span<const int> configuration,
                                             Parameterization parameterization = Parameterization::kRaw);
std::vector<double> conditional_distribution(const GraphicalModel& model, int vertex,
                                             std::span<const int> configuration);

/// i.i.d. draws by inverse CDF over the enumerated distribution.
SampleSet sample_exact(const GraphicalModel& model, std::size_t n, std::uint64_t seed,
                       std::size_t cap = kDefaultEnumerationCap);

/// Systematic-scan Gibbs sampler (vertex order 1..p per sweep). The defaults
/// (100 p burn-in sweeps, 10 sweeps between kept samples) are a heuristic for
/// weakly coupled models, not a mixing guarantee.
struct GibbsConfig {
  std::optional<std::size_t> burn_in;
  std::size_t thinning = 10;
  std::uint64_t seed = 0;

  std::size_t burn_in_sweeps(int p) const { return burn_in ? *burn_in : 100 * static_cast<std::size_t>(p); }
};

SampleSet sample_gibbs(const GraphicalModel& model, std::size_t n, const GibbsConfig& config);

}  // namespace giso
