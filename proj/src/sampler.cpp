#include "giso/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "giso/error.hpp"
#include "giso/oracle.hpp"
#include "giso/rng.hpp"

namespace giso {
namespace {

std::size_t draw_index(std::span<const double> cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

// Writes the conditional of `vertex` into `out` using scratch `sigma`, which
// holds the current configuration and is restored before returning.
void conditional_into(const GraphicalModel& model, const BasisTables& tables, int vertex, std::vector<int>& sigma,
                      Parameterization parameterization, std::vector<double>& out) {
  const int q = model.alphabet.size(vertex);
  out.assign(static_cast<std::size_t>(q), 0.0);
  const int saved = sigma[static_cast<std::size_t>(vertex)];
  for (int a = 0; a < q; ++a) {
    sigma[static_cast<std::size_t>(vertex)] = a;
    double e = 0.0;
    for (int id : model.graph.incident(vertex)) {
      const FactorTable& t = tables.at(id);
      const auto& values = parameterization == Parameterization::kRaw ? t.f : t.centered_at(vertex);
      e += model.parameter(id) * values[t.index_of(sigma)];
    }
    out[static_cast<std::size_t>(a)] = e;
  }
  sigma[static_cast<std::size_t>(vertex)] = saved;
  const double top = *std::max_element(out.begin(), out.end());
  double total = 0.0;
  for (double& v : out) {
    v = std::exp(v - top);
    total += v;
  }
  for (double& v : out) v /= total;
}

}  // namespace

std::vector<double> conditional_distribution(const GraphicalModel& model, const BasisTables& tables, int vertex,
                                             std::span<const int> configuration, Parameterization parameterization) {
  if (vertex < 0 || vertex >= model.graph.p()) throw InputError("vertex out of range");
  if (configuration.size() != static_cast<std::size_t>(model.graph.p())) {
    throw InputError("configuration length does not match the model");
  }
  std::vector<int> sigma(configuration.begin(), configuration.end());
  std::vector<double> out;
  conditional_into(model, tables, vertex, sigma, parameterization, out);
  return out;
}

std::vector<double> conditional_distribution(const GraphicalModel& model, int vertex,
                                             std::span<const int> configuration) {
  const BasisTables tables(model.graph, model.alphabet, model.basis);
  return conditional_distribution(model, tables, vertex, configuration);
}

SampleSet sample_exact(const GraphicalModel& model, std::size_t n, std::uint64_t seed, std::size_t cap) {
  if (n == 0) throw InputError("sample count must be at least 1");
  if (model.alphabet.joint_configuration_count() > cap) {
    throw InputError("state space too large for exact sampling; use the Gibbs sampler");
  }
  const ExactDistribution dist = enumerate_distribution(model, cap);
  std::vector<double> cdf(dist.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < dist.size(); ++j) {
    acc += dist.probabilities[j];
    cdf[j] = acc;
  }
  for (double& c : cdf) c /= acc;

  SampleSet out;
  out.n = n;
  out.p = model.graph.p();
  out.alphabet = model.alphabet;
  out.provenance = "exact seed=" + std::to_string(seed);
  out.data.resize(n * static_cast<std::size_t>(out.p));
  Rng rng(seed);
  std::vector<int> sigma(static_cast<std::size_t>(out.p));
  for (std::size_t t = 0; t < n; ++t) {
    decode_configuration(draw_index(cdf, rng.uniform()), dist.radix, sigma);
    std::copy(sigma.begin(), sigma.end(), out.data.begin() + static_cast<std::ptrdiff_t>(t * sigma.size()));
  }
  return out;
}

SampleSet sample_gibbs(const GraphicalModel& model, std::size_t n, const GibbsConfig& config) {
  if (n == 0) throw InputError("sample count must be at least 1");
  if (config.thinning < 1) throw InputError("thinning must be at least 1");
  model.validate();
  const BasisTables tables(model.graph, model.alphabet, model.basis);
  const int p = model.graph.p();
  const std::size_t burn_in = config.burn_in_sweeps(p);

  SampleSet out;
  out.n = n;
  out.p = p;
  out.alphabet = model.alphabet;
  out.provenance = "gibbs seed=" + std::to_string(config.seed) + " burn_in=" + std::to_string(burn_in) +
                   " thinning=" + std::to_string(config.thinning);
  out.data.resize(n * static_cast<std::size_t>(p));

  Rng rng(config.seed);
  std::vector<int> sigma(static_cast<std::size_t>(p));
  for (int v = 0; v < p; ++v) {
    sigma[static_cast<std::size_t>(v)] = static_cast<int>(rng.index(static_cast<std::uint64_t>(model.alphabet.size(v))));
  }
  std::vector<double> probs;
  std::vector<double> cdf;
  auto sweep = [&] {
    for (int v = 0; v < p; ++v) {
      conditional_into(model, tables, v, sigma, Parameterization::kRaw, probs);
      cdf.resize(probs.size());
      double acc = 0.0;
      for (std::size_t a = 0; a < probs.size(); ++a) cdf[a] = (acc += probs[a]);
      sigma[static_cast<std::size_t>(v)] = static_cast<int>(draw_index(cdf, rng.uniform() * acc));
    }
  };
  for (std::size_t s = 0; s < burn_in; ++s) sweep();
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t s = 0; s < config.thinning; ++s) sweep();
    std::copy(sigma.begin(), sigma.end(), out.data.begin() + static_cast<std::ptrdiff_t>(t * sigma.size()));
  }
  return out;
}

}  // namespace giso
