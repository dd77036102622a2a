#include "giso/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "giso/basis.hpp"
#include "giso/error.hpp"

namespace giso {

std::vector<int> ExactDistribution::configuration(std::size_t index) const {
  std::vector<int> out(radix.size());
  decode_configuration(index, radix, out);
  return out;
}

WeightedConfigurations ExactDistribution::weighted() const {
  WeightedConfigurations w;
  w.p = static_cast<int>(radix.size());
  w.data.resize(size() * radix.size());
  std::vector<int> sigma(radix.size(), 0);
  for (std::size_t j = 0; j < size(); ++j) {
    std::copy(sigma.begin(), sigma.end(), w.data.begin() + static_cast<std::ptrdiff_t>(j * radix.size()));
    for (std::size_t v = radix.size(); v-- > 0;) {
      if (++sigma[v] < radix[v]) break;
      sigma[v] = 0;
    }
  }
  w.weights = probabilities;
  return w;
}

ExactDistribution enumerate_distribution(const GraphicalModel& model, std::size_t cap) {
  model.validate();
  const std::size_t count = model.alphabet.joint_configuration_count();
  if (count > cap) {
    throw InputError("state space has " + std::to_string(count) + " configurations, above the enumeration cap " +
                     std::to_string(cap));
  }
  const BasisTables tables(model.graph, model.alphabet, model.basis);
  ExactDistribution dist;
  dist.radix = model.alphabet.sizes;
  std::vector<double> energy(count, 0.0);
  std::vector<int> sigma(dist.radix.size(), 0);
  for (std::size_t j = 0; j < count; ++j) {
    double e = 0.0;
    for (const Factor& f : model.graph.factors()) {
      const FactorTable& t = tables.at(f.id);
      e += model.parameter(f.id) * t.f[t.index_of(sigma)];
    }
    energy[j] = e;
    for (std::size_t v = sigma.size(); v-- > 0;) {
      if (++sigma[v] < dist.radix[v]) break;
      sigma[v] = 0;
    }
  }
  const double top = *std::max_element(energy.begin(), energy.end());
  double total = 0.0;
  dist.probabilities.resize(count);
  for (std::size_t j = 0; j < count; ++j) {
    dist.probabilities[j] = std::exp(energy[j] - top);
    total += dist.probabilities[j];
  }
  for (double& pr : dist.probabilities) pr /= total;
  dist.log_z = top + std::log(total);
  return dist;
}

std::vector<double> vertex_marginal(const ExactDistribution& dist, int vertex) {
  std::vector<double> out(static_cast<std::size_t>(dist.radix[static_cast<std::size_t>(vertex)]), 0.0);
  std::size_t stride = 1;
  for (std::size_t v = dist.radix.size(); v-- > static_cast<std::size_t>(vertex) + 1;) stride *= static_cast<std::size_t>(dist.radix[v]);
  const std::size_t q = out.size();
  for (std::size_t j = 0; j < dist.size(); ++j) out[(j / stride) % q] += dist.probabilities[j];
  return out;
}

std::vector<double> enumerated_conditional(const ExactDistribution& dist, int vertex,
                                           std::span<const int> configuration) {
  std::vector<int> sigma(configuration.begin(), configuration.end());
  const int q = dist.radix[static_cast<std::size_t>(vertex)];
  std::vector<double> out(static_cast<std::size_t>(q));
  double total = 0.0;
  for (int a = 0; a < q; ++a) {
    sigma[static_cast<std::size_t>(vertex)] = a;
    out[static_cast<std::size_t>(a)] = dist.probabilities[encode_configuration(sigma, dist.radix)];
    total += out[static_cast<std::size_t>(a)];
  }
  for (double& v : out) v /= total;
  return out;
}

LocalProblem population_problem(const GraphicalModel& model, const ExactDistribution& dist, int vertex,
                                double gamma_hat, ConstraintDescriptor constraint) {
  const BasisTables tables(model.graph, model.alphabet, model.basis);
  return build_local_problem(model.graph, tables, dist.weighted(), vertex, gamma_hat, std::move(constraint));
}

std::vector<double> local_parameters(const GraphicalModel& model, int vertex) {
  std::vector<double> out;
  for (int id : model.graph.incident(vertex)) out.push_back(model.parameter(id));
  return out;
}

ObjectiveEvaluation population_giso(const GraphicalModel& model, const ExactDistribution& dist, int vertex,
                                    std::span<const double> theta_u) {
  const LocalProblem problem = population_problem(model, dist, vertex, 1.0);
  return eval_giso(problem, theta_u);
}

ObjectiveEvaluation population_giso(const GraphicalModel& model, int vertex, std::span<const double> theta_u) {
  return population_giso(model, enumerate_distribution(model), vertex, theta_u);
}

Eigen::MatrixXd fisher_gram(const GraphicalModel& model, const ExactDistribution& dist, int vertex) {
  return design_gram(population_problem(model, dist, vertex, 1.0));
}

Eigen::MatrixXd fisher_gram(const GraphicalModel& model, int vertex) {
  return fisher_gram(model, enumerate_distribution(model), vertex);
}

}  // namespace giso
