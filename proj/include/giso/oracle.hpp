#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "giso/model.hpp"
#include "giso/objective.hpp"
#include "giso/samples.hpp"

namespace giso {

/// Exact mu over all configurations, last vertex fastest.
struct ExactDistribution {
  std::vector<int> radix;
  std::vector<double> probabilities;
  double log_z = 0.0;

  std::size_t size() const { return probabilities.size(); }
  std::vector<int> configuration(std::size_t index) const;
  WeightedConfigurations weighted() const;
};

ExactDistribution enumerate_distribution(const GraphicalModel& model, std::size_t cap = kDefaultEnumerationCap);

/// Marginal of one vertex.
std::vector<double> vertex_marginal(const ExactDistribution& dist, int vertex);

/// P(sigma_u | sigma_{-u}) read off the joint table.
std::vector<double> enumerated_conditional(const ExactDistribution& dist, int vertex,
                                           std::span<const int> configuration);

/// GRISE instance over K_u weighted by mu instead of sample frequencies.
LocalProblem population_problem(const GraphicalModel& model, const ExactDistribution& dist, int vertex,
                                double gamma_hat, ConstraintDescriptor constraint = ConstraintDescriptor::trivial());

/// E_mu[exp(-sum_k theta_k g_uk)] and its gradient.
ObjectiveEvaluation population_giso(const GraphicalModel& model, int vertex, std::span<const double> theta_u);
ObjectiveEvaluation population_giso(const GraphicalModel& model, const ExactDistribution& dist, int vertex,
                                     std::span<const double> theta_u);

/// theta* restricted to K_u, in incidence order.
std::vector<double> local_parameters(const GraphicalModel& model, int vertex);

/// H_kk' = E[g_uk g_uk'] over K_u.
Eigen::MatrixXd fisher_gram(const GraphicalModel& model, int vertex);
Eigen::MatrixXd fisher_gram(const GraphicalModel& model, const ExactDistribution& dist, int vertex);

}  // namespace giso
