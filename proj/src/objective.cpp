#include "giso/objective.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "giso/error.hpp"
#include "giso/kernels.hpp"

namespace giso {

void SampleSet::validate() const {
  if (n == 0) throw InputError("sample set is empty");
  if (alphabet.p() != p) throw InputError("sample alphabet does not match the column count");
  if (data.size() != n * static_cast<std::size_t>(p)) throw InputError("sample matrix has the wrong size");
  for (std::size_t t = 0; t < n; ++t) {
    for (int i = 0; i < p; ++i) {
      const int s = data[t * static_cast<std::size_t>(p) + static_cast<std::size_t>(i)];
      if (s < 0 || s >= alphabet.size(i)) {
        throw InputError("sample row " + std::to_string(t + 1) + ", vertex " + std::to_string(i + 1) +
                         ": symbol " + std::to_string(s) + " outside 0.." + std::to_string(alphabet.size(i) - 1));
      }
    }
  }
}

WeightedConfigurations WeightedConfigurations::from_samples(const SampleSet& samples) {
  samples.validate();
  WeightedConfigurations w;
  w.p = samples.p;
  w.data = samples.data;
  w.weights.assign(samples.n, 1.0 / static_cast<double>(samples.n));
  return w;
}

LocalProblem build_local_problem(const FactorGraph& graph, const BasisTables& tables,
                                 const WeightedConfigurations& data, int vertex, double gamma_hat,
                                 ConstraintDescriptor constraint, std::optional<std::vector<int>> targets) {
  if (!(gamma_hat > 0.0)) throw InputError("gamma_hat must be positive");
  if (vertex < 0 || vertex >= graph.p()) throw InputError("vertex out of range");
  if (data.p != graph.p()) throw InputError("configuration width does not match the graph");
  if (gamma_hat > 200.0) {
    warn("gamma_hat > 200: exponents may reach the clamp at +/-700 and values are no longer exact");
  }

  LocalProblem problem;
  problem.vertex = vertex;
  problem.factor_ids = graph.incident(vertex);
  problem.gamma_hat = gamma_hat;
  problem.constraint = std::move(constraint);

  const std::size_t dim = problem.factor_ids.size();
  std::vector<int> target_ids;
  if (targets) {
    target_ids = *targets;
  } else {
    const CliqueStructure cs = maximal_cliques(graph);
    for (int id : cs.maximal_factors) {
      const auto& scope = graph.factor(id).scope;
      if (std::binary_search(scope.begin(), scope.end(), vertex)) target_ids.push_back(id);
    }
  }
  problem.is_target.assign(dim, false);
  for (std::size_t k = 0; k < dim; ++k) {
    problem.is_target[k] =
        std::find(target_ids.begin(), target_ids.end(), problem.factor_ids[k]) != target_ids.end();
  }

  // Local variables and a mixed-radix key for row merging.
  std::set<int> covered;
  for (int id : problem.factor_ids) covered.insert(graph.factor(id).scope.begin(), graph.factor(id).scope.end());
  const std::vector<int> vars(covered.begin(), covered.end());
  const Alphabet& alphabet = tables.alphabet();
  const bool keyable = alphabet.configuration_count(vars) < (std::size_t{1} << 62);

  std::vector<const std::vector<double>*> centered(dim);
  std::vector<const FactorTable*> factor_tables(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    factor_tables[k] = &tables.at(problem.factor_ids[k]);
    centered[k] = &factor_tables[k]->centered_at(vertex);
  }

  std::vector<std::size_t> representative;
  std::vector<double> merged_weight;
  std::unordered_map<std::uint64_t, std::size_t> slot;
  for (std::size_t j = 0; j < data.size(); ++j) {
    const auto row = data.row(j);
    std::size_t index;
    if (keyable) {
      std::uint64_t key = 0;
      for (int v : vars) key = key * static_cast<std::uint64_t>(alphabet.size(v)) + static_cast<std::uint64_t>(row[static_cast<std::size_t>(v)]);
      auto [it, inserted] = slot.try_emplace(key, representative.size());
      if (inserted) {
        representative.push_back(j);
        merged_weight.push_back(0.0);
      }
      index = it->second;
    } else {
      index = representative.size();
      representative.push_back(j);
      merged_weight.push_back(0.0);
    }
    merged_weight[index] += data.weights[j];
  }

  problem.rows = representative.size();
  problem.weights = std::move(merged_weight);
  problem.design.assign(dim * problem.rows, 0.0);
  for (std::size_t r = 0; r < problem.rows; ++r) {
    const auto row = data.row(representative[r]);
    for (std::size_t k = 0; k < dim; ++k) {
      problem.design[k * problem.rows + r] = (*centered[k])[factor_tables[k]->index_of(row)];
    }
  }
  return problem;
}

LocalProblem build_local_problem(const FactorGraph& graph, const BasisTables& tables, const SampleSet& samples,
                                 int vertex, double gamma_hat, ConstraintDescriptor constraint,
                                 std::optional<std::vector<int>> targets) {
  return build_local_problem(graph, tables, WeightedConfigurations::from_samples(samples), vertex, gamma_hat,
                             std::move(constraint), std::move(targets));
}

ObjectiveEvaluator::ObjectiveEvaluator(const LocalProblem& problem)
    : problem_(problem), energy_(problem.rows), scaled_(problem.rows) {}

void ObjectiveEvaluator::energies(std::span<const double> theta) {
  const auto& k = kernels::active();
  std::fill(energy_.begin(), energy_.end(), 0.0);
  for (std::size_t c = 0; c < problem_.dimension(); ++c) {
    if (theta[c] != 0.0) k.axpy(theta[c], problem_.design.data() + c * problem_.rows, energy_.data(), problem_.rows);
  }
}

double ObjectiveEvaluator::value(std::span<const double> theta) {
  energies(theta);
  return kernels::active().exp_neg_weighted(energy_.data(), problem_.weights.data(), scaled_.data(), problem_.rows);
}

double ObjectiveEvaluator::evaluate(std::span<const double> theta, std::span<double> gradient) {
  const double s = value(theta);
  const auto& k = kernels::active();
  for (std::size_t c = 0; c < problem_.dimension(); ++c) {
    gradient[c] = -k.dot(scaled_.data(), problem_.design.data() + c * problem_.rows, problem_.rows);
  }
  return s;
}

ObjectiveEvaluation eval_giso(const LocalProblem& problem, std::span<const double> theta) {
  if (theta.size() != problem.dimension()) {
    throw InputError("theta has " + std::to_string(theta.size()) + " entries, problem dimension is " +
                     std::to_string(problem.dimension()));
  }
  ObjectiveEvaluator evaluator(problem);
  ObjectiveEvaluation out;
  out.gradient.assign(problem.dimension(), 0.0);
  out.value = evaluator.evaluate(theta, out.gradient);
  out.log_value = std::log(out.value);
  out.log_gradient.resize(out.gradient.size());
  for (std::size_t k = 0; k < out.gradient.size(); ++k) out.log_gradient[k] = out.gradient[k] / out.value;
  return out;
}

double taylor_residual(const LocalProblem& problem, std::span<const double> theta, std::span<const double> delta) {
  const auto base = eval_giso(problem, theta);
  std::vector<double> shifted(theta.begin(), theta.end());
  double linear = 0.0;
  for (std::size_t k = 0; k < shifted.size(); ++k) {
    shifted[k] += delta[k];
    linear += base.gradient[k] * delta[k];
  }
  ObjectiveEvaluator evaluator(problem);
  return evaluator.value(shifted) - base.value - linear;
}

Eigen::MatrixXd design_gram(const LocalProblem& problem) {
  const auto dim = static_cast<Eigen::Index>(problem.dimension());
  const auto rows = static_cast<Eigen::Index>(problem.rows);
  const Eigen::Map<const Eigen::MatrixXd> g(problem.design.data(), rows, dim);
  const Eigen::Map<const Eigen::VectorXd> w(problem.weights.data(), rows);
  return g.transpose() * w.asDiagonal() * g;
}

double max_local_energy(const LocalProblem& problem, std::span<const double> theta) {
  double worst = 0.0;
  for (std::size_t r = 0; r < problem.rows; ++r) {
    double e = 0.0;
    for (std::size_t k = 0; k < problem.dimension(); ++k) e += theta[k] * problem.at(r, k);
    worst = std::max(worst, std::abs(e));
  }
  return worst;
}

}  // namespace giso
