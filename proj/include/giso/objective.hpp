#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "giso/basis.hpp"
#include "giso/model.hpp"
#include "giso/projection.hpp"
#include "giso/samples.hpp"

namespace giso {

/// Per-vertex GRISE instance.
///
/// The design tensor G[t][k] = g_uk(sigma_k^(t)) only depends on the symbols
/// of the vertices covered by K_u, so rows with equal local symbols are
/// merged and their weights added. The tensor is stored feature-major
/// (`design[k * rows + j]`) so the kernels stream over rows.
struct LocalProblem {
  int vertex = 0;
  std::vector<int> factor_ids;
  std::vector<bool> is_target;
  std::size_t rows = 0;
  std::vector<double> design;
  std::vector<double> weights;
  double gamma_hat = 1.0;
  ConstraintDescriptor constraint;

  std::size_t dimension() const { return factor_ids.size(); }
  std::span<const double> column(std::size_t k) const { return {design.data() + k * rows, rows}; }
  double at(std::size_t row, std::size_t k) const { return design[k * rows + row]; }
};

/// Builds the problem over K_u of `graph` (which may be an induced subgraph
/// of the family `tables` were built for). The default target set is the
/// maximal factors of `graph` containing u.
LocalProblem build_local_problem(const FactorGraph& graph, const BasisTables& tables,
                                 const WeightedConfigurations& data, int vertex, double gamma_hat,
                                 ConstraintDescriptor constraint,
                                 std::optional<std::vector<int>> targets = std::nullopt);

/// Same, from raw samples; rejects symbols outside the alphabet with the
/// offending row.
LocalProblem build_local_problem(const FactorGraph& graph, const BasisTables& tables, const SampleSet& samples,
                                 int vertex, double gamma_hat, ConstraintDescriptor constraint,
                                 std::optional<std::vector<int>> targets = std::nullopt);

struct ObjectiveEvaluation {
  double value = 0.0;
  double log_value = 0.0;
  std::vector<double> gradient;
  std::vector<double> log_gradient;
};

/// Reusable evaluation buffers; the hot path of the solver.
class ObjectiveEvaluator {
 public:
  explicit ObjectiveEvaluator(const LocalProblem& problem);

  /// Returns S(theta) and writes dS/dtheta into `gradient`.
  double evaluate(std::span<const double> theta, std::span<double> gradient);
  double value(std::span<const double> theta);

 private:
  void energies(std::span<const double> theta);

  const LocalProblem& problem_;
  std::vector<double> energy_;
  std::vector<double> scaled_;
};

ObjectiveEvaluation eval_giso(const LocalProblem& problem, std::span<const double> theta);

/// S(theta + delta) - S(theta) - <grad S(theta), delta>.
double taylor_residual(const LocalProblem& problem, std::span<const double> theta, std::span<const double> delta);

/// sum_j w_j G_j G_j^T.
Eigen::MatrixXd design_gram(const LocalProblem& problem);

/// max_j |<theta, G_j>|.
double max_local_energy(const LocalProblem& problem, std::span<const double> theta);

}  // namespace giso
