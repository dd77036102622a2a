#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "giso/objective.hpp"

namespace giso {

/// T = ceil(6 eps^-2 ln(2K + 1)); eps must lie in (0, 1].
std::size_t iterations_for_epsilon(double epsilon, std::size_t dimension);

/// Lifted point on the simplex: theta = gamma_hat (x_plus - x_minus), with
/// y + sum(x_plus + x_minus) = 1 and every coordinate nonnegative.
struct SimplexState {
  std::vector<double> x_plus;
  std::vector<double> x_minus;
  double y = 0.0;

  static SimplexState uniform(std::size_t dimension);
  std::vector<double> theta(double gamma_hat) const;
  double total() const;
};

struct SolverOptions {
  double epsilon = 0.1;
  std::optional<std::size_t> max_iterations;  // replaces the guarantee-backed T
  bool plateau_stop = false;
  /// Called after every update with the (1-based) iteration and the new state.
  std::function<void(std::size_t, const SimplexState&)> observer;
};

struct SolverReport {
  std::vector<double> theta;                // returned estimate (projected for grise)
  std::vector<double> theta_unconstrained;  // entropic-descent output
  double best_value = 1.0;
  double best_log_value = 0.0;
  std::size_t best_iteration = 0;  // iterate index s, 1-based; 0 when dimension is 0
  std::size_t iterations = 0;
  std::size_t planned_iterations = 0;
  double first_step = 0.0;
  double last_step = 0.0;
  double solve_seconds = 0.0;
  double projection_seconds = 0.0;
  double l1_norm = 0.0;  // of theta
  bool l1_exceeds_prior = false;
  bool stopped_on_plateau = false;
};

/// Entropic descent on the lifted simplex for the l1-ball-constrained GISO.
SolverReport entropic_descent(const LocalProblem& problem, const SolverOptions& options);

/// eps-optimal GRISE estimate: entropic descent followed by the equi-cost
/// projection of the problem's constraint set.
SolverReport grise(const LocalProblem& problem, const SolverOptions& options);

}  // namespace giso
