#include "giso/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "giso/error.hpp"

namespace giso {

std::size_t iterations_for_epsilon(double epsilon, std::size_t dimension) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw InputError("epsilon must lie in (0, 1], got " + std::to_string(epsilon));
  }
  const double t = 6.0 / (epsilon * epsilon) * std::log(2.0 * static_cast<double>(dimension) + 1.0);
  // Saturate: tiny epsilons overflow the integer conversion.
  if (!(t < 1e18)) return std::numeric_limits<std::size_t>::max();
  return static_cast<std::size_t>(std::ceil(t));
}

SimplexState SimplexState::uniform(std::size_t dimension) {
  const double x0 = 1.0 / (2.0 * static_cast<double>(dimension) + 1.0);
  return {std::vector<double>(dimension, x0), std::vector<double>(dimension, x0), x0};
}

std::vector<double> SimplexState::theta(double gamma_hat) const {
  std::vector<double> out(x_plus.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = gamma_hat * (x_plus[k] - x_minus[k]);
  return out;
}

double SimplexState::total() const {
  return y + std::accumulate(x_plus.begin(), x_plus.end(), 0.0) + std::accumulate(x_minus.begin(), x_minus.end(), 0.0);
}

SolverReport entropic_descent(const LocalProblem& problem, const SolverOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t dim = problem.dimension();
  SolverReport report;
  report.planned_iterations =
      options.max_iterations ? *options.max_iterations : iterations_for_epsilon(options.epsilon, dim);
  report.theta.assign(dim, 0.0);

  if (dim == 0) {
    report.theta_unconstrained = report.theta;
    return report;
  }

  const double log_n = std::log(2.0 * static_cast<double>(dim) + 1.0);
  const double gamma_hat = problem.gamma_hat;
  SimplexState state = SimplexState::uniform(dim);
  ObjectiveEvaluator evaluator(problem);
  std::vector<double> theta(dim);
  std::vector<double> gradient(dim);

  report.best_value = std::numeric_limits<double>::infinity();
  report.first_step = std::sqrt(2.0 * log_n);

  // Best value at the start of the trailing window, for the plateau rule.
  const std::size_t window = std::max<std::size_t>(1, report.planned_iterations / 5);
  std::vector<double> best_history;
  if (options.plateau_stop) best_history.reserve(report.planned_iterations);

  for (std::size_t t = 1; t <= report.planned_iterations; ++t) {
    for (std::size_t k = 0; k < dim; ++k) theta[k] = gamma_hat * (state.x_plus[k] - state.x_minus[k]);
    const double s = evaluator.evaluate(theta, gradient);
    if (s < report.best_value) {
      report.best_value = s;
      report.best_iteration = t;
      report.theta = theta;
    }

    // eta_t = eta_1 sqrt(1/t), the closed form of eta_{t+1} = eta_t sqrt(t/(t+1)).
    const double eta = std::sqrt(2.0 * log_n / static_cast<double>(t));
    double z = state.y;
    for (std::size_t k = 0; k < dim; ++k) {
      const double v = gradient[k] / s;
      state.x_plus[k] *= std::exp(-eta * v);
      state.x_minus[k] *= std::exp(eta * v);
      z += state.x_plus[k] + state.x_minus[k];
    }
    for (std::size_t k = 0; k < dim; ++k) {
      state.x_plus[k] /= z;
      state.x_minus[k] /= z;
    }
    state.y /= z;
    report.iterations = t;
    report.last_step = eta;
    if (options.observer) options.observer(t, state);

    if (options.plateau_stop) {
      best_history.push_back(report.best_value);
      if (t > window && best_history[t - 1 - window] - report.best_value < options.epsilon / 10.0 &&
          t >= report.planned_iterations / 5 + window) {
        report.stopped_on_plateau = true;
        break;
      }
    }
  }

  report.best_log_value = std::log(report.best_value);
  report.theta_unconstrained = report.theta;
  for (double v : report.theta) report.l1_norm += std::abs(v);
  report.l1_exceeds_prior = report.l1_norm > gamma_hat * (1.0 + 1e-12);
  report.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

SolverReport grise(const LocalProblem& problem, const SolverOptions& options) {
  if (problem.constraint.kind == ConstraintDescriptor::Kind::kCustom && !problem.constraint.custom) {
    throw InputError("custom-projector constraint has no registered projector");
  }
  SolverReport report = entropic_descent(problem, options);
  if (problem.constraint.kind == ConstraintDescriptor::Kind::kTrivial) return report;

  const auto start = std::chrono::steady_clock::now();
  report.theta = project(report.theta_unconstrained, problem.constraint);
  report.projection_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  report.l1_norm = 0.0;
  for (double v : report.theta) report.l1_norm += std::abs(v);
  report.l1_exceeds_prior = report.l1_norm > problem.gamma_hat * (1.0 + 1e-12);
  return report;
}

}  // namespace giso
