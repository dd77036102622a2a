#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "giso/model.hpp"
#include "giso/samples.hpp"
#include "giso/solver.hpp"

namespace giso {

/// Iteration budgets above this are refused unless set explicitly.
inline constexpr std::size_t kMaxGuaranteedIterations = 100'000'000;

struct SupriseConfig {
  double alpha = 0.0;
  double gamma_hat = 1.0;
  std::optional<double> gamma;    // defaults to gamma_hat
  std::optional<double> rho_npc;  // defaults per basis; required for custom
  std::optional<double> epsilon_override;
  std::optional<std::size_t> max_iterations_override;
  std::optional<int> order;  // defaults to the family's interaction order
  std::size_t threads = 1;
};

/// rho alpha^2 exp(-gamma(2L-1)) / (20 (1 + gamma_hat) q^{L-1}), capped at 1.
double suprise_epsilon(double rho_npc, double alpha, double gamma, int order, double gamma_hat, int q);

/// Per-basis default of the NPC input (1 for monomials, e^{-2 gamma}/q for
/// indicators); nullopt for custom bases.
std::optional<double> default_rho_npc(BasisKind basis, double gamma, int q);

struct EstimatedParameter {
  int factor_id = 0;
  std::vector<int> scope;
  std::vector<int> assignment;
  double theta_avg = 0.0;
  bool tested = true;  // false for cliques exposed by the last round's removals
};

struct RoundLog {
  int t = 0;
  bool skipped = false;  // K^t was already empty
  std::vector<std::vector<int>> removed;
  std::map<std::vector<int>, double> norms;
};

struct NodeSolve {
  int round = 0;
  int vertex = 0;
  std::size_t dimension = 0;
  std::size_t iterations = 0;
  std::size_t best_iteration = 0;
  double best_value = 0.0;
  double l1_norm = 0.0;
  bool l1_exceeds_prior = false;
  double solve_seconds = 0.0;
  double projection_seconds = 0.0;
};

struct StructureReport {
  int p = 0;
  BasisKind basis = BasisKind::kMonomial;
  Alphabet alphabet;
  std::vector<std::vector<int>> cliques;
  std::vector<EstimatedParameter> parameters;
  std::vector<RoundLog> rounds;
  std::vector<NodeSolve> solves;
  double epsilon = 0.0;
  bool guarantee_void = false;
  std::vector<int> surviving_factors;
};

/// Componentwise mean of the node estimates of every span factor.
/// `estimates[u]` maps factor id to node u's estimate.
std::vector<double> clique_average(const std::vector<std::map<int, double>>& estimates, const std::vector<int>& clique,
                                   const std::vector<int>& span);

/// One round's decision: spans of cliques whose averaged estimate has l2 norm
/// strictly below alpha/2 are removed.
struct ThresholdDecision {
  std::vector<std::vector<int>> removed;
  std::vector<int> removed_factors;
  std::map<std::vector<int>, double> norms;
  std::map<std::vector<int>, std::vector<double>> kept_averages;
};

ThresholdDecision threshold_cliques(const CliqueStructure& cliques, const std::vector<std::map<int, double>>& estimates,
                                    double alpha);

/// Per-node GRISE on one node (the learn command's grise mode).
struct NodeEstimate {
  int vertex = 0;
  std::vector<int> factor_ids;
  std::vector<bool> is_target;
  SolverReport report;
};

NodeEstimate estimate_node(const FactorGraph& family, BasisKind basis, const Alphabet& alphabet,
                           const WeightedConfigurations& data, int vertex, double gamma_hat,
                           const SolverOptions& options);

StructureReport run_suprise(const FactorGraph& family, BasisKind basis, const Alphabet& alphabet,
                            const WeightedConfigurations& data, const SupriseConfig& config);
StructureReport run_suprise(const FactorGraph& family, BasisKind basis, const SampleSet& samples,
                            const SupriseConfig& config);

struct RecoveryMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t true_cliques = 0;
  std::size_t estimated_cliques = 0;
  std::size_t correct_cliques = 0;
  double linf2_error = 0.0;  // max over true cliques of the span l2 error
  double l2_error = 0.0;     // over all true maximal factors
  std::optional<double> chi_budget;  // chi^2 alpha^2 / 4
  std::optional<bool> within_chi_budget;
};

/// True structure: maximal cliques of the truth's nonzero factors.
/// Estimates are matched to truth factors by scope and basis payload.
RecoveryMetrics evaluate_estimate(const GraphicalModel& truth, const StructureReport& report,
                                  std::optional<int> chromatic_number = std::nullopt,
                                  std::optional<double> alpha = std::nullopt);

}  // namespace giso
