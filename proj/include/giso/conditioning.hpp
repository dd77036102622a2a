#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "giso/model.hpp"
#include "giso/oracle.hpp"

namespace giso {

/// Values at or below this are reported as degenerate.
inline constexpr double kDegeneracyThreshold = 1e-10;

/// Smallest eigenvalue of a symmetric matrix (0 for an empty one).
double symmetric_lambda_min(const Eigen::MatrixXd& m);

/// Orthonormal basis of the linear constraint subspace over a coordinate
/// list. Indicator factors sharing a scope with every assignment present are
/// restricted to the range of the zero-sum projector; anything else is left
/// unconstrained. Columns are grouped by scope.
struct FeasibleSubspace {
  Eigen::MatrixXd basis;
  std::vector<std::vector<int>> group_scopes;
  std::vector<std::size_t> column_group;
};

FeasibleSubspace feasible_subspace(const FactorGraph& graph, const Alphabet& alphabet, BasisKind basis,
                                   std::span<const int> factor_ids);

/// G^c_kk' = sum over clique configurations of h_k h_k', k over span(c).
struct CliqueMatrix {
  std::vector<int> clique;
  std::vector<int> span;
  Eigen::MatrixXd matrix;
  double lambda_min = 0.0;           // over the full sphere
  double lambda_min_feasible = 0.0;  // over the constraint subspace
};

CliqueMatrix clique_matrix(const FactorGraph& graph, const Alphabet& alphabet, BasisKind basis,
                           const std::vector<int>& clique, std::size_t cap = kDefaultEnumerationCap);

/// NPC diagnostics of one vertex. `rho_exact`/`rho_bound` minimize over every
/// distinct factor scope containing the vertex (each one can be a maximal
/// clique in some round of SUPRISE); the `_maximal` variants only over the
/// maximal cliques of the model's own graph.
struct NpcVertex {
  int vertex = 0;
  double rho_exact = 0.0;
  double rho_bound = 0.0;
  std::vector<int> min_clique;
  double rho_exact_maximal = 0.0;
  double rho_bound_maximal = 0.0;
  std::vector<int> min_clique_maximal;
  bool degenerate = false;
};

struct NpcReport {
  std::vector<NpcVertex> vertices;
  double gamma = 0.0;
  double rho_exact = 0.0;  // min over vertices
  double rho_bound = 0.0;
};

NpcVertex npc_exact(const GraphicalModel& model, const ExactDistribution& dist, int vertex, double gamma);
NpcVertex npc_exact(const GraphicalModel& model, int vertex);
NpcReport npc_report(const GraphicalModel& model, std::size_t cap = kDefaultEnumerationCap);

/// e^{-2 gamma}/q_i min over cliques containing i of lambda_min(G^c).
double npc_bound(const GraphicalModel& model, int vertex, double gamma);

enum class LlcNorm { kL2, kLinf2 };

struct LlcResult {
  double rho = 0.0;
  bool degenerate = false;
  bool singular_residual = false;
};

/// min x^T H x over feasible x with ||x_T|| = 1, H = E[g_ik g_ik'] over K_i.
LlcResult llc_constant(const GraphicalModel& model, const ExactDistribution& dist, int vertex,
                       std::span<const int> targets, LlcNorm norm);
LlcResult llc_constant(const GraphicalModel& model, int vertex, std::span<const int> targets, LlcNorm norm);

/// Maximal factors of the model's graph containing the vertex.
std::vector<int> default_targets(const FactorGraph& graph, int vertex);

struct LlcBoundReport {
  int vertex = 0;
  double llc_linf2 = 0.0;
  double llc_l2 = 0.0;
  double rho_npc = 0.0;
  double gamma = 0.0;
  int q = 0;
  int order = 0;
  double linf2_rhs = 0.0;
  bool linf2_holds = false;
  std::optional<double> l2_rhs;  // pairwise models with a chromatic number only
  std::optional<bool> l2_holds;
};

/// llc(linf2) >= rho_npc (e^{-2 gamma}/q)^{L-1} and, for pairwise models,
/// llc(l2) >= (rho_npc/chi)(e^{-2 gamma}/q), both up to 1e-8.
LlcBoundReport verify_llc_bounds(const GraphicalModel& model, const ExactDistribution& dist, int vertex,
                                 std::optional<int> chromatic_number = std::nullopt);

}  // namespace giso
