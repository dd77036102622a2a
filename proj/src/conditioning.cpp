#include "giso/conditioning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "giso/basis.hpp"
#include "giso/error.hpp"

namespace giso {
namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

std::vector<int> span_of(const FactorGraph& graph, const std::vector<int>& clique) {
  std::vector<int> span;
  for (const Factor& f : graph.factors()) {
    if (f.scope == clique) span.push_back(f.id);
  }
  return span;
}

// Rows: clique configurations; columns: span factors.
Eigen::MatrixXd centered_design(const FactorGraph& graph, const Alphabet& alphabet, BasisKind basis,
                                std::span<const int> span) {
  const auto& scope = graph.factor(span.front()).scope;
  const auto rows = static_cast<Eigen::Index>(alphabet.configuration_count(scope));
  Eigen::MatrixXd h(rows, static_cast<Eigen::Index>(span.size()));
  for (std::size_t k = 0; k < span.size(); ++k) {
    const auto table = global_center(graph.factor(span[k]), basis, alphabet);
    for (Eigen::Index r = 0; r < rows; ++r) h(r, static_cast<Eigen::Index>(k)) = table[static_cast<std::size_t>(r)];
  }
  return h;
}

double restricted_lambda_min(const Eigen::MatrixXd& m, const Eigen::MatrixXd& basis) {
  if (basis.cols() == 0) return kInfinity;
  return symmetric_lambda_min(basis.transpose() * m * basis);
}

// Schur complement of `m` onto the index set `keep`, minimizing the others
// out in closed form through a pseudo-inverse.
Eigen::MatrixXd schur_onto(const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& keep, bool& singular) {
  std::vector<Eigen::Index> rest;
  for (Eigen::Index j = 0; j < m.rows(); ++j) {
    if (std::find(keep.begin(), keep.end(), j) == keep.end()) rest.push_back(j);
  }
  const Eigen::MatrixXd a = m(keep, keep);
  if (rest.empty()) return a;
  const Eigen::MatrixXd b = m(keep, rest);
  const Eigen::MatrixXd c = m(rest, rest);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
  const Eigen::VectorXd& values = eig.eigenvalues();
  const double tol = 1e-12 * std::max(1.0, values.cwiseAbs().maxCoeff());
  Eigen::VectorXd inv(values.size());
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    if (values(j) > tol) {
      inv(j) = 1.0 / values(j);
    } else {
      inv(j) = 0.0;
      singular = true;
    }
  }
  const Eigen::MatrixXd c_pinv = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
  return a - b * c_pinv * b.transpose();
}

}  // namespace

double symmetric_lambda_min(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw SolverError("symmetric eigen-solve did not converge");
  return eig.eigenvalues()(0);
}

FeasibleSubspace feasible_subspace(const FactorGraph& graph, const Alphabet& alphabet, BasisKind basis,
                                   std::span<const int> factor_ids) {
  FeasibleSubspace out;
  std::map<std::vector<int>, std::size_t> group_of_scope;
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t local = 0; local < factor_ids.size(); ++local) {
    const auto& scope = graph.factor(factor_ids[local]).scope;
    auto [it, inserted] = group_of_scope.try_emplace(scope, out.group_scopes.size());
    if (inserted) {
      out.group_scopes.push_back(scope);
      members.emplace_back();
    }
    members[it->second].push_back(local);
  }

  std::vector<Eigen::VectorXd> columns;
  for (std::size_t g = 0; g < members.size(); ++g) {
    const auto& scope = out.group_scopes[g];
    std::vector<int> radix;
    for (int v : scope) radix.push_back(alphabet.size(v));
    const std::size_t configs = alphabet.configuration_count(scope);

    // Position of each assignment inside the group, when the group is a
    // complete indicator family.
    std::vector<std::size_t> coord_of(configs, std::numeric_limits<std::size_t>::max());
    bool complete = basis == BasisKind::kIndicator && members[g].size() == configs;
    if (complete) {
      for (std::size_t local : members[g]) {
        const Factor& f = graph.factor(factor_ids[local]);
        const std::size_t a = encode_configuration(f.assignment, radix);
        if (coord_of[a] != std::numeric_limits<std::size_t>::max()) {
          complete = false;
          break;
        }
        coord_of[a] = local;
      }
    }

    if (!complete) {
      for (std::size_t local : members[g]) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(factor_ids.size()));
        e(static_cast<Eigen::Index>(local)) = 1.0;
        columns.push_back(std::move(e));
        out.column_group.push_back(g);
      }
      continue;
    }

    const auto n = static_cast<Eigen::Index>(configs);
    Eigen::MatrixXd projector(n, n);
    std::vector<int> sigma(scope.size());
    std::vector<int> s(scope.size());
    for (std::size_t a = 0; a < configs; ++a) {
      decode_configuration(a, radix, sigma);
      for (std::size_t b = 0; b < configs; ++b) {
        decode_configuration(b, radix, s);
        double v = 1.0;
        for (std::size_t j = 0; j < scope.size(); ++j) v *= centered_indicator(s[j], sigma[j], radix[j]);
        projector(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = v;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(projector);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (eig.eigenvalues()(j) < 0.5) continue;
      Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(factor_ids.size()));
      for (Eigen::Index a = 0; a < n; ++a) e(static_cast<Eigen::Index>(coord_of[static_cast<std::size_t>(a)])) = eig.eigenvectors()(a, j);
      columns.push_back(std::move(e));
      out.column_group.push_back(g);
    }
  }

  out.basis.resize(static_cast<Eigen::Index>(factor_ids.size()), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) out.basis.col(static_cast<Eigen::Index>(c)) = columns[c];
  return out;
}

CliqueMatrix clique_matrix(const FactorGraph& graph, const Alphabet& alphabet, BasisKind basis,
                           const std::vector<int>& clique, std::size_t cap) {
  const std::size_t configs = alphabet.configuration_count(clique);
  if (configs > cap) {
    throw InputError("clique has " + std::to_string(configs) + " configurations, above the enumeration cap " +
                     std::to_string(cap));
  }
  CliqueMatrix out;
  out.clique = clique;
  out.span = span_of(graph, clique);
  if (out.span.empty()) throw InputError("no factor has the requested clique as its scope");
  const Eigen::MatrixXd h = centered_design(graph, alphabet, basis, out.span);
  out.matrix = h.transpose() * h;
  out.lambda_min = symmetric_lambda_min(out.matrix);
  const FeasibleSubspace sub = feasible_subspace(graph, alphabet, basis, out.span);
  out.lambda_min_feasible = restricted_lambda_min(out.matrix, sub.basis);
  return out;
}

NpcVertex npc_exact(const GraphicalModel& model, const ExactDistribution& dist, int vertex, double gamma) {
  const FactorGraph& graph = model.graph;
  if (graph.incident(vertex).empty()) throw InputError("vertex " + std::to_string(vertex + 1) + " has no factors");
  const std::vector<double> marginal = vertex_marginal(dist, vertex);
  const double q_i = static_cast<double>(model.alphabet.size(vertex));
  const double scale = std::exp(-2.0 * gamma) / q_i;
  const CliqueStructure cs = maximal_cliques(graph);

  NpcVertex out;
  out.vertex = vertex;
  out.rho_exact = out.rho_bound = out.rho_exact_maximal = out.rho_bound_maximal = kInfinity;
  for (const auto& scope : distinct_scopes(graph)) {
    const auto pos = std::find(scope.begin(), scope.end(), vertex);
    if (pos == scope.end()) continue;
    const std::vector<int> span = span_of(graph, scope);
    const Eigen::MatrixXd h = centered_design(graph, model.alphabet, model.basis, span);

    // Row weights P(sigma_i) read off the clique configuration.
    std::vector<int> radix;
    for (int v : scope) radix.push_back(model.alphabet.size(v));
    std::size_t stride = 1;
    for (std::size_t j = radix.size(); j-- > static_cast<std::size_t>(pos - scope.begin()) + 1;) stride *= static_cast<std::size_t>(radix[j]);
    const auto q = static_cast<std::size_t>(model.alphabet.size(vertex));
    Eigen::VectorXd w(h.rows());
    for (Eigen::Index r = 0; r < h.rows(); ++r) w(r) = marginal[(static_cast<std::size_t>(r) / stride) % q];

    const FeasibleSubspace sub = feasible_subspace(graph, model.alphabet, model.basis, span);
    const double exact = restricted_lambda_min(h.transpose() * w.asDiagonal() * h, sub.basis);
    const double bound = scale * restricted_lambda_min(h.transpose() * h, sub.basis);
    if (exact < out.rho_exact) {
      out.rho_exact = exact;
      out.min_clique = scope;
    }
    out.rho_bound = std::min(out.rho_bound, bound);
    if (cs.find(scope) >= 0) {
      if (exact < out.rho_exact_maximal) {
        out.rho_exact_maximal = exact;
        out.min_clique_maximal = scope;
      }
      out.rho_bound_maximal = std::min(out.rho_bound_maximal, bound);
    }
  }
  out.degenerate = out.rho_exact <= kDegeneracyThreshold || out.rho_exact_maximal <= kDegeneracyThreshold;
  return out;
}

NpcVertex npc_exact(const GraphicalModel& model, int vertex) {
  const ExactDistribution dist = enumerate_distribution(model);
  return npc_exact(model, dist, vertex, interaction_strength_bound(model).global);
}

double npc_bound(const GraphicalModel& model, int vertex, double gamma) {
  const double scale = std::exp(-2.0 * gamma) / static_cast<double>(model.alphabet.size(vertex));
  double best = kInfinity;
  for (const auto& scope : distinct_scopes(model.graph)) {
    if (!std::binary_search(scope.begin(), scope.end(), vertex)) continue;
    best = std::min(best, scale * clique_matrix(model.graph, model.alphabet, model.basis, scope).lambda_min_feasible);
  }
  return best;
}

NpcReport npc_report(const GraphicalModel& model, std::size_t cap) {
  const ExactDistribution dist = enumerate_distribution(model, cap);
  NpcReport out;
  out.gamma = interaction_strength_bound(model, cap).global;
  out.rho_exact = out.rho_bound = kInfinity;
  for (int v = 0; v < model.graph.p(); ++v) {
    if (model.graph.incident(v).empty()) continue;
    out.vertices.push_back(npc_exact(model, dist, v, out.gamma));
    out.rho_exact = std::min(out.rho_exact, out.vertices.back().rho_exact);
    out.rho_bound = std::min(out.rho_bound, out.vertices.back().rho_bound);
  }
  return out;
}

std::vector<int> default_targets(const FactorGraph& graph, int vertex) {
  std::vector<int> out;
  for (int id : maximal_cliques(graph).maximal_factors) {
    const auto& scope = graph.factor(id).scope;
    if (std::binary_search(scope.begin(), scope.end(), vertex)) out.push_back(id);
  }
  return out;
}

LlcResult llc_constant(const GraphicalModel& model, const ExactDistribution& dist, int vertex,
                       std::span<const int> targets, LlcNorm norm) {
  if (targets.empty()) throw InputError("target set is empty; the LLC normalization is undefined");
  const auto& ids = model.graph.incident(vertex);
  for (int t : targets) {
    if (std::find(ids.begin(), ids.end(), t) == ids.end()) {
      throw InputError("target factor " + std::to_string(t) + " does not contain vertex " + std::to_string(vertex + 1));
    }
  }
  const Eigen::MatrixXd gram = fisher_gram(model, dist, vertex);
  const FeasibleSubspace sub = feasible_subspace(model.graph, model.alphabet, model.basis, ids);
  const Eigen::MatrixXd reduced = sub.basis.transpose() * gram * sub.basis;

  // A scope group is a target group when every one of its factors is a target.
  std::vector<int> group_target(sub.group_scopes.size(), -1);
  for (std::size_t local = 0; local < ids.size(); ++local) {
    const Factor& f = model.graph.factor(ids[local]);
    const auto g = static_cast<std::size_t>(std::find(sub.group_scopes.begin(), sub.group_scopes.end(), f.scope) -
                                            sub.group_scopes.begin());
    const int is_target = std::find(targets.begin(), targets.end(), f.id) != targets.end() ? 1 : 0;
    if (group_target[g] >= 0 && group_target[g] != is_target) {
      throw InputError("target set splits the factors sharing one scope");
    }
    group_target[g] = is_target;
  }

  LlcResult out;
  auto columns_where = [&](auto pred) {
    std::vector<Eigen::Index> cols;
    for (std::size_t c = 0; c < sub.column_group.size(); ++c) {
      if (pred(sub.column_group[c])) cols.push_back(static_cast<Eigen::Index>(c));
    }
    return cols;
  };
  if (norm == LlcNorm::kL2) {
    const auto keep = columns_where([&](std::size_t g) { return group_target[g] == 1; });
    out.rho = symmetric_lambda_min(schur_onto(reduced, keep, out.singular_residual));
  } else {
    out.rho = kInfinity;
    for (std::size_t g = 0; g < sub.group_scopes.size(); ++g) {
      if (group_target[g] != 1) continue;
      const auto keep = columns_where([&](std::size_t h) { return h == g; });
      if (keep.empty()) continue;
      out.rho = std::min(out.rho, symmetric_lambda_min(schur_onto(reduced, keep, out.singular_residual)));
    }
  }
  if (out.singular_residual) warn("LLC: residual block is singular; used its pseudo-inverse");
  out.degenerate = out.rho <= kDegeneracyThreshold;
  return out;
}

LlcResult llc_constant(const GraphicalModel& model, int vertex, std::span<const int> targets, LlcNorm norm) {
  return llc_constant(model, enumerate_distribution(model), vertex, targets, norm);
}

LlcBoundReport verify_llc_bounds(const GraphicalModel& model, const ExactDistribution& dist, int vertex,
                                 std::optional<int> chromatic_number) {
  LlcBoundReport out;
  out.vertex = vertex;
  out.gamma = interaction_strength_bound(model).global;
  out.q = model.alphabet.max_size();
  out.order = model.graph.interaction_order();
  const std::vector<int> targets = default_targets(model.graph, vertex);
  out.rho_npc = npc_exact(model, dist, vertex, out.gamma).rho_exact_maximal;
  out.llc_linf2 = llc_constant(model, dist, vertex, targets, LlcNorm::kLinf2).rho;
  out.llc_l2 = llc_constant(model, dist, vertex, targets, LlcNorm::kL2).rho;
  const double base = std::exp(-2.0 * out.gamma) / static_cast<double>(out.q);
  out.linf2_rhs = out.rho_npc * std::pow(base, out.order - 1);
  out.linf2_holds = out.llc_linf2 >= out.linf2_rhs - 1e-8;
  if (out.order == 2 && chromatic_number) {
    out.l2_rhs = out.rho_npc / static_cast<double>(*chromatic_number) * base;
    out.l2_holds = out.llc_l2 >= *out.l2_rhs - 1e-8;
  }
  return out;
}

}  // namespace giso
