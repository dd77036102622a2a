#include "giso/suprise.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "giso/basis.hpp"
#include "giso/error.hpp"
#include "giso/parallel.hpp"
#include "giso/projection.hpp"

namespace giso {
namespace {

std::string clique_label(const std::vector<int>& c) {
  std::string out = "{";
  for (std::size_t j = 0; j < c.size(); ++j) out += (j ? "," : "") + std::to_string(c[j] + 1);
  return out + "}";
}

std::vector<int> targets_in(const FactorGraph& graph, const CliqueStructure& cs, int vertex) {
  std::vector<int> out;
  for (int id : cs.maximal_factors) {
    const auto& scope = graph.factor(id).scope;
    if (std::binary_search(scope.begin(), scope.end(), vertex)) out.push_back(id);
  }
  return out;
}

double l2_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

double suprise_epsilon(double rho_npc, double alpha, double gamma, int order, double gamma_hat, int q) {
  const double eps = rho_npc * alpha * alpha * std::exp(-gamma * (2.0 * order - 1.0)) /
                     (20.0 * (1.0 + gamma_hat) * std::pow(static_cast<double>(q), order - 1));
  return std::min(eps, 1.0);
}

std::optional<double> default_rho_npc(BasisKind basis, double gamma, int q) {
  switch (basis) {
    case BasisKind::kMonomial: return 1.0;
    case BasisKind::kIndicator: return std::exp(-2.0 * gamma) / static_cast<double>(q);
    case BasisKind::kCustom: return std::nullopt;
  }
  return std::nullopt;
}

std::vector<double> clique_average(const std::vector<std::map<int, double>>& estimates, const std::vector<int>& clique,
                                   const std::vector<int>& span) {
  std::vector<double> avg(span.size(), 0.0);
  for (int u : clique) {
    if (u < 0 || static_cast<std::size_t>(u) >= estimates.size()) {
      throw InputError("no estimate for node " + std::to_string(u + 1));
    }
    const auto& est = estimates[static_cast<std::size_t>(u)];
    for (std::size_t k = 0; k < span.size(); ++k) {
      const auto it = est.find(span[k]);
      if (it == est.end()) {
        throw InputError("node " + std::to_string(u + 1) + " has no estimate for factor " + std::to_string(span[k]) +
                         " of clique " + clique_label(clique));
      }
      avg[k] += it->second;
    }
  }
  for (double& a : avg) a /= static_cast<double>(clique.size());
  return avg;
}

ThresholdDecision threshold_cliques(const CliqueStructure& cliques, const std::vector<std::map<int, double>>& estimates,
                                    double alpha) {
  ThresholdDecision out;
  for (std::size_t c = 0; c < cliques.cliques.size(); ++c) {
    const auto& clique = cliques.cliques[c];
    auto avg = clique_average(estimates, clique, cliques.spans[c]);
    const double norm = l2_norm(avg);
    out.norms[clique] = norm;
    if (norm < alpha / 2.0) {
      out.removed.push_back(clique);
      out.removed_factors.insert(out.removed_factors.end(), cliques.spans[c].begin(), cliques.spans[c].end());
    } else {
      out.kept_averages[clique] = std::move(avg);
    }
  }
  std::sort(out.removed_factors.begin(), out.removed_factors.end());
  return out;
}

NodeEstimate estimate_node(const FactorGraph& family, BasisKind basis, const Alphabet& alphabet,
                           const WeightedConfigurations& data, int vertex, double gamma_hat,
                           const SolverOptions& options) {
  if (vertex < 0 || vertex >= family.p()) throw InputError("node out of range");
  const BasisTables tables(family, alphabet, basis);
  const auto& ids = family.incident(vertex);
  LocalProblem problem = build_local_problem(family, tables, data, vertex, gamma_hat,
                                             default_constraints(basis, family, alphabet, ids));
  NodeEstimate out;
  out.vertex = vertex;
  out.factor_ids = problem.factor_ids;
  out.is_target = problem.is_target;
  out.report = grise(problem, options);
  return out;
}

StructureReport run_suprise(const FactorGraph& family, BasisKind basis, const Alphabet& alphabet,
                            const WeightedConfigurations& data, const SupriseConfig& config) {
  if (!(config.alpha > 0.0)) throw InputError("alpha must be positive");
  if (!(config.gamma_hat > 0.0)) throw InputError("gamma_hat must be positive");
  if (data.p != family.p() || alphabet.p() != family.p()) throw InputError("data width does not match the family");
  const int order = family.interaction_order();
  if (config.order && *config.order != order) {
    throw InputError("interaction order " + std::to_string(*config.order) + " does not match the family's " +
                     std::to_string(order));
  }
  const int q = alphabet.max_size();
  const double gamma = config.gamma ? *config.gamma : config.gamma_hat;
  std::optional<double> rho = config.rho_npc ? config.rho_npc : default_rho_npc(basis, gamma, q);
  if (!rho) throw InputError("custom bases need an explicit rho_npc");

  StructureReport report;
  report.p = family.p();
  report.basis = basis;
  report.alphabet = alphabet;
  if (config.epsilon_override) {
    report.epsilon = *config.epsilon_override;
    report.guarantee_void = true;
    warn("epsilon override in effect: the SUPRISE recovery guarantee is void");
  } else {
    report.epsilon = suprise_epsilon(*rho, config.alpha, gamma, order, config.gamma_hat, q);
  }
  SolverOptions options;
  options.epsilon = report.epsilon;
  options.max_iterations = config.max_iterations_override;
  if (!options.max_iterations) {
    std::size_t widest = 0;
    for (int u = 0; u < family.p(); ++u) widest = std::max(widest, family.incident(u).size());
    const std::size_t t = iterations_for_epsilon(report.epsilon, widest);
    if (t > kMaxGuaranteedIterations) {
      throw InputError("epsilon = " + std::to_string(report.epsilon) + " needs " + std::to_string(t) +
                       " iterations per node; pass an epsilon or iteration override");
    }
  }

  const BasisTables tables(family, alphabet, basis);
  std::vector<int> alive;
  for (const Factor& f : family.factors()) alive.push_back(f.id);

  std::vector<std::map<int, double>> last_estimates;
  std::map<std::vector<int>, std::vector<double>> last_averages;
  bool last_round_ran = false;

  for (int t = 0; t < order; ++t) {
    RoundLog log;
    log.t = t;
    if (alive.empty()) {
      log.skipped = true;
      report.rounds.push_back(std::move(log));
      last_round_ran = false;
      continue;
    }
    const FactorGraph graph = induced_subgraph(family, alive);
    const CliqueStructure cs = maximal_cliques(graph);

    std::vector<std::map<int, double>> estimates(static_cast<std::size_t>(family.p()));
    std::vector<std::optional<NodeSolve>> solves(static_cast<std::size_t>(family.p()));
    parallel_for(static_cast<std::size_t>(family.p()), config.threads, [&](std::size_t i) {
      const int u = static_cast<int>(i);
      const auto& ids = graph.incident(u);
      if (ids.empty()) return;
      try {
        LocalProblem problem = build_local_problem(graph, tables, data, u, config.gamma_hat,
                                                   default_constraints(basis, graph, alphabet, ids),
                                                   targets_in(graph, cs, u));
        const SolverReport r = grise(problem, options);
        for (std::size_t k = 0; k < ids.size(); ++k) estimates[i][ids[k]] = r.theta[k];
        solves[i] = NodeSolve{t, u, ids.size(), r.iterations, r.best_iteration, r.best_value, r.l1_norm,
                              r.l1_exceeds_prior, r.solve_seconds, r.projection_seconds};
      } catch (const SolverError& e) {
        throw SolverError("round " + std::to_string(t) + ", node " + std::to_string(u + 1) + ": " + e.what());
      }
    });
    for (auto& s : solves) {
      if (s) report.solves.push_back(*s);
    }

    ThresholdDecision decision = threshold_cliques(cs, estimates, config.alpha);
    log.removed = std::move(decision.removed);
    log.norms = std::move(decision.norms);
    last_averages = std::move(decision.kept_averages);
    const std::set<int> removed_ids(decision.removed_factors.begin(), decision.removed_factors.end());
    std::erase_if(alive, [&](int id) { return removed_ids.count(id) > 0; });
    report.rounds.push_back(std::move(log));
    last_estimates = std::move(estimates);
    last_round_ran = true;
  }

  report.surviving_factors = alive;
  const FactorGraph final_graph = induced_subgraph(family, alive);
  const CliqueStructure final_cs = maximal_cliques(final_graph);
  report.cliques = final_cs.cliques;
  for (std::size_t c = 0; c < final_cs.cliques.size(); ++c) {
    const auto& clique = final_cs.cliques[c];
    const auto& span = final_cs.spans[c];
    std::vector<double> avg(span.size(), 0.0);
    bool tested = false;
    if (const auto it = last_averages.find(clique); it != last_averages.end()) {
      avg = it->second;
      tested = true;
    } else if (last_round_ran) {
      avg = clique_average(last_estimates, clique, span);
    }
    for (std::size_t k = 0; k < span.size(); ++k) {
      const Factor& f = family.factor(span[k]);
      report.parameters.push_back({f.id, f.scope, f.assignment, avg[k], tested});
    }
  }
  return report;
}

StructureReport run_suprise(const FactorGraph& family, BasisKind basis, const SampleSet& samples,
                            const SupriseConfig& config) {
  return run_suprise(family, basis, samples.alphabet, WeightedConfigurations::from_samples(samples), config);
}

RecoveryMetrics evaluate_estimate(const GraphicalModel& truth, const StructureReport& report,
                                  std::optional<int> chromatic_number, std::optional<double> alpha) {
  if (report.p != truth.graph.p()) throw InputError("report and truth have different vertex counts");
  if (report.basis != truth.basis) throw InputError("report and truth use different bases");
  if (report.alphabet.sizes != truth.alphabet.sizes) throw InputError("report and truth have different alphabets");

  // Factors are matched on (scope, assignment, occurrence among equal keys).
  using Key = std::tuple<std::vector<int>, std::vector<int>, int>;
  std::map<Key, double> estimate;
  {
    std::map<std::pair<std::vector<int>, std::vector<int>>, int> seen;
    for (const auto& e : report.parameters) {
      const int occurrence = seen[{e.scope, e.assignment}]++;
      estimate[{e.scope, e.assignment, occurrence}] = e.theta_avg;
    }
  }
  std::map<int, Key> truth_key;
  {
    std::map<std::pair<std::vector<int>, std::vector<int>>, int> seen;
    for (const Factor& f : truth.graph.factors()) {
      truth_key[f.id] = {f.scope, f.assignment, seen[{f.scope, f.assignment}]++};
    }
  }

  std::vector<int> nonzero;
  for (const Factor& f : truth.graph.factors()) {
    if (truth.parameter(f.id) != 0.0) nonzero.push_back(f.id);
  }
  const CliqueStructure truth_cs = maximal_cliques(induced_subgraph(truth.graph, nonzero));

  RecoveryMetrics m;
  m.true_cliques = truth_cs.cliques.size();
  m.estimated_cliques = report.cliques.size();
  const std::set<std::vector<int>> estimated(report.cliques.begin(), report.cliques.end());
  for (const auto& c : truth_cs.cliques) m.correct_cliques += estimated.count(c);
  m.precision = m.estimated_cliques ? static_cast<double>(m.correct_cliques) / static_cast<double>(m.estimated_cliques) : 1.0;
  m.recall = m.true_cliques ? static_cast<double>(m.correct_cliques) / static_cast<double>(m.true_cliques) : 1.0;
  m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;

  double total = 0.0;
  for (std::size_t c = 0; c < truth_cs.cliques.size(); ++c) {
    double err = 0.0;
    for (int id : truth_cs.spans[c]) {
      const auto it = estimate.find(truth_key[id]);
      const double est = it == estimate.end() ? 0.0 : it->second;
      err += (est - truth.parameter(id)) * (est - truth.parameter(id));
    }
    total += err;
    m.linf2_error = std::max(m.linf2_error, std::sqrt(err));
  }
  m.l2_error = std::sqrt(total);
  if (chromatic_number && alpha) {
    m.chi_budget = static_cast<double>(*chromatic_number) * static_cast<double>(*chromatic_number) * *alpha * *alpha / 4.0;
    m.within_chi_budget = total <= *m.chi_budget;
  }
  return m;
}

}  // namespace giso
