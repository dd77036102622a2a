#include "giso/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "giso/basis.hpp"
#include "giso/error.hpp"

namespace giso {
namespace {

std::string format_scope(const std::vector<int>& scope) {
  std::ostringstream os;
  os << '{';
  for (std::size_t j = 0; j < scope.size(); ++j) os << (j ? "," : "") << scope[j] + 1;
  os << '}';
  return os.str();
}

bool strict_subset(const std::vector<int>& a, const std::vector<int>& b) {
  return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

Alphabet Alphabet::uniform(int p, int q) { return Alphabet{std::vector<int>(static_cast<std::size_t>(p), q)}; }

int Alphabet::max_size() const {
  return sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
}

std::size_t Alphabet::configuration_count(std::span<const int> vertices) const {
  std::size_t count = 1;
  for (int v : vertices) {
    const auto q = static_cast<std::size_t>(size(v));
    if (count > std::numeric_limits<std::size_t>::max() / q) return std::numeric_limits<std::size_t>::max();
    count *= q;
  }
  return count;
}

std::size_t Alphabet::joint_configuration_count() const {
  std::vector<int> all(sizes.size());
  std::iota(all.begin(), all.end(), 0);
  return configuration_count(all);
}

void Alphabet::validate() const {
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 2) {
      throw InputError("alphabet size of vertex " + std::to_string(i + 1) + " is " +
                       std::to_string(sizes[i]) + "; every alphabet needs at least 2 symbols");
    }
  }
}

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::kMonomial: return "monomial";
    case BasisKind::kIndicator: return "indicator";
    case BasisKind::kCustom: return "custom";
  }
  return "unknown";
}

BasisKind basis_kind_from_string(const std::string& name) {
  if (name == "monomial") return BasisKind::kMonomial;
  if (name == "indicator") return BasisKind::kIndicator;
  if (name == "custom") return BasisKind::kCustom;
  throw InputError("unknown basis '" + name + "' (expected monomial, indicator or custom)");
}

FactorGraph FactorGraph::build(int p, std::vector<Factor> factors) {
  if (p < 1) throw InputError("vertex count must be positive");
  FactorGraph graph;
  graph.p_ = p;
  graph.incident_.assign(static_cast<std::size_t>(p), {});

  std::int64_t max_id = -1;
  for (std::size_t pos = 0; pos < factors.size(); ++pos) {
    Factor& f = factors[pos];
    if (f.id < 0) f.id = static_cast<int>(pos);
    max_id = std::max<std::int64_t>(max_id, f.id);
    if (f.scope.empty()) throw InputError("factor " + std::to_string(f.id) + " has an empty scope");
    for (std::size_t j = 0; j < f.scope.size(); ++j) {
      if (f.scope[j] < 0 || f.scope[j] >= p) {
        throw InputError("factor " + std::to_string(f.id) + " scope " + format_scope(f.scope) +
                         " references a vertex outside 1.." + std::to_string(p));
      }
      if (j > 0 && f.scope[j] <= f.scope[j - 1]) {
        throw InputError("factor " + std::to_string(f.id) + " scope " + format_scope(f.scope) +
                         " must be strictly increasing");
      }
    }
  }

  graph.position_by_id_.assign(static_cast<std::size_t>(max_id + 1), -1);
  for (std::size_t pos = 0; pos < factors.size(); ++pos) {
    auto& slot = graph.position_by_id_[static_cast<std::size_t>(factors[pos].id)];
    if (slot >= 0) throw InputError("factor id " + std::to_string(factors[pos].id) + " appears twice");
    slot = static_cast<std::int64_t>(pos);
  }

  // Duplicate detection: group by scope, compare payloads within a group.
  std::map<std::vector<int>, std::vector<std::size_t>> by_scope;
  for (std::size_t pos = 0; pos < factors.size(); ++pos) {
    auto& bucket = by_scope[factors[pos].scope];
    for (std::size_t other : bucket) {
      if (factors[other].same_function(factors[pos])) {
        throw InputError("duplicate factor: ids " + std::to_string(factors[other].id) + " and " +
                         std::to_string(factors[pos].id) + " share scope " +
                         format_scope(factors[pos].scope) + " and basis payload");
      }
    }
    bucket.push_back(pos);
  }

  for (const Factor& f : factors) {
    for (int v : f.scope) graph.incident_[static_cast<std::size_t>(v)].push_back(f.id);
  }
  graph.factors_ = std::move(factors);
  return graph;
}

bool FactorGraph::contains(int id) const {
  return id >= 0 && static_cast<std::size_t>(id) < position_by_id_.size() &&
         position_by_id_[static_cast<std::size_t>(id)] >= 0;
}

std::size_t FactorGraph::position(int id) const {
  if (!contains(id)) throw InputError("unknown factor id " + std::to_string(id));
  return static_cast<std::size_t>(position_by_id_[static_cast<std::size_t>(id)]);
}

const Factor& FactorGraph::factor(int id) const { return factors_[position(id)]; }

int FactorGraph::interaction_order() const {
  std::size_t order = 0;
  for (const Factor& f : factors_) order = std::max(order, f.scope.size());
  return static_cast<int>(order);
}

int CliqueStructure::find(const std::vector<int>& clique) const {
  auto it = std::lower_bound(cliques.begin(), cliques.end(), clique);
  if (it == cliques.end() || *it != clique) return -1;
  return static_cast<int>(it - cliques.begin());
}

std::vector<std::vector<int>> distinct_scopes(const FactorGraph& graph) {
  std::set<std::vector<int>> scopes;
  for (const Factor& f : graph.factors()) scopes.insert(f.scope);
  return {scopes.begin(), scopes.end()};
}

CliqueStructure maximal_cliques(const FactorGraph& graph) {
  // Containment is decided on distinct scopes; all factors sharing a scope
  // share the verdict.
  const auto scopes = distinct_scopes(graph);
  std::vector<bool> maximal(scopes.size(), true);
  for (std::size_t a = 0; a < scopes.size(); ++a) {
    for (std::size_t b = 0; b < scopes.size() && maximal[a]; ++b) {
      if (a != b && strict_subset(scopes[a], scopes[b])) maximal[a] = false;
    }
  }

  CliqueStructure result;
  for (std::size_t a = 0; a < scopes.size(); ++a) {
    if (maximal[a]) result.cliques.push_back(scopes[a]);
  }
  result.spans.assign(result.cliques.size(), {});
  for (const Factor& f : graph.factors()) {
    const int c = result.find(f.scope);
    if (c >= 0) {
      result.spans[static_cast<std::size_t>(c)].push_back(f.id);
      result.maximal_factors.push_back(f.id);
    }
  }
  return result;
}

FactorGraph induced_subgraph(const FactorGraph& graph, std::span<const int> keep) {
  std::vector<bool> kept(graph.factor_count(), false);
  for (int id : keep) kept[graph.position(id)] = true;
  std::vector<Factor> factors;
  for (std::size_t pos = 0; pos < graph.factor_count(); ++pos) {
    if (kept[pos]) factors.push_back(graph.factors()[pos]);
  }
  return FactorGraph::build(graph.p(), std::move(factors));
}

void GraphicalModel::validate() const {
  alphabet.validate();
  if (alphabet.p() != graph.p()) {
    throw InputError("alphabet lists " + std::to_string(alphabet.p()) + " vertices but the graph has " +
                     std::to_string(graph.p()));
  }
  if (theta.size() != graph.factor_count()) {
    throw InputError("theta has " + std::to_string(theta.size()) + " entries for " +
                     std::to_string(graph.factor_count()) + " factors");
  }
  for (std::size_t pos = 0; pos < graph.factor_count(); ++pos) {
    const Factor& f = graph.factors()[pos];
    if (f.id != static_cast<int>(pos)) throw InputError("model factor ids must be 0..K-1 in order");
    const std::string where = "factor " + std::to_string(f.id) + " " + format_scope(f.scope);
    switch (basis) {
      case BasisKind::kMonomial:
        for (int v : f.scope) {
          if (alphabet.size(v) != 2) throw InputError("monomial basis requires binary alphabets (" + where + ")");
        }
        if (!f.assignment.empty() || !f.table.empty()) throw InputError("monomial " + where + " carries a payload");
        break;
      case BasisKind::kIndicator:
        if (f.assignment.size() != f.scope.size()) {
          throw InputError("indicator " + where + " needs one assignment letter per scope vertex");
        }
        for (std::size_t j = 0; j < f.scope.size(); ++j) {
          if (f.assignment[j] < 0 || f.assignment[j] >= alphabet.size(f.scope[j])) {
            throw InputError("indicator " + where + " assignment letter out of range");
          }
        }
        if (!f.table.empty()) throw InputError("indicator " + where + " carries a table");
        break;
      case BasisKind::kCustom:
        if (f.table.size() != alphabet.configuration_count(f.scope)) {
          throw InputError("custom " + where + " table has " + std::to_string(f.table.size()) +
                           " values, expected " + std::to_string(alphabet.configuration_count(f.scope)));
        }
        if (!f.assignment.empty()) throw InputError("custom " + where + " carries an assignment");
        break;
    }
    if (!std::isfinite(theta[pos])) throw InputError(where + " has a non-finite parameter");
  }
}

std::size_t encode_configuration(std::span<const int> symbols, std::span<const int> radix) {
  std::size_t index = 0;
  for (std::size_t j = 0; j < radix.size(); ++j) {
    index = index * static_cast<std::size_t>(radix[j]) + static_cast<std::size_t>(symbols[j]);
  }
  return index;
}

void decode_configuration(std::size_t index, std::span<const int> radix, std::span<int> symbols) {
  for (std::size_t j = radix.size(); j-- > 0;) {
    const auto r = static_cast<std::size_t>(radix[j]);
    symbols[j] = static_cast<int>(index % r);
    index /= r;
  }
}

InteractionStrength interaction_strength_bound(const GraphicalModel& model, std::size_t cap) {
  const int p = model.graph.p();
  InteractionStrength result;
  result.per_vertex.assign(static_cast<std::size_t>(p), 0.0);
  result.is_bound.assign(static_cast<std::size_t>(p), false);

  const BasisTables tables(model.graph, model.alphabet, model.basis);
  for (int u = 0; u < p; ++u) {
    const auto& incident = model.graph.incident(u);
    std::set<int> joint;
    for (int id : incident) joint.insert(model.graph.factor(id).scope.begin(), model.graph.factor(id).scope.end());
    const std::vector<int> vars(joint.begin(), joint.end());
    const std::size_t count = model.alphabet.configuration_count(vars);

    double gamma_u = 0.0;
    if (count > cap) {
      for (int id : incident) gamma_u += std::abs(model.parameter(id));
      result.is_bound[static_cast<std::size_t>(u)] = true;
    } else {
      std::vector<int> radix(vars.size());
      for (std::size_t j = 0; j < vars.size(); ++j) radix[j] = model.alphabet.size(vars[j]);
      std::vector<int> local(vars.size());
      std::vector<int> full(static_cast<std::size_t>(p), 0);
      for (std::size_t c = 0; c < count; ++c) {
        decode_configuration(c, radix, local);
        for (std::size_t j = 0; j < vars.size(); ++j) full[static_cast<std::size_t>(vars[j])] = local[j];
        double energy = 0.0;
        for (int id : incident) {
          const FactorTable& t = tables.at(id);
          energy += model.parameter(id) * t.centered_at(u)[t.index_of(full)];
        }
        gamma_u = std::max(gamma_u, std::abs(energy));
      }
    }
    result.per_vertex[static_cast<std::size_t>(u)] = gamma_u;
    result.global = std::max(result.global, gamma_u);
  }
  return result;
}

}  // namespace giso
