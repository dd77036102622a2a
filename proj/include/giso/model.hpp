#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace giso {

/// Default cap on the number of joint configurations any exhaustive routine
/// will visit.
inline constexpr std::size_t kDefaultEnumerationCap = std::size_t{1} << 20;

/// Per-vertex alphabet sizes. Symbols of vertex i are 0..sizes[i]-1.
struct Alphabet {
  std::vector<int> sizes;

  static Alphabet uniform(int p, int q);

  int p() const { return static_cast<int>(sizes.size()); }
  int size(int vertex) const { return sizes[static_cast<std::size_t>(vertex)]; }
  int max_size() const;

  /// Product of alphabet sizes over `vertices`; saturates at SIZE_MAX.
  std::size_t configuration_count(std::span<const int> vertices) const;
  std::size_t joint_configuration_count() const;

  void validate() const;
};

enum class BasisKind { kMonomial, kIndicator, kCustom };

std::string to_string(BasisKind kind);
BasisKind basis_kind_from_string(const std::string& name);

/// One basis function f_k. `scope` is sorted, 0-based. The payload depends on
/// the basis: nothing for monomials, one letter per scope vertex for
/// indicators, a dense value table (last scope vertex fastest) for custom.
struct Factor {
  int id = -1;
  std::vector<int> scope;
  std::vector<int> assignment;
  std::vector<double> table;

  /// Same scope and same basis payload.
  bool same_function(const Factor& other) const {
    return scope == other.scope && assignment == other.assignment && table == other.table;
  }
};

/// Bipartite vertex/factor graph. Factor ids are stable across
/// induced subgraphs so that estimates can be mapped back to the family.
class FactorGraph {
 public:
  FactorGraph() = default;

  /// Validates scopes against `p`, assigns ids to factors that have none
  /// (their position), and builds the per-vertex incidence lists.
  static FactorGraph build(int p, std::vector<Factor> factors);

  int p() const { return p_; }
  std::size_t factor_count() const { return factors_.size(); }
  const std::vector<Factor>& factors() const { return factors_; }

  /// Factor ids whose scope contains `vertex`, in graph order.
  const std::vector<int>& incident(int vertex) const {
    return incident_[static_cast<std::size_t>(vertex)];
  }

  bool contains(int id) const;
  const Factor& factor(int id) const;
  std::size_t position(int id) const;

  /// Largest scope size (the interaction order L); 0 for an empty graph.
  int interaction_order() const;

 private:
  int p_ = 0;
  std::vector<Factor> factors_;
  std::vector<std::vector<int>> incident_;
  std::vector<std::int64_t> position_by_id_;
};

/// Maximal factors, maximal cliques and their spans. Cliques are sorted
/// lexicographically; spans[c] lists the factor ids whose scope is cliques[c].
struct CliqueStructure {
  std::vector<int> maximal_factors;
  std::vector<std::vector<int>> cliques;
  std::vector<std::vector<int>> spans;

  /// Index of `clique` in `cliques`, or -1.
  int find(const std::vector<int>& clique) const;
};

CliqueStructure maximal_cliques(const FactorGraph& graph);

/// Same vertex set, factors restricted to `keep` (unknown ids are rejected).
FactorGraph induced_subgraph(const FactorGraph& graph, std::span<const int> keep);

/// Distinct factor scopes, sorted.
std::vector<std::vector<int>> distinct_scopes(const FactorGraph& graph);

struct GraphicalModel {
  FactorGraph graph;
  Alphabet alphabet;
  BasisKind basis = BasisKind::kMonomial;
  std::vector<double> theta;  // indexed by factor id

  /// Checks ids are 0..K-1 in order, theta length, basis payloads and
  /// alphabet compatibility.
  void validate() const;

  double parameter(int id) const { return theta[static_cast<std::size_t>(id)]; }
};

struct InteractionStrength {
  std::vector<double> per_vertex;
  std::vector<bool> is_bound;  // true when the l1 bound replaced enumeration
  double global = 0.0;
};

/// gamma_u = max over configurations of |sum_{k in K_u} theta_k g_uk|, by
/// enumeration of the joint scope of K_u when it fits under `cap`, otherwise
/// the l1 bound sum |theta_k|.
InteractionStrength interaction_strength_bound(const GraphicalModel& model,
                                               std::size_t cap = kDefaultEnumerationCap);

/// Mixed-radix helpers: last position fastest.
std::size_t encode_configuration(std::span<const int> symbols, std::span<const int> radix);
void decode_configuration(std::size_t index, std::span<const int> radix, std::span<int> symbols);

}  // namespace giso
