#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "giso/model.hpp"

namespace giso {

/// Dense per-factor tables over scope configurations (last scope vertex
/// fastest): the basis function f, the locally centered g for every scope
/// vertex, and the globally centered h.
struct FactorTable {
  std::vector<int> scope;
  std::vector<int> radix;
  std::vector<std::size_t> stride;
  std::vector<double> f;
  std::vector<std::vector<double>> g;  // g[j] is centered at scope[j]
  std::vector<double> h;

  std::size_t size() const { return f.size(); }
  /// Position of `vertex` inside the scope, or -1.
  int local_position(int vertex) const;
  /// Index of the configuration read off a full-length symbol vector.
  std::size_t index_of(std::span<const int> full_configuration) const;
  const std::vector<double>& centered_at(int vertex) const;
};

/// f_k at a configuration over the factor's scope.
double eval_f(const Factor& factor, BasisKind basis, const Alphabet& alphabet,
              std::span<const int> scope_symbols);

/// Centered univariate indicator: 1 - 1/q if symbol == letter, else -1/q.
inline double centered_indicator(int letter, int symbol, int q) {
  return (letter == symbol ? 1.0 : 0.0) - 1.0 / static_cast<double>(q);
}

/// Dense f table over the scope.
std::vector<double> tabulate_f(const Factor& factor, BasisKind basis, const Alphabet& alphabet);

struct LocalCentering {
  std::vector<double> phi;  // over configurations of scope \ {vertex}
  std::vector<double> g;    // over configurations of scope
};

LocalCentering local_center(const Factor& factor, BasisKind basis, const Alphabet& alphabet,
                            int vertex);

/// Centers a dense table along scope position `position` (subtracts the mean
/// over that coordinate).
std::vector<double> center_along(std::span<const double> table, std::span<const int> radix,
                                 std::size_t position);

/// h_k: the table centered along every scope coordinate in turn, which
/// expands to the inclusion-exclusion sum over nonempty subsets of the scope.
std::vector<double> global_center(std::span<const double> table, std::span<const int> radix);
std::vector<double> global_center(const Factor& factor, BasisKind basis, const Alphabet& alphabet);

FactorTable build_factor_table(const Factor& factor, BasisKind basis, const Alphabet& alphabet);

/// Cached tables for every factor of a graph, addressed by factor id.
class BasisTables {
 public:
  BasisTables() = default;
  BasisTables(const FactorGraph& graph, const Alphabet& alphabet, BasisKind basis);

  const FactorTable& at(int id) const;
  BasisKind basis() const { return basis_; }
  const Alphabet& alphabet() const { return alphabet_; }

 private:
  BasisKind basis_ = BasisKind::kMonomial;
  Alphabet alphabet_;
  std::vector<FactorTable> tables_;
  std::vector<std::int64_t> slot_by_id_;
};

struct NormalizationEntry {
  int vertex = 0;
  int factor = 0;
  double max_abs_g = 0.0;
  bool violated = false;
};

struct NormalizationReport {
  std::vector<NormalizationEntry> entries;
  bool ok() const;
};

inline constexpr double kNormalizationTolerance = 1e-12;

/// max |g_ik| for every incident (i, k); entries above 1 + 1e-12 are flagged
/// and, when `warn_on_violation` is set, reported through giso::warn.
NormalizationReport check_normalization(const GraphicalModel& model, bool warn_on_violation = true);

}  // namespace giso
