#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "giso/model.hpp"

namespace giso {

enum class Topology { kChain, kGrid, kErdos, kComplete };

Topology topology_from_string(const std::string& name);
std::string to_string(Topology topology);

/// Vertex pairs (0-based, i < j) of a topology. Grids need p to be a perfect
/// square; Erdos-Renyi graphs use edge probability degree / (p - 1).
std::vector<std::pair<int, int>> topology_edges(Topology topology, int p, double degree, std::uint64_t seed);

struct GeneratorSpec {
  Topology topology = Topology::kChain;
  BasisKind basis = BasisKind::kMonomial;
  int p = 0;
  int q = 2;
  double degree = 3.0;
  std::pair<double, double> coupling_range{0.4, 0.7};
  std::pair<double, double> field_range{0.1, 0.3};
  bool fields = true;
  std::uint64_t seed = 0;
};

/// Random pairwise model. Monomial couplings are +/-U[a, b] with a fair sign.
/// Indicator couplings are random q x q tables projected onto the zero-sum
/// subspace and scaled to a Frobenius norm drawn from U[a, b]; their fields
/// are handled the same way over q entries.
GraphicalModel generate_model(const GeneratorSpec& spec);

/// All scopes of size 1..order over p vertices, with every assignment for
/// indicator bases. Parameters are zero.
GraphicalModel complete_family(int p, int order, BasisKind basis, const Alphabet& alphabet);

/// Factors (every assignment for indicator bases) over the given scopes.
std::vector<Factor> factors_for_scopes(const std::vector<std::vector<int>>& scopes, BasisKind basis,
                                       const Alphabet& alphabet);

}  // namespace giso
