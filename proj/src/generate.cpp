#include "giso/generate.hpp"

#include <algorithm>
#include <cmath>

#include "giso/basis.hpp"
#include "giso/error.hpp"
#include "giso/rng.hpp"

namespace giso {
namespace {

void subsets_of_size(int p, int size, int start, std::vector<int>& current, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == size) {
    out.push_back(current);
    return;
  }
  for (int v = start; v < p; ++v) {
    current.push_back(v);
    subsets_of_size(p, size, v + 1, current, out);
    current.pop_back();
  }
}

// Zero-sum table over `radix` with Frobenius norm `norm`.
std::vector<double> random_centered_table(std::span<const int> radix, double norm, Rng& rng) {
  std::size_t n = 1;
  for (int r : radix) n *= static_cast<std::size_t>(r);
  std::vector<double> raw(n);
  for (double& v : raw) v = rng.normal();
  auto table = global_center(raw, radix);
  double f = 0.0;
  for (double v : table) f += v * v;
  f = std::sqrt(f);
  if (f == 0.0) throw SolverError("degenerate random table");
  for (double& v : table) v *= norm / f;
  return table;
}

}  // namespace

Topology topology_from_string(const std::string& name) {
  if (name == "chain") return Topology::kChain;
  if (name == "grid") return Topology::kGrid;
  if (name == "erdos") return Topology::kErdos;
  if (name == "complete") return Topology::kComplete;
  throw InputError("unknown topology '" + name + "' (chain, grid, erdos, complete)");
}

std::string to_string(Topology topology) {
  switch (topology) {
    case Topology::kChain: return "chain";
    case Topology::kGrid: return "grid";
    case Topology::kErdos: return "erdos";
    case Topology::kComplete: return "complete";
  }
  return "unknown";
}

std::vector<std::pair<int, int>> topology_edges(Topology topology, int p, double degree, std::uint64_t seed) {
  if (p < 1) throw InputError("p must be at least 1");
  std::vector<std::pair<int, int>> edges;
  switch (topology) {
    case Topology::kChain:
      for (int i = 0; i + 1 < p; ++i) edges.emplace_back(i, i + 1);
      break;
    case Topology::kGrid: {
      const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(p))));
      if (side * side != p) throw InputError("grid topology needs p to be a perfect square, got " + std::to_string(p));
      for (int r = 0; r < side; ++r) {
        for (int c = 0; c < side; ++c) {
          const int v = r * side + c;
          if (c + 1 < side) edges.emplace_back(v, v + 1);
          if (r + 1 < side) edges.emplace_back(v, v + side);
        }
      }
      std::sort(edges.begin(), edges.end());
      break;
    }
    case Topology::kErdos: {
      if (p < 2) throw InputError("erdos topology needs p >= 2");
      if (!(degree > 0.0) || degree > p - 1) throw InputError("erdos degree must lie in (0, p - 1]");
      const double prob = degree / static_cast<double>(p - 1);
      Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
      for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
          if (rng.uniform() < prob) edges.emplace_back(i, j);
        }
      }
      break;
    }
    case Topology::kComplete:
      for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) edges.emplace_back(i, j);
      }
      break;
  }
  return edges;
}

std::vector<Factor> factors_for_scopes(const std::vector<std::vector<int>>& scopes, BasisKind basis,
                                       const Alphabet& alphabet) {
  std::vector<Factor> out;
  for (const auto& scope : scopes) {
    if (basis == BasisKind::kIndicator) {
      std::vector<int> radix;
      for (int v : scope) radix.push_back(alphabet.size(v));
      const std::size_t n = alphabet.configuration_count(scope);
      for (std::size_t a = 0; a < n; ++a) {
        Factor f;
        f.scope = scope;
        f.assignment.resize(scope.size());
        decode_configuration(a, radix, f.assignment);
        out.push_back(std::move(f));
      }
    } else if (basis == BasisKind::kMonomial) {
      Factor f;
      f.scope = scope;
      out.push_back(std::move(f));
    } else {
      throw InputError("families for custom bases must be given as files");
    }
  }
  for (std::size_t k = 0; k < out.size(); ++k) out[k].id = static_cast<int>(k);
  return out;
}

GraphicalModel generate_model(const GeneratorSpec& spec) {
  if (spec.basis == BasisKind::kCustom) throw InputError("the generator supports monomial and indicator bases");
  if (spec.basis == BasisKind::kMonomial && spec.q != 2) throw InputError("monomial basis needs q = 2");
  if (spec.q < 2) throw InputError("q must be at least 2");
  auto check_range = [](std::pair<double, double> r, const char* what) {
    if (!(r.first >= 0.0 && r.second >= r.first)) {
      throw InputError(std::string(what) + " range must satisfy 0 <= a <= b");
    }
  };
  check_range(spec.coupling_range, "coupling");
  check_range(spec.field_range, "field");

  const Alphabet alphabet = Alphabet::uniform(spec.p, spec.q);
  const auto edges = topology_edges(spec.topology, spec.p, spec.degree, spec.seed);
  Rng rng(spec.seed);

  std::vector<std::vector<int>> scopes;
  if (spec.fields) {
    for (int i = 0; i < spec.p; ++i) scopes.push_back({i});
  }
  for (const auto& [i, j] : edges) scopes.push_back({i, j});

  GraphicalModel model;
  model.alphabet = alphabet;
  model.basis = spec.basis;
  std::vector<Factor> factors = factors_for_scopes(scopes, spec.basis, alphabet);
  model.theta.assign(factors.size(), 0.0);

  std::size_t k = 0;
  for (const auto& scope : scopes) {
    const auto range = scope.size() == 1 ? spec.field_range : spec.coupling_range;
    const double magnitude = rng.uniform(range.first, range.second);
    if (spec.basis == BasisKind::kMonomial) {
      model.theta[k++] = rng.coin() ? magnitude : -magnitude;
    } else {
      std::vector<int> radix(scope.size(), spec.q);
      for (double v : random_centered_table(radix, magnitude, rng)) model.theta[k++] = v;
    }
  }
  model.graph = FactorGraph::build(spec.p, std::move(factors));
  model.validate();
  return model;
}

GraphicalModel complete_family(int p, int order, BasisKind basis, const Alphabet& alphabet) {
  if (order < 1 || order > p) throw InputError("family order must lie in 1..p");
  std::vector<std::vector<int>> scopes;
  for (int size = 1; size <= order; ++size) {
    std::vector<int> current;
    subsets_of_size(p, size, 0, current, scopes);
  }
  GraphicalModel model;
  model.alphabet = alphabet;
  model.basis = basis;
  std::vector<Factor> factors = factors_for_scopes(scopes, basis, alphabet);
  model.theta.assign(factors.size(), 0.0);
  model.graph = FactorGraph::build(p, std::move(factors));
  return model;
}

}  // namespace giso
