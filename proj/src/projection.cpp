#include "giso/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "giso/basis.hpp"
#include "giso/error.hpp"

namespace giso {

std::string to_string(ConstraintDescriptor::Kind kind) {
  switch (kind) {
    case ConstraintDescriptor::Kind::kTrivial: return "trivial";
    case ConstraintDescriptor::Kind::kIndicatorZeroSum: return "indicator-zero-sum";
    case ConstraintDescriptor::Kind::kCustom: return "custom-projector";
  }
  return "unknown";
}

ConstraintDescriptor indicator_constraints(const FactorGraph& graph, const Alphabet& alphabet,
                                           std::span<const int> factor_ids) {
  ConstraintDescriptor d;
  d.kind = ConstraintDescriptor::Kind::kIndicatorZeroSum;

  std::map<std::vector<int>, std::size_t> group_of_scope;
  for (std::size_t local = 0; local < factor_ids.size(); ++local) {
    const Factor& f = graph.factor(factor_ids[local]);
    if (f.assignment.size() != f.scope.size()) {
      throw InputError("zero-sum constraints need indicator factors; factor " + std::to_string(f.id) +
                       " has no assignment");
    }
    auto [it, inserted] = group_of_scope.try_emplace(f.scope, d.groups.size());
    if (inserted) {
      ProjectionGroup g;
      g.scope = f.scope;
      for (int v : f.scope) g.radix.push_back(alphabet.size(v));
      g.coords.assign(alphabet.configuration_count(f.scope), std::numeric_limits<std::size_t>::max());
      d.groups.push_back(std::move(g));
    }
    ProjectionGroup& g = d.groups[it->second];
    const std::size_t a = encode_configuration(f.assignment, g.radix);
    if (g.coords[a] != std::numeric_limits<std::size_t>::max()) {
      throw InputError("indicator group repeats an assignment (factor " + std::to_string(f.id) + ")");
    }
    g.coords[a] = local;
  }
  for (const ProjectionGroup& g : d.groups) {
    if (std::any_of(g.coords.begin(), g.coords.end(),
                    [](std::size_t c) { return c == std::numeric_limits<std::size_t>::max(); })) {
      throw InputError("indicator group over a scope is incomplete; the zero-sum projector needs every assignment");
    }
  }
  return d;
}

ConstraintDescriptor default_constraints(BasisKind basis, const FactorGraph& graph, const Alphabet& alphabet,
                                         std::span<const int> factor_ids) {
  if (basis == BasisKind::kIndicator) return indicator_constraints(graph, alphabet, factor_ids);
  return ConstraintDescriptor::trivial();
}

std::vector<double> project_indicator(std::span<const double> theta_group, std::span<const int> radix) {
  std::size_t expected = 1;
  for (int r : radix) expected *= static_cast<std::size_t>(r);
  if (theta_group.size() != expected) {
    throw InputError("indicator projection expects " + std::to_string(expected) + " entries, got " +
                     std::to_string(theta_group.size()));
  }
  // Phi = I - J/q along each coordinate, so the product operator is the
  // composition of per-coordinate mean removal.
  return global_center(theta_group, radix);
}

std::vector<double> project(std::span<const double> theta, const ConstraintDescriptor& descriptor) {
  switch (descriptor.kind) {
    case ConstraintDescriptor::Kind::kTrivial:
      return {theta.begin(), theta.end()};
    case ConstraintDescriptor::Kind::kCustom: {
      if (!descriptor.custom) throw InputError("custom-projector constraint has no registered projector");
      auto out = descriptor.custom(theta);
      if (out.size() != theta.size()) throw SolverError("custom projector changed the parameter dimension");
      return out;
    }
    case ConstraintDescriptor::Kind::kIndicatorZeroSum: {
      std::vector<double> out(theta.begin(), theta.end());
      std::vector<double> group;
      for (const ProjectionGroup& g : descriptor.groups) {
        group.resize(g.coords.size());
        for (std::size_t a = 0; a < g.coords.size(); ++a) group[a] = theta[g.coords[a]];
        const auto projected = project_indicator(group, g.radix);
        for (std::size_t a = 0; a < g.coords.size(); ++a) out[g.coords[a]] = projected[a];
      }
      return out;
    }
  }
  return {theta.begin(), theta.end()};
}

double zero_sum_residual(std::span<const double> theta, const ConstraintDescriptor& descriptor) {
  if (descriptor.kind != ConstraintDescriptor::Kind::kIndicatorZeroSum) return 0.0;
  double worst = 0.0;
  std::vector<double> group;
  for (const ProjectionGroup& g : descriptor.groups) {
    group.resize(g.coords.size());
    for (std::size_t a = 0; a < g.coords.size(); ++a) group[a] = theta[g.coords[a]];
    std::vector<std::size_t> stride(g.radix.size(), 1);
    for (std::size_t j = g.radix.size(); j-- > 1;) stride[j - 1] = stride[j] * static_cast<std::size_t>(g.radix[j]);
    for (std::size_t j = 0; j < g.radix.size(); ++j) {
      const auto q = static_cast<std::size_t>(g.radix[j]);
      const std::size_t block = stride[j] * q;
      for (std::size_t outer = 0; outer < group.size(); outer += block) {
        for (std::size_t inner = 0; inner < stride[j]; ++inner) {
          double sum = 0.0;
          for (std::size_t s = 0; s < q; ++s) sum += group[outer + inner + s * stride[j]];
          worst = std::max(worst, std::abs(sum));
        }
      }
    }
  }
  return worst;
}

}  // namespace giso
