#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "giso/model.hpp"

namespace giso {

/// Coordinates of one indicator group: all factors sharing scope r, laid out
/// so that coords[a] is the local coordinate of the factor whose assignment
/// encodes to a (last scope vertex fastest).
struct ProjectionGroup {
  std::vector<int> scope;
  std::vector<int> radix;
  std::vector<std::size_t> coords;
};

using CustomProjector = std::function<std::vector<double>(std::span<const double>)>;

struct ConstraintDescriptor {
  enum class Kind { kTrivial, kIndicatorZeroSum, kCustom };

  Kind kind = Kind::kTrivial;
  std::vector<ProjectionGroup> groups;
  CustomProjector custom;

  static ConstraintDescriptor trivial() { return {}; }
};

std::string to_string(ConstraintDescriptor::Kind kind);

/// Zero-sum constraint set over the given local factor list (ids into
/// `graph`). Every scope group must contain each assignment exactly once.
ConstraintDescriptor indicator_constraints(const FactorGraph& graph, const Alphabet& alphabet,
                                           std::span<const int> factor_ids);

/// Natural constraint set for a basis: zero-sum for indicators, trivial
/// otherwise.
ConstraintDescriptor default_constraints(BasisKind basis, const FactorGraph& graph, const Alphabet& alphabet,
                                         std::span<const int> factor_ids);

/// [P theta]_sigma = sum_s theta_s prod_j Phi(s_j, sigma_j) over one scope.
std::vector<double> project_indicator(std::span<const double> theta_group, std::span<const int> radix);

/// Equi-cost projection onto the constraint set.
std::vector<double> project(std::span<const double> theta, const ConstraintDescriptor& descriptor);

/// Largest |sum_{s_j} theta_s| over groups, coordinates and remainders.
double zero_sum_residual(std::span<const double> theta, const ConstraintDescriptor& descriptor);

}  // namespace giso
