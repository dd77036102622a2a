#pragma once

// Independent reference implementations used by the tests. Nothing here
// calls into the library code it is meant to check, beyond data types and
// plain evaluation of S.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "giso/model.hpp"
#include "giso/objective.hpp"
#include "giso/rng.hpp"
#include "giso/samples.hpp"

namespace support {

struct RandomModelOptions {
  std::optional<giso::BasisKind> basis;  // random when unset
  int min_p = 2;
  int max_p = 4;
  int max_q = 3;
  int max_order = 3;
  double theta_scale = 0.6;
  bool mixed_alphabets = true;
  bool all_singletons = false;  // every vertex gets a size-1 scope
};

giso::GraphicalModel random_model(giso::Rng& rng, const RandomModelOptions& options = {});

/// Monomial model from (1-based scope, theta) pairs.
giso::GraphicalModel monomial_model(int p, const std::vector<std::pair<std::vector<int>, double>>& terms);

/// Two binary variables (sigma, s) with the custom basis
/// sigma(s - 1), s(sigma - 1), sigma + s, each scaled by 1/4.
giso::GraphicalModel example1_model(double t1, double t2, double t3);

/// Literal inclusion-exclusion: f + sum over nonempty r of (-1)^|r| / |A_r| sum_{sigma_r} f.
std::vector<double> inclusion_exclusion(std::span<const double> table, std::span<const int> radix);

/// Literal [P theta]_sigma = sum_s theta_s prod_j Phi(s_j, sigma_j).
std::vector<double> literal_indicator_projection(std::span<const double> theta, std::span<const int> radix);

/// Euclidean projection onto the l1 ball (sort-based).
std::vector<double> project_l1_ball(std::span<const double> v, double radius);

struct Reference {
  std::vector<double> theta;
  double value = 0.0;
  double lower_bound = 0.0;  // Frank-Wolfe certificate
};

/// Accelerated projected gradient with restarts on the l1 ball of radius
/// gamma_hat, stopped when the duality-gap certificate falls below `tol`.
Reference reference_minimize(const giso::LocalProblem& problem, double tol = 1e-10, int max_iters = 200000);

/// Nested golden-section search for dimension 1 or 2.
Reference golden_minimize(const giso::LocalProblem& problem);

/// Brute-force vertex chromatic number of the factor graph (vertices sharing
/// a factor need distinct colours).
int chromatic_number(const giso::FactorGraph& graph);

/// Random local problem for the solver tests: dimension <= max_dim, samples
/// drawn exactly from a random model.
struct DeskProblem {
  giso::GraphicalModel model;
  giso::SampleSet samples;
  int vertex = 0;
};

DeskProblem random_desk_problem(giso::Rng& rng, std::size_t max_dim, std::size_t max_n);

double l1(std::span<const double> v);

}  // namespace support
