#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "giso/model.hpp"

namespace giso {

/// n x p matrix of symbols, row-major.
struct SampleSet {
  std::size_t n = 0;
  int p = 0;
  std::vector<int> data;
  Alphabet alphabet;
  std::string provenance;

  std::span<const int> row(std::size_t t) const {
    return {data.data() + t * static_cast<std::size_t>(p), static_cast<std::size_t>(p)};
  }

  /// Throws InputError naming the first offending row (1-based).
  void validate() const;
};

/// Configurations with probability weights summing to one. Empirical data
/// uses weight 1/n per row; the oracle uses the exact distribution.
struct WeightedConfigurations {
  int p = 0;
  std::vector<int> data;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  std::span<const int> row(std::size_t j) const {
    return {data.data() + j * static_cast<std::size_t>(p), static_cast<std::size_t>(p)};
  }

  static WeightedConfigurations from_samples(const SampleSet& samples);
};

}  // namespace giso
