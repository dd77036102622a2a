#include "giso/basis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "giso/error.hpp"

namespace giso {
namespace {

std::vector<int> scope_radix(const Factor& factor, const Alphabet& alphabet) {
  std::vector<int> radix(factor.scope.size());
  for (std::size_t j = 0; j < factor.scope.size(); ++j) radix[j] = alphabet.size(factor.scope[j]);
  return radix;
}

std::vector<std::size_t> strides_of(std::span<const int> radix) {
  std::vector<std::size_t> stride(radix.size(), 1);
  for (std::size_t j = radix.size(); j-- > 1;) stride[j - 1] = stride[j] * static_cast<std::size_t>(radix[j]);
  return stride;
}

std::size_t product(std::span<const int> radix) {
  std::size_t n = 1;
  for (int r : radix) n *= static_cast<std::size_t>(r);
  return n;
}

}  // namespace

double eval_f(const Factor& factor, BasisKind basis, const Alphabet& alphabet,
              std::span<const int> scope_symbols) {
  switch (basis) {
    case BasisKind::kMonomial: {
      double value = 1.0;
      for (int s : scope_symbols) value *= 2.0 * s - 1.0;
      return value;
    }
    case BasisKind::kIndicator: {
      double value = 1.0;
      for (std::size_t j = 0; j < factor.scope.size(); ++j) {
        value *= centered_indicator(factor.assignment[j], scope_symbols[j], alphabet.size(factor.scope[j]));
      }
      return value;
    }
    case BasisKind::kCustom: {
      const auto radix = scope_radix(factor, alphabet);
      const std::size_t index = encode_configuration(scope_symbols, radix);
      if (index >= factor.table.size()) {
        throw InputError("custom factor " + std::to_string(factor.id) + " has no table entry for configuration " +
                         std::to_string(index));
      }
      return factor.table[index];
    }
  }
  return 0.0;
}

std::vector<double> tabulate_f(const Factor& factor, BasisKind basis, const Alphabet& alphabet) {
  const auto radix = scope_radix(factor, alphabet);
  const std::size_t n = product(radix);
  if (basis == BasisKind::kCustom) {
    if (factor.table.size() != n) {
      throw InputError("custom factor " + std::to_string(factor.id) + " table has " +
                       std::to_string(factor.table.size()) + " values, expected " + std::to_string(n));
    }
    return factor.table;
  }
  std::vector<double> f(n);
  std::vector<int> symbols(radix.size());
  for (std::size_t c = 0; c < n; ++c) {
    decode_configuration(c, radix, symbols);
    f[c] = eval_f(factor, basis, alphabet, symbols);
  }
  return f;
}

std::vector<double> center_along(std::span<const double> table, std::span<const int> radix,
                                 std::size_t position) {
  const auto stride = strides_of(radix);
  const auto q = static_cast<std::size_t>(radix[position]);
  const std::size_t step = stride[position];
  const std::size_t block = step * q;
  std::vector<double> out(table.begin(), table.end());
  for (std::size_t outer = 0; outer < table.size(); outer += block) {
    for (std::size_t inner = 0; inner < step; ++inner) {
      const std::size_t base = outer + inner;
      double mean = 0.0;
      for (std::size_t s = 0; s < q; ++s) mean += table[base + s * step];
      mean /= static_cast<double>(q);
      for (std::size_t s = 0; s < q; ++s) out[base + s * step] -= mean;
    }
  }
  return out;
}

LocalCentering local_center(const Factor& factor, BasisKind basis, const Alphabet& alphabet, int vertex) {
  const auto it = std::find(factor.scope.begin(), factor.scope.end(), vertex);
  if (it == factor.scope.end()) {
    throw InputError("vertex " + std::to_string(vertex + 1) + " is not in the scope of factor " +
                     std::to_string(factor.id));
  }
  const auto position = static_cast<std::size_t>(it - factor.scope.begin());
  const auto radix = scope_radix(factor, alphabet);
  const auto f = tabulate_f(factor, basis, alphabet);

  LocalCentering result;
  result.g = center_along(f, radix, position);

  std::vector<int> reduced_radix;
  for (std::size_t j = 0; j < radix.size(); ++j) {
    if (j != position) reduced_radix.push_back(radix[j]);
  }
  result.phi.assign(product(reduced_radix), 0.0);
  std::vector<int> symbols(radix.size());
  std::vector<int> reduced(reduced_radix.size());
  for (std::size_t c = 0; c < f.size(); ++c) {
    decode_configuration(c, radix, symbols);
    std::size_t r = 0;
    for (std::size_t j = 0; j < radix.size(); ++j) {
      if (j != position) reduced[r++] = symbols[j];
    }
    result.phi[encode_configuration(reduced, reduced_radix)] += f[c] / radix[position];
  }
  return result;
}

std::vector<double> global_center(std::span<const double> table, std::span<const int> radix) {
  std::vector<double> h(table.begin(), table.end());
  for (std::size_t j = 0; j < radix.size(); ++j) h = center_along(h, radix, j);
  return h;
}

std::vector<double> global_center(const Factor& factor, BasisKind basis, const Alphabet& alphabet) {
  return global_center(tabulate_f(factor, basis, alphabet), scope_radix(factor, alphabet));
}

int FactorTable::local_position(int vertex) const {
  const auto it = std::find(scope.begin(), scope.end(), vertex);
  return it == scope.end() ? -1 : static_cast<int>(it - scope.begin());
}

std::size_t FactorTable::index_of(std::span<const int> full_configuration) const {
  std::size_t index = 0;
  for (std::size_t j = 0; j < scope.size(); ++j) {
    index += stride[j] * static_cast<std::size_t>(full_configuration[static_cast<std::size_t>(scope[j])]);
  }
  return index;
}

const std::vector<double>& FactorTable::centered_at(int vertex) const {
  const int pos = local_position(vertex);
  if (pos < 0) throw InputError("vertex " + std::to_string(vertex + 1) + " is not in factor scope");
  return g[static_cast<std::size_t>(pos)];
}

FactorTable build_factor_table(const Factor& factor, BasisKind basis, const Alphabet& alphabet) {
  FactorTable t;
  t.scope = factor.scope;
  t.radix = scope_radix(factor, alphabet);
  t.stride = strides_of(t.radix);
  t.f = tabulate_f(factor, basis, alphabet);
  t.g.reserve(t.scope.size());
  for (std::size_t j = 0; j < t.scope.size(); ++j) t.g.push_back(center_along(t.f, t.radix, j));
  t.h = global_center(t.f, t.radix);
  return t;
}

BasisTables::BasisTables(const FactorGraph& graph, const Alphabet& alphabet, BasisKind basis)
    : basis_(basis), alphabet_(alphabet) {
  std::int64_t max_id = -1;
  for (const Factor& f : graph.factors()) max_id = std::max<std::int64_t>(max_id, f.id);
  slot_by_id_.assign(static_cast<std::size_t>(max_id + 1), -1);
  tables_.reserve(graph.factor_count());
  for (const Factor& f : graph.factors()) {
    slot_by_id_[static_cast<std::size_t>(f.id)] = static_cast<std::int64_t>(tables_.size());
    tables_.push_back(build_factor_table(f, basis, alphabet));
  }
}

const FactorTable& BasisTables::at(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= slot_by_id_.size() || slot_by_id_[static_cast<std::size_t>(id)] < 0) {
    throw InputError("no basis table for factor id " + std::to_string(id));
  }
  return tables_[static_cast<std::size_t>(slot_by_id_[static_cast<std::size_t>(id)])];
}

bool NormalizationReport::ok() const {
  return std::none_of(entries.begin(), entries.end(), [](const NormalizationEntry& e) { return e.violated; });
}

NormalizationReport check_normalization(const GraphicalModel& model, bool warn_on_violation) {
  NormalizationReport report;
  const BasisTables tables(model.graph, model.alphabet, model.basis);
  for (const Factor& f : model.graph.factors()) {
    const FactorTable& t = tables.at(f.id);
    for (std::size_t j = 0; j < t.scope.size(); ++j) {
      NormalizationEntry e;
      e.vertex = t.scope[j];
      e.factor = f.id;
      for (double v : t.g[j]) e.max_abs_g = std::max(e.max_abs_g, std::abs(v));
      e.violated = e.max_abs_g > 1.0 + kNormalizationTolerance;
      if (e.violated && warn_on_violation) {
        std::ostringstream os;
        os << "factor " << f.id << " centered at vertex " << e.vertex + 1 << " has max |g| = " << e.max_abs_g
           << " > 1; rescale the basis or theta";
        warn(os.str());
      }
      report.entries.push_back(e);
    }
  }
  return report;
}

}  // namespace giso
