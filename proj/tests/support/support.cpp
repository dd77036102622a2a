#include "support.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

#include "giso/sampler.hpp"

namespace support {
namespace {

std::size_t product(std::span<const int> radix) {
  std::size_t n = 1;
  for (int r : radix) n *= static_cast<std::size_t>(r);
  return n;
}

void decode(std::size_t index, std::span<const int> radix, std::vector<int>& out) {
  out.resize(radix.size());
  for (std::size_t j = radix.size(); j-- > 0;) {
    out[j] = static_cast<int>(index % static_cast<std::size_t>(radix[j]));
    index /= static_cast<std::size_t>(radix[j]);
  }
}

double s_value(const giso::LocalProblem& problem, std::span<const double> theta) {
  giso::ObjectiveEvaluator e(problem);
  return e.value(theta);
}

double certificate(std::span<const double> theta, std::span<const double> grad, double radius) {
  double inner = 0.0;
  double gmax = 0.0;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    inner += grad[k] * theta[k];
    gmax = std::max(gmax, std::abs(grad[k]));
  }
  return inner + radius * gmax;
}

double golden(const std::function<double(double)>& f, double a, double b, double* best_x) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  if (best_x) *best_x = x;
  return f(x);
}

}  // namespace

double l1(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

giso::GraphicalModel random_model(giso::Rng& rng, const RandomModelOptions& options) {
  using giso::BasisKind;
  const BasisKind basis = options.basis ? *options.basis
                                        : std::array{BasisKind::kMonomial, BasisKind::kIndicator, BasisKind::kCustom}[rng.index(3)];
  const int p = options.min_p + static_cast<int>(rng.index(static_cast<std::uint64_t>(options.max_p - options.min_p + 1)));
  giso::Alphabet alphabet;
  const int common_q = 2 + static_cast<int>(rng.index(static_cast<std::uint64_t>(options.max_q - 1)));
  for (int i = 0; i < p; ++i) {
    int q = 2;
    if (basis != BasisKind::kMonomial) {
      q = options.mixed_alphabets ? 2 + static_cast<int>(rng.index(static_cast<std::uint64_t>(options.max_q - 1))) : common_q;
    }
    alphabet.sizes.push_back(q);
  }
  const int top = std::min(options.max_order, p);
  const int order = top <= 2 ? top : 2 + static_cast<int>(rng.index(static_cast<std::uint64_t>(top - 1)));

  std::vector<std::vector<int>> scopes;
  for (std::uint32_t mask = 1; mask < (1u << p); ++mask) {
    std::vector<int> s;
    for (int v = 0; v < p; ++v) {
      if (mask & (1u << v)) s.push_back(v);
    }
    const bool forced = options.all_singletons && s.size() == 1;
    if (static_cast<int>(s.size()) <= order && (forced || rng.uniform() < 0.6)) scopes.push_back(s);
  }
  if (scopes.empty()) scopes.push_back({0, 1});
  std::sort(scopes.begin(), scopes.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });

  std::vector<giso::Factor> factors;
  for (const auto& scope : scopes) {
    std::vector<int> radix;
    for (int v : scope) radix.push_back(alphabet.size(v));
    if (basis == BasisKind::kMonomial) {
      factors.push_back({-1, scope, {}, {}});
    } else if (basis == BasisKind::kIndicator) {
      for (std::size_t a = 0; a < product(radix); ++a) {
        std::vector<int> assignment;
        decode(a, radix, assignment);
        factors.push_back({-1, scope, assignment, {}});
      }
    } else {
      const int count = 1 + static_cast<int>(rng.index(2));
      for (int c = 0; c < count; ++c) {
        std::vector<double> table(product(radix));
        for (double& v : table) v = rng.uniform(-0.5, 0.5);
        factors.push_back({-1, scope, {}, table});
      }
    }
  }
  giso::GraphicalModel model;
  model.alphabet = alphabet;
  model.basis = basis;
  for (std::size_t k = 0; k < factors.size(); ++k) model.theta.push_back(rng.uniform(-options.theta_scale, options.theta_scale));
  model.graph = giso::FactorGraph::build(p, std::move(factors));
  model.validate();
  return model;
}

giso::GraphicalModel monomial_model(int p, const std::vector<std::pair<std::vector<int>, double>>& terms) {
  std::vector<giso::Factor> factors;
  giso::GraphicalModel model;
  for (const auto& [scope, theta] : terms) {
    giso::Factor f;
    for (int v : scope) f.scope.push_back(v - 1);
    factors.push_back(std::move(f));
    model.theta.push_back(theta);
  }
  model.alphabet = giso::Alphabet::uniform(p, 2);
  model.basis = giso::BasisKind::kMonomial;
  model.graph = giso::FactorGraph::build(p, std::move(factors));
  model.validate();
  return model;
}

giso::GraphicalModel example1_model(double t1, double t2, double t3) {
  // Rows (b0, b1) with b1 fastest; sigma = 2 b0 - 1, s = 2 b1 - 1.
  std::vector<double> f1;
  std::vector<double> f2;
  std::vector<double> f3;
  for (int b0 = 0; b0 < 2; ++b0) {
    for (int b1 = 0; b1 < 2; ++b1) {
      const double sigma = 2.0 * b0 - 1.0;
      const double s = 2.0 * b1 - 1.0;
      f1.push_back(0.25 * sigma * (s - 1.0));
      f2.push_back(0.25 * s * (sigma - 1.0));
      f3.push_back(0.25 * (sigma + s));
    }
  }
  giso::GraphicalModel model;
  model.alphabet = giso::Alphabet::uniform(2, 2);
  model.basis = giso::BasisKind::kCustom;
  model.theta = {t1, t2, t3};
  model.graph = giso::FactorGraph::build(2, {{-1, {0, 1}, {}, f1}, {-1, {0, 1}, {}, f2}, {-1, {0, 1}, {}, f3}});
  model.validate();
  return model;
}

std::vector<double> inclusion_exclusion(std::span<const double> table, std::span<const int> radix) {
  const std::size_t n = product(radix);
  const std::size_t m = radix.size();
  std::vector<double> h(table.begin(), table.end());
  std::vector<int> sigma;
  std::vector<int> tau;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    double size = 1.0;
    int bits = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (mask & (1u << j)) {
        size *= radix[j];
        ++bits;
      }
    }
    const double sign = (bits % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t a = 0; a < n; ++a) {
      decode(a, radix, sigma);
      // Sum f over all assignments of the coordinates in r, rest fixed.
      double sum = 0.0;
      for (std::size_t b = 0; b < n; ++b) {
        decode(b, radix, tau);
        bool same_rest = true;
        for (std::size_t j = 0; j < m && same_rest; ++j) {
          if (!(mask & (1u << j)) && tau[j] != sigma[j]) same_rest = false;
        }
        if (same_rest) sum += table[b];
      }
      h[a] += sign / size * sum;
    }
  }
  return h;
}

std::vector<double> literal_indicator_projection(std::span<const double> theta, std::span<const int> radix) {
  const std::size_t n = product(radix);
  std::vector<double> out(n, 0.0);
  std::vector<int> sigma;
  std::vector<int> s;
  for (std::size_t a = 0; a < n; ++a) {
    decode(a, radix, sigma);
    for (std::size_t b = 0; b < n; ++b) {
      decode(b, radix, s);
      double phi = 1.0;
      for (std::size_t j = 0; j < radix.size(); ++j) phi *= (s[j] == sigma[j] ? 1.0 : 0.0) - 1.0 / radix[j];
      out[a] += theta[b] * phi;
    }
  }
  return out;
}

std::vector<double> project_l1_ball(std::span<const double> v, double radius) {
  if (l1(v) <= radius) return {v.begin(), v.end()};
  std::vector<double> u;
  for (double x : v) u.push_back(std::abs(x));
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cum += u[j];
    const double t = (cum - radius) / static_cast<double>(j + 1);
    if (u[j] > t) tau = t;
  }
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = std::copysign(std::max(std::abs(v[k]) - tau, 0.0), v[k]);
  return out;
}

Reference reference_minimize(const giso::LocalProblem& problem, double tol, int max_iters) {
  const std::size_t dim = problem.dimension();
  const double radius = problem.gamma_hat;
  giso::ObjectiveEvaluator eval(problem);
  std::vector<double> x(dim, 0.0);
  std::vector<double> y = x;
  std::vector<double> grad(dim);
  std::vector<double> gx(dim);
  double fx = eval.evaluate(x, gx);
  double step_l = 1.0;
  double t = 1.0;
  Reference best{x, fx, fx - certificate(x, gx, radius)};
  for (int it = 0; it < max_iters; ++it) {
    const double fy = eval.evaluate(y, grad);
    std::vector<double> next;
    double fn = 0.0;
    for (;;) {
      std::vector<double> trial(dim);
      for (std::size_t k = 0; k < dim; ++k) trial[k] = y[k] - grad[k] / step_l;
      next = project_l1_ball(trial, radius);
      fn = eval.value(next);
      double quad = fy;
      for (std::size_t k = 0; k < dim; ++k) {
        const double d = next[k] - y[k];
        quad += grad[k] * d + 0.5 * step_l * d * d;
      }
      if (fn <= quad + 1e-15) break;
      step_l *= 2.0;
    }
    if (fn > fx) {
      // Function-value restart.
      t = 1.0;
      y = x;
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    for (std::size_t k = 0; k < dim; ++k) y[k] = next[k] + (t - 1.0) / t_next * (next[k] - x[k]);
    t = t_next;
    x = std::move(next);
    fx = eval.evaluate(x, gx);
    step_l = std::max(step_l * 0.9, 1e-6);
    const double lower = fx - certificate(x, gx, radius);
    if (fx < best.value) {
      best.theta = x;
      best.value = fx;
    }
    best.lower_bound = std::max(best.lower_bound, lower);
    if (best.value - best.lower_bound < tol) break;
  }
  return best;
}

Reference golden_minimize(const giso::LocalProblem& problem) {
  const double r = problem.gamma_hat;
  Reference out;
  if (problem.dimension() == 1) {
    double x = 0.0;
    out.value = golden([&](double a) { return s_value(problem, std::vector<double>{a}); }, -r, r, &x);
    out.theta = {x};
  } else if (problem.dimension() == 2) {
    auto inner = [&](double a, double* b_out) {
      const double room = r - std::abs(a);
      return golden([&](double b) { return s_value(problem, std::vector<double>{a, b}); }, -room, room, b_out);
    };
    double a = 0.0;
    out.value = golden([&](double x) { return inner(x, nullptr); }, -r, r, &a);
    double b = 0.0;
    inner(a, &b);
    out.theta = {a, b};
  }
  out.lower_bound = out.value;
  return out;
}

int chromatic_number(const giso::FactorGraph& graph) {
  const int p = graph.p();
  std::vector<std::vector<bool>> adj(static_cast<std::size_t>(p), std::vector<bool>(static_cast<std::size_t>(p), false));
  for (const auto& f : graph.factors()) {
    for (int a : f.scope) {
      for (int b : f.scope) {
        if (a != b) adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
      }
    }
  }
  std::vector<int> colour(static_cast<std::size_t>(p), -1);
  std::function<bool(int, int)> fill = [&](int v, int k) {
    if (v == p) return true;
    for (int c = 0; c < k; ++c) {
      bool ok = true;
      for (int u = 0; u < v && ok; ++u) ok = !(adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] && colour[static_cast<std::size_t>(u)] == c);
      if (!ok) continue;
      colour[static_cast<std::size_t>(v)] = c;
      if (fill(v + 1, k)) return true;
    }
    colour[static_cast<std::size_t>(v)] = -1;
    return false;
  };
  for (int k = 1; k <= p; ++k) {
    if (fill(0, k)) return k;
  }
  return p;
}

DeskProblem random_desk_problem(giso::Rng& rng, std::size_t max_dim, std::size_t max_n) {
  for (;;) {
    DeskProblem d;
    RandomModelOptions opts;
    opts.max_p = 4;
    d.model = random_model(rng, opts);
    std::vector<int> ok;
    for (int u = 0; u < d.model.graph.p(); ++u) {
      const auto k = d.model.graph.incident(u).size();
      if (k >= 1 && k <= max_dim) ok.push_back(u);
    }
    if (ok.empty()) continue;
    d.vertex = ok[rng.index(ok.size())];
    const std::size_t n = 100 + rng.index(max_n - 99);
    d.samples = giso::sample_exact(d.model, n, rng.bits());
    return d;
  }
}

}  // namespace support
