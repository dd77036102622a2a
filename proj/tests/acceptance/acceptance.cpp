// Acceptance suite: one PASS/FAIL line per criterion, each timed against its
// budget. Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "giso/basis.hpp"
#include "giso/conditioning.hpp"
#include "giso/error.hpp"
#include "giso/generate.hpp"
#include "giso/objective.hpp"
#include "giso/oracle.hpp"
#include "giso/projection.hpp"
#include "giso/sampler.hpp"
#include "giso/solver.hpp"
#include "giso/suprise.hpp"
#include "support.hpp"

using namespace giso;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Largest |sum over coordinate `pos`| of a dense table, over all settings of
// the remaining coordinates.
double axis_sum(const std::vector<double>& table, const std::vector<int>& radix, std::size_t pos) {
  std::size_t inner = 1;
  for (std::size_t j = pos + 1; j < radix.size(); ++j) inner *= static_cast<std::size_t>(radix[j]);
  const auto q = static_cast<std::size_t>(radix[pos]);
  const std::size_t outer = table.size() / (inner * q);
  double worst = 0.0;
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      double s = 0.0;
      for (std::size_t a = 0; a < q; ++a) s += table[(o * q + a) * inner + i];
      worst = std::max(worst, std::abs(s));
    }
  }
  return worst;
}

LocalProblem problem_for(const GraphicalModel& model, const SampleSet& samples, int u, double gamma_hat) {
  const BasisTables tables(model.graph, model.alphabet, model.basis);
  return build_local_problem(model.graph, tables, samples, u, gamma_hat,
                             default_constraints(model.basis, model.graph, model.alphabet, model.graph.incident(u)));
}

std::vector<double> random_in_ball(Rng& rng, std::size_t dim, double radius) {
  std::vector<double> v(dim);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  const double n = support::l1(v);
  const double scale = rng.uniform(0.0, radius) / std::max(n, 1e-300);
  for (double& x : v) x *= scale;
  return v;
}

// Radix tuples for the centering sweep.
std::vector<std::vector<int>> centering_radices() {
  std::vector<std::vector<int>> out;
  std::function<void(std::vector<int>&, std::size_t)> grow = [&](std::vector<int>& r, std::size_t prod) {
    if (!r.empty()) out.push_back(r);
    if (r.size() == 4) return;
    for (int q = 2; q <= 6; ++q) {
      if (prod * static_cast<std::size_t>(q) > 4096) continue;
      r.push_back(q);
      grow(r, prod * static_cast<std::size_t>(q));
      r.pop_back();
    }
  };
  std::vector<int> r;
  grow(r, 1);
  for (int q = 2; q <= 16; ++q) {
    std::vector<int> u{q};
    std::size_t prod = static_cast<std::size_t>(q);
    while (prod * static_cast<std::size_t>(q) <= 4096) {
      u.push_back(q);
      prod *= static_cast<std::size_t>(q);
      if (u.size() > 4) out.push_back(u);
    }
  }
  for (std::vector<int> extra : {std::vector<int>{4096}, {2, 2048}, {64, 64}, {16, 16, 16}, {3, 1365}, {7, 9, 65}}) {
    out.push_back(extra);
  }
  return out;
}

Outcome criterion1() {
  Rng rng(1001);
  double worst = 0.0;
  std::size_t tables = 0;
  auto check = [&](const Factor& f, BasisKind basis, const Alphabet& al) {
    const auto t = build_factor_table(f, basis, al);
    for (std::size_t j = 0; j < t.scope.size(); ++j) {
      worst = std::max(worst, axis_sum(t.g[j], t.radix, j));
      worst = std::max(worst, axis_sum(t.h, t.radix, j));
    }
    ++tables;
  };
  for (const auto& radix : centering_radices()) {
    Alphabet al{radix};
    std::vector<int> scope(radix.size());
    std::iota(scope.begin(), scope.end(), 0);
    const std::size_t size = al.configuration_count(scope);
    if (std::all_of(radix.begin(), radix.end(), [](int q) { return q == 2; })) {
      check(Factor{0, scope, {}, {}}, BasisKind::kMonomial, al);
    }
    // Every assignment on small scopes, a random handful on large ones.
    std::vector<int> letters(radix.size());
    if (size <= 64) {
      for (std::size_t a = 0; a < size; ++a) {
        decode_configuration(a, radix, letters);
        check(Factor{0, scope, letters, {}}, BasisKind::kIndicator, al);
      }
    } else {
      for (int rep = 0; rep < 6; ++rep) {
        decode_configuration(rng.index(size), radix, letters);
        check(Factor{0, scope, letters, {}}, BasisKind::kIndicator, al);
      }
    }
    std::vector<double> table(size);
    for (double& v : table) v = rng.uniform(-1.0, 1.0);
    check(Factor{0, scope, {}, table}, BasisKind::kCustom, al);
  }
  // Binary scopes up to 12 vertices for the monomial basis.
  for (int m = 1; m <= 12; ++m) {
    std::vector<int> scope(static_cast<std::size_t>(m));
    std::iota(scope.begin(), scope.end(), 0);
    check(Factor{0, scope, {}, {}}, BasisKind::kMonomial, Alphabet::uniform(m, 2));
  }
  return {worst <= 1e-12, fmt("%zu tables, max |sum| %.2e (tol 1e-12)", tables, worst)};
}

Outcome criterion2() {
  Rng rng(1002);
  double worst = 0.0;
  const double h = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = support::random_desk_problem(rng, 12, 1000);
    const double gamma_hat = rng.uniform(0.5, 3.0);
    const auto pr = problem_for(d.model, d.samples, d.vertex, gamma_hat);
    const auto theta = random_in_ball(rng, pr.dimension(), gamma_hat);
    const auto e = eval_giso(pr, theta);
    double err = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < theta.size(); ++k) {
      auto up = theta;
      auto down = theta;
      up[k] += h;
      down[k] -= h;
      const double fd = (eval_giso(pr, up).value - eval_giso(pr, down).value) / (2 * h);
      err = std::max(err, std::abs(fd - e.gradient[k]));
      scale = std::max(scale, std::abs(e.gradient[k]));
    }
    // Relative to the gradient, floored at the objective's own scale.
    worst = std::max(worst, err / std::max(scale, e.value));
  }
  return {worst <= 1e-6, fmt("100 problems, max relative error %.2e (tol 1e-6)", worst)};
}

Outcome criterion3() {
  Rng rng(1003);
  double worst = 0.0;
  std::map<BasisKind, int> kinds;
  for (int trial = 0; trial < 20; ++trial) {
    auto m = support::random_model(rng, {.max_p = 4, .max_q = 3});
    ++kinds[m.basis];
    const auto dist = enumerate_distribution(m);
    for (int u = 0; u < m.graph.p(); ++u) {
      if (m.graph.incident(u).empty()) continue;
      const auto g = population_giso(m, dist, u, local_parameters(m, u)).gradient;
      for (double x : g) worst = std::max(worst, std::abs(x));
    }
  }
  return {worst <= 1e-10, fmt("20 models (%d monomial, %d indicator, %d custom), max |grad| %.2e (tol 1e-10)",
                              kinds[BasisKind::kMonomial], kinds[BasisKind::kIndicator], kinds[BasisKind::kCustom],
                              worst)};
}

Outcome criterion4() {
  Rng rng(1004);
  std::map<double, double> worst_gap{{0.5, -1e300}, {0.1, -1e300}, {0.02, -1e300}};
  bool ok = true;
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = support::random_desk_problem(rng, 12, 10000);
    const double gamma_hat = rng.uniform(0.5, 3.0);
    const auto pr = problem_for(d.model, d.samples, d.vertex, gamma_hat);
    const auto ref = support::reference_minimize(pr);
    for (auto& [eps, worst] : worst_gap) {
      SolverOptions opt;
      opt.epsilon = eps;
      const auto r = entropic_descent(pr, opt);
      const double gap = r.best_value - ref.value;
      worst = std::max(worst, gap);
      if (gap > eps || r.iterations != iterations_for_epsilon(eps, pr.dimension())) ok = false;
    }
  }
  return {ok, fmt("50 problems, worst gaps %.2e/%.2e/%.2e for eps 0.5/0.1/0.02", worst_gap[0.5], worst_gap[0.1],
                  worst_gap[0.02])};
}

Outcome criterion5() {
  Rng rng(1005);
  double idem = 0.0, lin = 0.0, feas = 0.0, value = 0.0;
  int problems = 0;
  while (problems < 20) {
    auto m = support::random_model(rng, {.basis = BasisKind::kIndicator, .max_order = 2});
    const int u = static_cast<int>(rng.index(static_cast<std::uint64_t>(m.graph.p())));
    if (m.graph.incident(u).empty()) continue;
    const auto s = sample_exact(m, 1000, rng.bits());
    const auto pr = problem_for(m, s, u, 1.0);
    const auto a = random_in_ball(rng, pr.dimension(), 1.0);
    const auto b = random_in_ball(rng, pr.dimension(), 1.0);
    const auto pa = project(a, pr.constraint);
    const auto pb = project(b, pr.constraint);
    const auto ppa = project(pa, pr.constraint);
    const double ca = rng.uniform(-2.0, 2.0), cb = rng.uniform(-2.0, 2.0);
    std::vector<double> mix(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) mix[k] = ca * a[k] + cb * b[k];
    const auto pmix = project(mix, pr.constraint);
    for (std::size_t k = 0; k < a.size(); ++k) {
      idem = std::max(idem, std::abs(ppa[k] - pa[k]));
      lin = std::max(lin, std::abs(pmix[k] - ca * pa[k] - cb * pb[k]));
    }
    feas = std::max(feas, zero_sum_residual(pa, pr.constraint));
    value = std::max(value, std::abs(eval_giso(pr, pa).value - eval_giso(pr, a).value));
    ++problems;
  }
  const bool ok = idem <= 1e-10 && lin <= 1e-10 && feas <= 1e-10 && value <= 1e-12;
  return {ok, fmt("idempotence %.1e, linearity %.1e, residual %.1e (tol 1e-10), value change %.1e (tol 1e-12)", idem,
                  lin, feas, value)};
}

Outcome criterion6() {
  Rng rng(1006);
  double mono = 0.0;
  double slack = 1e300;
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = support::random_model(rng, {.basis = BasisKind::kMonomial, .all_singletons = true});
    for (const auto& v : npc_report(m).vertices) mono = std::max(mono, std::abs(v.rho_exact - 1.0));
  }
  for (int trial = 0; trial < 30; ++trial) {
    const auto m = support::random_model(rng);
    for (const auto& v : npc_report(m).vertices) {
      slack = std::min(slack, v.rho_exact - v.rho_bound);
      slack = std::min(slack, v.rho_exact_maximal - v.rho_bound_maximal);
    }
  }
  // The same table twice, and a table with half of it, on one scope.
  GraphicalModel dup;
  dup.alphabet = Alphabet::uniform(2, 2);
  dup.basis = BasisKind::kCustom;
  const std::vector<double> t{0.5, -0.5, -0.5, 0.5};
  const std::vector<double> half{0.25, -0.25, -0.25, 0.25};
  dup.graph = FactorGraph::build(2, {{-1, {0, 1}, {}, t}, {-1, {0, 1}, {}, half}, {-1, {1}, {}, {0.5, -0.5}}});
  dup.theta = {0.2, 0.1, 0.3};
  double degenerate = 0.0;
  for (const auto& v : npc_report(dup).vertices) degenerate = std::max(degenerate, std::abs(v.rho_exact_maximal));
  const bool ok = mono <= 1e-10 && slack >= -1e-12 && degenerate <= 1e-10;
  return {ok, fmt("monomial |rho-1| %.1e, min(exact-bound) %.2e, duplicated rho %.1e", mono, slack, degenerate)};
}

Outcome criterion7() {
  Rng rng(1007);
  int checks = 0, l2_checks = 0, violations = 0, nontrivial = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = support::random_model(rng, {.max_p = 4, .max_order = 3});
    const auto dist = enumerate_distribution(m);
    const int chi = support::chromatic_number(m.graph);
    for (int u = 0; u < m.graph.p(); ++u) {
      if (m.graph.incident(u).empty()) continue;
      const auto r = verify_llc_bounds(m, dist, u, chi);
      ++checks;
      if (!r.linf2_holds) ++violations;
      if (r.l2_holds) {
        ++l2_checks;
        if (!*r.l2_holds) ++violations;
      }
      if (r.linf2_rhs > 1e-8) ++nontrivial;
    }
  }
  return {violations == 0, fmt("%d vertices (%d with a positive bound), %d pairwise checks, %d violations", checks,
                               nontrivial, l2_checks, violations)};
}

double total_variation(const GraphicalModel& m, const ExactDistribution& dist, const SampleSet& s) {
  std::vector<double> freq(dist.size(), 0.0);
  for (std::size_t t = 0; t < s.n; ++t) freq[encode_configuration(s.row(t), m.alphabet.sizes)] += 1.0;
  double tv = 0.0;
  for (std::size_t j = 0; j < freq.size(); ++j) tv += std::abs(freq[j] / static_cast<double>(s.n) - dist.probabilities[j]);
  return tv / 2;
}

double chi_square_pvalue(const GraphicalModel& m, const ExactDistribution& dist, const SampleSet& s) {
  std::vector<double> counts(dist.size(), 0.0);
  for (std::size_t t = 0; t < s.n; ++t) counts[encode_configuration(s.row(t), m.alphabet.sizes)] += 1.0;
  const double n = static_cast<double>(s.n);
  // Cells with small expected counts are pooled.
  double stat = 0.0, pooled_obs = 0.0, pooled_exp = 0.0;
  int cells = 0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    const double e = n * dist.probabilities[j];
    if (e < 5.0) {
      pooled_obs += counts[j];
      pooled_exp += e;
      continue;
    }
    stat += (counts[j] - e) * (counts[j] - e) / e;
    ++cells;
  }
  if (pooled_exp > 0.0) {
    stat += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++cells;
  }
  const boost::math::chi_squared chi2(cells - 1);
  return boost::math::cdf(boost::math::complement(chi2, stat));
}

Outcome criterion8() {
  const std::size_t n = 200000;
  GibbsConfig gc;
  gc.burn_in = 1000;
  gc.thinning = 10;
  // A chain with theta = 0.4 and a random mixed-alphabet model, both p = 4.
  const auto chain = support::monomial_model(4, {{{1, 2}, 0.4}, {{2, 3}, 0.4}, {{3, 4}, 0.4}});
  Rng rng(1008);
  const auto mixed = support::random_model(rng, {.min_p = 4, .max_p = 4, .max_q = 3, .max_order = 2});
  double tv = 0.0;
  for (const GraphicalModel* m : {&chain, &mixed}) {
    gc.seed += 17;
    tv = std::max(tv, total_variation(*m, enumerate_distribution(*m), sample_gibbs(*m, n, gc)));
  }

  double pmin = 1.0;
  for (const GraphicalModel* m : {&chain, &mixed}) {
    const auto dist = enumerate_distribution(*m);
    pmin = std::min(pmin, chi_square_pvalue(*m, dist, sample_exact(*m, 1000000, 1234)));
  }

  const double theta = 0.5;
  const auto pair = support::monomial_model(2, {{{1, 2}, theta}});
  const auto s = sample_exact(pair, 1000000, 4321);
  double mean = 0.0;
  for (std::size_t t = 0; t < s.n; ++t) mean += (2 * s.row(t)[0] - 1) * (2 * s.row(t)[1] - 1);
  mean /= static_cast<double>(s.n);
  const double rho = std::tanh(theta);
  const double se = std::sqrt((1 - rho * rho) / static_cast<double>(s.n));
  const double z = std::abs(mean - rho) / se;

  const bool ok = tv <= 0.02 && pmin > 1e-3 && z <= 3.0;
  return {ok, fmt("Gibbs TV %.4f (tol 0.02), chi2 min p %.3f (> 1e-3), correlation %.2f SE (<= 3)", tv, pmin, z)};
}

struct RecoveryTally {
  int exact = 0;
  int exact_within = 0;
  double worst_success_error = 0.0;
  double worst_residual = 0.0;
};

double report_zero_sum_residual(const StructureReport& report) {
  std::map<std::vector<int>, std::map<std::vector<int>, double>> groups;
  for (const auto& e : report.parameters) groups[e.scope][e.assignment] = e.theta_avg;
  double worst = 0.0;
  for (const auto& [scope, entries] : groups) {
    std::vector<int> radix;
    for (int v : scope) radix.push_back(report.alphabet.size(v));
    std::vector<double> table(report.alphabet.configuration_count(scope), 0.0);
    if (entries.size() != table.size()) return 1e300;
    for (const auto& [a, v] : entries) table[encode_configuration(a, radix)] = v;
    for (std::size_t j = 0; j < scope.size(); ++j) worst = std::max(worst, axis_sum(table, radix, j));
  }
  return worst;
}

Outcome criterion9() {
  RecoveryTally tally;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GeneratorSpec spec;
    spec.topology = Topology::kGrid;
    spec.basis = BasisKind::kMonomial;
    spec.p = 9;
    spec.coupling_range = {0.4, 0.7};
    spec.fields = false;
    spec.seed = seed;
    const auto truth = generate_model(spec);
    const auto samples = sample_exact(truth, 50000, 100 + seed);
    const auto family = complete_family(9, 2, BasisKind::kMonomial, truth.alphabet).graph;
    SupriseConfig c;
    c.alpha = 0.4;
    c.gamma_hat = 3.0;
    c.epsilon_override = 0.02;
    const auto report = run_suprise(family, BasisKind::kMonomial, samples, c);
    const auto m = evaluate_estimate(truth, report);
    if (m.f1 == 1.0) {
      ++tally.exact;
      tally.worst_success_error = std::max(tally.worst_success_error, m.linf2_error);
      if (m.linf2_error <= c.alpha / 2) ++tally.exact_within;
    }
  }
  const bool ok = tally.exact >= 9 && tally.exact_within == tally.exact;
  return {ok, fmt("exact edge set in %d/10 seeds (need 9), worst linf2 error %.3f (tol 0.2)", tally.exact,
                  tally.worst_success_error)};
}

Outcome criterion10() {
  RecoveryTally tally;
  double min_span = 1e300;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GeneratorSpec spec;
    spec.topology = Topology::kChain;
    spec.basis = BasisKind::kIndicator;
    spec.p = 6;
    spec.q = 3;
    spec.coupling_range = {0.6, 0.9};
    spec.seed = seed;
    const auto truth = generate_model(spec);
    const auto cs = maximal_cliques(truth.graph);
    for (const auto& span : cs.spans) {
      double sq = 0.0;
      for (int id : span) sq += truth.parameter(id) * truth.parameter(id);
      min_span = std::min(min_span, std::sqrt(sq));
    }
    const auto samples = sample_exact(truth, 100000, 200 + seed);
    const auto family = complete_family(6, 2, BasisKind::kIndicator, truth.alphabet).graph;
    SupriseConfig c;
    c.alpha = 0.5;
    c.gamma_hat = 6.0;
    c.epsilon_override = 0.02;
    const auto report = run_suprise(family, BasisKind::kIndicator, samples, c);
    const double residual = report_zero_sum_residual(report);
    tally.worst_residual = std::max(tally.worst_residual, residual);
    if (evaluate_estimate(truth, report).f1 == 1.0 && residual <= 1e-10) ++tally.exact;
  }
  const bool ok = tally.exact >= 8 && min_span >= 0.5;
  return {ok, fmt("exact structure in %d/10 seeds (need 8), min true span norm %.3f, max zero-sum residual %.1e",
                  tally.exact, min_span, tally.worst_residual)};
}

Outcome criterion11() {
  const auto ex1 = support::example1_model(0.2, -0.1, 0.3);
  bool ok = true;
  double worst = 0.0;
  const std::vector<int> all{0, 1, 2};
  for (int u = 0; u < 2; ++u) {
    const auto llc = llc_constant(ex1, u, all, LlcNorm::kL2);
    const double gram = symmetric_lambda_min(fisher_gram(ex1, u));
    worst = std::max({worst, std::abs(llc.rho), std::abs(gram)});
    ok = ok && llc.degenerate && std::abs(gram) <= kDegeneracyThreshold;
  }
  const auto npc = npc_report(ex1);
  for (const auto& v : npc.vertices) {
    worst = std::max(worst, std::abs(v.rho_exact));
    ok = ok && v.degenerate;
  }
  ok = ok && worst <= kDegeneracyThreshold;
  return {ok, fmt("llc, NPC and Gram all flagged, largest |rho| %.1e", worst)};
}

struct Criterion {
  int number;
  const char* name;
  double budget_seconds;
  Outcome (*run)();
};

}  // namespace

int main() {
  set_warnings_enabled(false);
  const Criterion criteria[] = {
      {1, "centering identities", 10, criterion1},
      {2, "gradient check", 30, criterion2},
      {3, "screening property", 60, criterion3},
      {4, "entropic descent guarantee", 300, criterion4},
      {5, "equi-cost projection", 10, criterion5},
      {6, "NPC exactness", 60, criterion6},
      {7, "LLC inequalities", 120, criterion7},
      {8, "sampler correctness", 180, criterion8},
      {9, "Ising grid recovery", 600, criterion9},
      {10, "indicator chain recovery", 600, criterion10},
      {11, "degeneracy detection", 5, criterion11},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = out.ok && secs < c.budget_seconds;
    if (!pass) ++failures;
    std::printf("%s %2d %-28s %s [%.2f s, budget %.0f s]\n", pass ? "PASS" : "FAIL", c.number, c.name,
                out.detail.c_str(), secs, c.budget_seconds);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
