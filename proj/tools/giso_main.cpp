// giso: generate models, draw samples, learn structure, and inspect
// identifiability from the command line.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "giso/basis.hpp"
#include "giso/conditioning.hpp"
#include "giso/error.hpp"
#include "giso/generate.hpp"
#include "giso/io.hpp"
#include "giso/oracle.hpp"
#include "giso/parallel.hpp"
#include "giso/sampler.hpp"
#include "giso/suprise.hpp"

namespace {

using giso::Json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::pair<double, double> as_range(const std::vector<double>& v, const char* flag) {
  if (v.size() != 2) throw giso::InputError(std::string(flag) + " takes two values a,b");
  return {v[0], v[1]};
}

int sample_width(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw giso::InputError("cannot open '" + path + "'");
  long long n = 0;
  long long p = 0;
  if (!(in >> n >> p) || p < 1) throw giso::InputError("sample file header must be 'n p'");
  return static_cast<int>(p);
}

void emit(const std::string& out, const Json& result, giso::RunManifest manifest) {
  giso::write_text_file(out, giso::dump_json(result));
  giso::write_text_file(out + ".manifest.json", giso::dump_json(giso::manifest_to_json(manifest)));
}

struct GenArgs {
  std::string topology = "chain";
  std::string basis = "monomial";
  int p = 0;
  int q = 2;
  double degree = 3.0;
  std::vector<double> coupling{0.4, 0.7};
  std::vector<double> field{0.1, 0.3};
  bool no_fields = false;
  std::uint64_t seed = 0;
  std::string out;
};

struct SampleArgs {
  std::string model;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string method = "auto";
  std::optional<std::size_t> burn_in;
  std::size_t thinning = 10;
  std::string out;
};

struct LearnArgs {
  std::string samples;
  std::string family;
  std::optional<int> order;
  std::string basis = "monomial";
  std::string alphabet;
  std::string mode = "suprise";
  std::optional<int> node;
  std::optional<double> alpha;
  double gamma_hat = 1.0;
  std::optional<double> gamma;
  std::optional<double> rho_npc;
  std::optional<double> epsilon;
  std::optional<std::size_t> max_iters;
  std::optional<std::size_t> threads;
  std::string out;
};

struct ModelArgs {
  std::string model;
  std::string out;
};

struct EvalArgs {
  std::string truth;
  std::string report;
  std::optional<int> chi;
  std::optional<double> alpha;
  std::string out;
};

giso::RunManifest make_manifest(const std::string& command, int argc, char** argv) {
  giso::RunManifest m;
  m.command = command;
  m.argv.assign(argv, argv + argc);
  return m;
}

void run_gen(const GenArgs& a, giso::RunManifest manifest) {
  const auto start = Clock::now();
  giso::GeneratorSpec spec;
  spec.topology = giso::topology_from_string(a.topology);
  spec.basis = giso::basis_kind_from_string(a.basis);
  spec.p = a.p;
  spec.q = a.q;
  spec.degree = a.degree;
  spec.coupling_range = as_range(a.coupling, "--coupling-range");
  spec.field_range = as_range(a.field, "--field-range");
  spec.fields = !a.no_fields;
  spec.seed = a.seed;
  const giso::GraphicalModel model = giso::generate_model(spec);
  manifest.hyperparameters = {{"topology", a.topology}, {"basis", a.basis},     {"p", a.p},
                              {"q", a.q},               {"degree", a.degree},   {"coupling_range", a.coupling},
                              {"field_range", a.field}, {"fields", !a.no_fields}, {"seed", a.seed}};
  manifest.timings["generate"] = seconds_since(start);
  emit(a.out, giso::model_to_json(model), manifest);
}

void run_sample(const SampleArgs& a, giso::RunManifest manifest) {
  auto start = Clock::now();
  const giso::GraphicalModel model = giso::load_model(a.model);
  manifest.timings["load"] = seconds_since(start);
  std::string method = a.method;
  if (method == "auto") {
    method = model.alphabet.joint_configuration_count() <= giso::kDefaultEnumerationCap ? "exact" : "gibbs";
  }
  start = Clock::now();
  giso::SampleSet samples;
  giso::GibbsConfig gibbs{a.burn_in, a.thinning, a.seed};
  if (method == "exact") {
    samples = giso::sample_exact(model, a.n, a.seed);
  } else if (method == "gibbs") {
    samples = giso::sample_gibbs(model, a.n, gibbs);
  } else {
    throw giso::InputError("--method must be exact, gibbs or auto");
  }
  manifest.timings["sample"] = seconds_since(start);
  manifest.inputs["model"] = a.model;
  manifest.hyperparameters = {{"n", a.n}, {"seed", a.seed}, {"method", method}};
  if (method == "gibbs") {
    manifest.hyperparameters["burn_in"] = gibbs.burn_in_sweeps(model.graph.p());
    manifest.hyperparameters["thinning"] = a.thinning;
  }
  giso::write_samples(a.out, samples);
  giso::write_text_file(a.out + ".manifest.json", giso::dump_json(giso::manifest_to_json(manifest)));
}

void run_learn(const LearnArgs& a, giso::RunManifest manifest) {
  auto start = Clock::now();
  giso::GraphicalModel family;
  if (!a.family.empty()) {
    family = giso::load_model(a.family, false);
    manifest.inputs["family"] = a.family;
  } else {
    if (!a.order) throw giso::InputError("learn needs --family or --order");
    const int p = sample_width(a.samples);
    const giso::BasisKind basis = giso::basis_kind_from_string(a.basis);
    const std::string alphabet_text = a.alphabet.empty() ? "2" : a.alphabet;
    family = giso::complete_family(p, *a.order, basis, giso::parse_alphabet(alphabet_text, p));
    family.validate();
  }
  const giso::NormalizationReport norm = giso::check_normalization(family, true);
  if (!norm.ok()) throw giso::InputError("basis violates the normalization |g| <= 1; rescale the basis");
  const giso::SampleSet samples = giso::read_samples(a.samples, family.alphabet);
  manifest.inputs["samples"] = a.samples;
  manifest.timings["load"] = seconds_since(start);

  const std::size_t threads = a.threads ? *a.threads : giso::default_thread_count();
  manifest.hyperparameters = {{"mode", a.mode}, {"gamma_hat", a.gamma_hat}, {"threads", threads},
                              {"n", samples.n}};
  if (a.alpha) manifest.hyperparameters["alpha"] = *a.alpha;
  if (a.gamma) manifest.hyperparameters["gamma"] = *a.gamma;
  if (a.rho_npc) manifest.hyperparameters["rho_npc"] = *a.rho_npc;
  if (a.epsilon) manifest.hyperparameters["epsilon"] = *a.epsilon;
  if (a.max_iters) manifest.hyperparameters["max_iters_override"] = *a.max_iters;

  start = Clock::now();
  Json result;
  if (a.mode == "grise") {
    if (!a.node) throw giso::InputError("grise mode needs --node");
    giso::SolverOptions options;
    options.epsilon = a.epsilon ? *a.epsilon : 0.1;
    options.max_iterations = a.max_iters;
    manifest.hyperparameters["epsilon"] = options.epsilon;
    const auto estimate = giso::estimate_node(family.graph, family.basis, family.alphabet,
                                              giso::WeightedConfigurations::from_samples(samples), *a.node - 1,
                                              a.gamma_hat, options);
    result = giso::node_estimate_to_json(estimate, family.graph, family.basis, family.alphabet);
  } else if (a.mode == "suprise") {
    if (!a.alpha) throw giso::InputError("suprise mode needs --alpha");
    giso::SupriseConfig config;
    config.alpha = *a.alpha;
    config.gamma_hat = a.gamma_hat;
    config.gamma = a.gamma;
    config.rho_npc = a.rho_npc;
    config.epsilon_override = a.epsilon;
    config.max_iterations_override = a.max_iters;
    config.threads = threads;
    const giso::StructureReport report = giso::run_suprise(family.graph, family.basis, samples, config);
    manifest.hyperparameters["epsilon"] = report.epsilon;
    result = giso::report_to_json(report);
  } else {
    throw giso::InputError("--mode must be grise or suprise");
  }
  manifest.timings["learn"] = seconds_since(start);
  emit(a.out, result, manifest);
}

void run_npc(const ModelArgs& a, giso::RunManifest manifest) {
  const auto start = Clock::now();
  const giso::GraphicalModel model = giso::load_model(a.model);
  const giso::NpcReport report = giso::npc_report(model);
  manifest.inputs["model"] = a.model;
  manifest.hyperparameters = {{"gamma", report.gamma}};
  manifest.timings["npc"] = seconds_since(start);
  emit(a.out, giso::npc_to_json(report), manifest);
}

void run_oracle(const ModelArgs& a, giso::RunManifest manifest) {
  const auto start = Clock::now();
  const giso::GraphicalModel model = giso::load_model(a.model);
  const giso::ExactDistribution dist = giso::enumerate_distribution(model);
  manifest.inputs["model"] = a.model;
  manifest.timings["enumerate"] = seconds_since(start);
  emit(a.out, giso::distribution_to_json(dist), manifest);
}

void run_eval(const EvalArgs& a, giso::RunManifest manifest) {
  const auto start = Clock::now();
  const giso::GraphicalModel truth = giso::load_model(a.truth);
  const giso::StructureReport report = giso::report_from_json(giso::read_json_file(a.report));
  const giso::RecoveryMetrics m = giso::evaluate_estimate(truth, report, a.chi, a.alpha);
  manifest.inputs["truth"] = a.truth;
  manifest.inputs["report"] = a.report;
  if (a.chi) manifest.hyperparameters["chi"] = *a.chi;
  if (a.alpha) manifest.hyperparameters["alpha"] = *a.alpha;
  manifest.timings["eval"] = seconds_since(start);
  emit(a.out, giso::metrics_to_json(m), manifest);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure and parameter learning for discrete graphical models"};
  app.set_version_flag("--version", giso::kVersion);
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-model", "Write a random pairwise model");
  gen_cmd->add_option("--topology", gen.topology, "chain | grid | erdos | complete");
  gen_cmd->add_option("--basis", gen.basis, "monomial | indicator");
  gen_cmd->add_option("-p", gen.p, "Vertex count")->required();
  gen_cmd->add_option("-q", gen.q, "Alphabet size");
  gen_cmd->add_option("--degree", gen.degree, "Expected degree for erdos");
  gen_cmd->add_option("--coupling-range", gen.coupling, "a,b")->delimiter(',')->expected(2);
  gen_cmd->add_option("--field-range", gen.field, "a,b")->delimiter(',')->expected(2);
  gen_cmd->add_flag("--no-fields", gen.no_fields, "Omit single-vertex factors");
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--out", gen.out, "Model JSON path")->required();

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Draw samples from a model");
  sample_cmd->add_option("--model", sample.model)->required();
  sample_cmd->add_option("-n", sample.n, "Sample count")->required();
  sample_cmd->add_option("--seed", sample.seed);
  sample_cmd->add_option("--method", sample.method, "exact | gibbs | auto");
  sample_cmd->add_option("--burn-in", sample.burn_in, "Gibbs sweeps before the first sample (default 100 p)");
  sample_cmd->add_option("--thinning", sample.thinning, "Gibbs sweeps between samples");
  sample_cmd->add_option("--out", sample.out)->required();

  LearnArgs learn;
  auto* learn_cmd = app.add_subcommand("learn", "Run GRISE on one node or SUPRISE on all");
  learn_cmd->add_option("--samples", learn.samples)->required();
  learn_cmd->add_option("--family", learn.family, "Family JSON (theta optional)");
  learn_cmd->add_option("--order", learn.order, "Build the complete family of this order");
  learn_cmd->add_option("--basis", learn.basis, "Basis for --order");
  learn_cmd->add_option("--alphabet", learn.alphabet, "q or q1,q2,... for --order");
  learn_cmd->add_option("--mode", learn.mode, "grise | suprise");
  learn_cmd->add_option("--node", learn.node, "Node (1-based) for grise mode");
  learn_cmd->add_option("--alpha", learn.alpha, "Minimal clique intensity");
  learn_cmd->add_option("--gamma-hat", learn.gamma_hat, "l1 prior radius");
  learn_cmd->add_option("--gamma", learn.gamma, "Interaction strength (default gamma-hat)");
  learn_cmd->add_option("--rho-npc", learn.rho_npc, "NPC constant");
  learn_cmd->add_option("--epsilon", learn.epsilon, "Solver accuracy");
  learn_cmd->add_option("--max-iters-override", learn.max_iters, "Fixed iteration count per solve");
  learn_cmd->add_option("--threads", learn.threads, "Worker cap (default GISO_THREADS or all cores)");
  learn_cmd->add_option("--out", learn.out)->required();

  ModelArgs npc;
  auto* npc_cmd = app.add_subcommand("npc", "NPC constants and bounds per vertex");
  npc_cmd->add_option("--model", npc.model)->required();
  npc_cmd->add_option("--out", npc.out)->required();

  ModelArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Dump the exact distribution");
  oracle_cmd->add_option("--model", oracle.model)->required();
  oracle_cmd->add_option("--out", oracle.out)->required();

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Compare a report with the true model");
  eval_cmd->add_option("--truth", eval.truth)->required();
  eval_cmd->add_option("--report", eval.report)->required();
  eval_cmd->add_option("--chi", eval.chi, "Chromatic number for the pairwise l2 budget");
  eval_cmd->add_option("--alpha", eval.alpha);
  eval_cmd->add_option("--out", eval.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  try {
    if (*gen_cmd) run_gen(gen, make_manifest("gen-model", argc, argv));
    if (*sample_cmd) run_sample(sample, make_manifest("sample", argc, argv));
    if (*learn_cmd) run_learn(learn, make_manifest("learn", argc, argv));
    if (*npc_cmd) run_npc(npc, make_manifest("npc", argc, argv));
    if (*oracle_cmd) run_oracle(oracle, make_manifest("oracle", argc, argv));
    if (*eval_cmd) run_eval(eval, make_manifest("eval", argc, argv));
  } catch (const giso::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const giso::SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
