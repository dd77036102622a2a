#include "giso/io.hpp"

#include <fstream>
#include <sstream>

#include "giso/error.hpp"

namespace giso {
namespace {

Json one_based(const std::vector<int>& vertices) {
  Json out = Json::array();
  for (int v : vertices) out.push_back(v + 1);
  return out;
}

std::vector<int> zero_based(const Json& j, int p, const std::string& what) {
  if (!j.is_array()) throw InputError(what + " must be an array");
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw InputError(what + " entries must be integers");
    const int x = v.get<int>();
    if (x < 1 || x > p) throw InputError(what + " entry " + std::to_string(x) + " outside 1.." + std::to_string(p));
    out.push_back(x - 1);
  }
  return out;
}

std::string clique_key(const std::vector<int>& c) {
  std::string out;
  for (std::size_t j = 0; j < c.size(); ++j) out += (j ? "," : "") + std::to_string(c[j] + 1);
  return out;
}

std::vector<int> parse_clique_key(const std::string& key, int p) {
  std::vector<int> out;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const int v = std::stoi(part);
    if (v < 1 || v > p) throw InputError("clique key '" + key + "' out of range");
    out.push_back(v - 1);
  }
  return out;
}

template <class T>
T field(const Json& j, const char* name) {
  if (!j.contains(name)) throw InputError(std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const Json::exception& e) {
    throw InputError(std::string("field '") + name + "': " + e.what());
  }
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

}  // namespace

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json read_json_file(const std::string& path) {
  auto in = open_in(path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

Json model_to_json(const GraphicalModel& model) {
  Json j;
  j["p"] = model.graph.p();
  j["alphabet"] = model.alphabet.sizes;
  j["basis"] = to_string(model.basis);
  Json factors = Json::array();
  for (const Factor& f : model.graph.factors()) {
    Json e;
    e["scope"] = one_based(f.scope);
    if (model.basis == BasisKind::kIndicator) e["assignment"] = f.assignment;
    if (model.basis == BasisKind::kCustom) e["table"] = {{"scope", one_based(f.scope)}, {"values", f.table}};
    e["theta"] = model.theta.empty() ? 0.0 : model.parameter(f.id);
    factors.push_back(std::move(e));
  }
  j["factors"] = std::move(factors);
  return j;
}

GraphicalModel model_from_json(const Json& j, bool require_theta) {
  if (!j.is_object()) throw InputError("model file must hold a JSON object");
  const int p = field<int>(j, "p");
  if (p < 1) throw InputError("p must be positive");
  GraphicalModel model;
  model.alphabet.sizes = field<std::vector<int>>(j, "alphabet");
  if (model.alphabet.p() != p) throw InputError("alphabet has " + std::to_string(model.alphabet.p()) + " entries, p is " + std::to_string(p));
  model.alphabet.validate();
  model.basis = basis_kind_from_string(field<std::string>(j, "basis"));

  const Json& list = j.contains("factors") ? j.at("factors") : Json::array();
  if (!list.is_array()) throw InputError("'factors' must be an array");
  std::vector<Factor> factors;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const Json& e = list[k];
    const std::string where = "factor " + std::to_string(k + 1);
    Factor f;
    f.id = static_cast<int>(k);
    if (!e.contains("scope")) throw InputError(where + ": missing scope");
    f.scope = zero_based(e.at("scope"), p, where + " scope");
    if (e.contains("assignment")) f.assignment = e.at("assignment").get<std::vector<int>>();
    if (e.contains("table")) {
      const Json& t = e.at("table");
      if (t.contains("scope") && zero_based(t.at("scope"), p, where + " table scope") != f.scope) {
        throw InputError(where + ": table scope differs from the factor scope");
      }
      f.table = field<std::vector<double>>(t, "values");
    }
    if (e.contains("theta")) {
      model.theta.push_back(field<double>(e, "theta"));
    } else if (require_theta) {
      throw InputError(where + ": missing theta");
    } else {
      model.theta.push_back(0.0);
    }
    factors.push_back(std::move(f));
  }
  model.graph = FactorGraph::build(p, std::move(factors));
  model.validate();
  return model;
}

GraphicalModel load_model(const std::string& path, bool require_theta) {
  return model_from_json(read_json_file(path), require_theta);
}

void save_model(const std::string& path, const GraphicalModel& model) {
  write_text_file(path, dump_json(model_to_json(model)));
}

void write_samples(std::ostream& out, const SampleSet& samples) {
  out << samples.n << ' ' << samples.p << '\n';
  std::string line;
  for (std::size_t t = 0; t < samples.n; ++t) {
    line.clear();
    const auto row = samples.row(t);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += ' ';
      line += std::to_string(row[i]);
    }
    line += '\n';
    out << line;
  }
}

void write_samples(const std::string& path, const SampleSet& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  write_samples(out, samples);
}

SampleSet read_samples(std::istream& in, const Alphabet& alphabet) {
  SampleSet s;
  long long n = 0;
  long long p = 0;
  if (!(in >> n >> p) || n < 1 || p < 1) throw InputError("sample file header must be 'n p' with n, p >= 1");
  if (p != alphabet.p()) {
    throw InputError("sample file has " + std::to_string(p) + " columns, alphabet has " + std::to_string(alphabet.p()));
  }
  s.n = static_cast<std::size_t>(n);
  s.p = static_cast<int>(p);
  s.alphabet = alphabet;
  s.data.resize(s.n * static_cast<std::size_t>(s.p));
  for (std::size_t t = 0; t < s.n; ++t) {
    for (int i = 0; i < s.p; ++i) {
      long long v = 0;
      if (!(in >> v)) throw InputError("sample row " + std::to_string(t + 1) + " is truncated");
      if (v < 0 || v >= alphabet.size(i)) {
        throw InputError("sample row " + std::to_string(t + 1) + ", vertex " + std::to_string(i + 1) + ": symbol " +
                         std::to_string(v) + " outside 0.." + std::to_string(alphabet.size(i) - 1));
      }
      s.data[t * static_cast<std::size_t>(s.p) + static_cast<std::size_t>(i)] = static_cast<int>(v);
    }
  }
  std::string rest;
  if (in >> rest) throw InputError("sample file has more entries than its header declares");
  s.provenance = "file";
  return s;
}

SampleSet read_samples(const std::string& path, const Alphabet& alphabet) {
  auto in = open_in(path);
  return read_samples(in, alphabet);
}

Alphabet parse_alphabet(const std::string& text, int p) {
  Alphabet a;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      a.sizes.push_back(std::stoi(part));
    } catch (const std::exception&) {
      throw InputError("alphabet entry '" + part + "' is not an integer");
    }
  }
  if (a.sizes.size() == 1 && p > 1) a.sizes.assign(static_cast<std::size_t>(p), a.sizes.front());
  if (a.p() != p) throw InputError("alphabet lists " + std::to_string(a.p()) + " sizes for p = " + std::to_string(p));
  a.validate();
  return a;
}

Json report_to_json(const StructureReport& report) {
  Json j;
  j["p"] = report.p;
  j["basis"] = to_string(report.basis);
  j["alphabet"] = report.alphabet.sizes;
  j["epsilon"] = report.epsilon;
  j["guarantee_void"] = report.guarantee_void;
  Json cliques = Json::array();
  for (const auto& c : report.cliques) cliques.push_back(one_based(c));
  j["cliques"] = std::move(cliques);
  Json params = Json::array();
  for (const auto& e : report.parameters) {
    Json x;
    x["factor"] = e.factor_id;
    x["scope"] = one_based(e.scope);
    x["assignment"] = e.assignment;
    x["theta_avg"] = e.theta_avg;
    x["tested"] = e.tested;
    params.push_back(std::move(x));
  }
  j["parameters"] = std::move(params);
  Json rounds = Json::array();
  for (const auto& r : report.rounds) {
    Json x;
    x["t"] = r.t;
    x["skipped"] = r.skipped;
    Json removed = Json::array();
    for (const auto& c : r.removed) removed.push_back(one_based(c));
    x["removed"] = std::move(removed);
    Json norms = Json::object();
    for (const auto& [c, v] : r.norms) norms[clique_key(c)] = v;
    x["norms"] = std::move(norms);
    rounds.push_back(std::move(x));
  }
  j["rounds"] = std::move(rounds);
  Json solves = Json::array();
  for (const auto& s : report.solves) {
    solves.push_back({{"round", s.round},
                      {"node", s.vertex + 1},
                      {"dimension", s.dimension},
                      {"iterations", s.iterations},
                      {"best_iteration", s.best_iteration},
                      {"best_value", s.best_value},
                      {"l1_norm", s.l1_norm},
                      {"l1_exceeds_prior", s.l1_exceeds_prior}});
  }
  j["solves"] = std::move(solves);
  return j;
}

StructureReport report_from_json(const Json& j) {
  StructureReport r;
  r.p = field<int>(j, "p");
  r.basis = basis_kind_from_string(field<std::string>(j, "basis"));
  r.alphabet.sizes = field<std::vector<int>>(j, "alphabet");
  if (j.contains("epsilon")) r.epsilon = j.at("epsilon").get<double>();
  if (j.contains("guarantee_void")) r.guarantee_void = j.at("guarantee_void").get<bool>();
  for (const auto& c : field<Json>(j, "cliques")) r.cliques.push_back(zero_based(c, r.p, "clique"));
  for (const auto& e : field<Json>(j, "parameters")) {
    EstimatedParameter x;
    x.factor_id = e.value("factor", -1);
    x.scope = zero_based(e.at("scope"), r.p, "parameter scope");
    x.assignment = e.value("assignment", std::vector<int>{});
    x.theta_avg = field<double>(e, "theta_avg");
    x.tested = e.value("tested", true);
    r.parameters.push_back(std::move(x));
  }
  if (j.contains("rounds")) {
    for (const auto& e : j.at("rounds")) {
      RoundLog log;
      log.t = field<int>(e, "t");
      log.skipped = e.value("skipped", false);
      for (const auto& c : e.value("removed", Json::array())) log.removed.push_back(zero_based(c, r.p, "removed clique"));
      const Json norms = e.value("norms", Json::object());
      for (const auto& [key, v] : norms.items()) log.norms[parse_clique_key(key, r.p)] = v.get<double>();
      r.rounds.push_back(std::move(log));
    }
  }
  if (j.contains("solves")) {
    for (const auto& e : j.at("solves")) {
      NodeSolve s;
      s.round = field<int>(e, "round");
      s.vertex = field<int>(e, "node") - 1;
      s.dimension = field<std::size_t>(e, "dimension");
      s.iterations = field<std::size_t>(e, "iterations");
      s.best_iteration = field<std::size_t>(e, "best_iteration");
      s.best_value = field<double>(e, "best_value");
      s.l1_norm = field<double>(e, "l1_norm");
      s.l1_exceeds_prior = e.value("l1_exceeds_prior", false);
      r.solves.push_back(s);
    }
  }
  return r;
}

Json metrics_to_json(const RecoveryMetrics& m) {
  Json j;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  j["true_cliques"] = m.true_cliques;
  j["estimated_cliques"] = m.estimated_cliques;
  j["correct_cliques"] = m.correct_cliques;
  j["linf2_error"] = m.linf2_error;
  j["l2_error"] = m.l2_error;
  if (m.chi_budget) j["chi_budget"] = *m.chi_budget;
  if (m.within_chi_budget) j["within_chi_budget"] = *m.within_chi_budget;
  return j;
}

Json npc_to_json(const NpcReport& report) {
  Json j = Json::object();
  for (const auto& v : report.vertices) {
    j[std::to_string(v.vertex + 1)] = {{"rho_exact", v.rho_exact},
                                       {"rho_bound", v.rho_bound},
                                       {"min_clique", one_based(v.min_clique)},
                                       {"rho_exact_maximal", v.rho_exact_maximal},
                                       {"rho_bound_maximal", v.rho_bound_maximal},
                                       {"min_clique_maximal", one_based(v.min_clique_maximal)},
                                       {"degenerate", v.degenerate}};
  }
  return j;
}

Json distribution_to_json(const ExactDistribution& dist) {
  Json j;
  j["alphabet"] = dist.radix;
  j["log_z"] = dist.log_z;
  j["probabilities"] = dist.probabilities;
  return j;
}

Json node_estimate_to_json(const NodeEstimate& estimate, const FactorGraph& family, BasisKind basis,
                           const Alphabet& alphabet) {
  Json j;
  j["mode"] = "grise";
  j["p"] = family.p();
  j["basis"] = to_string(basis);
  j["alphabet"] = alphabet.sizes;
  j["node"] = estimate.vertex + 1;
  Json factors = Json::array();
  for (std::size_t k = 0; k < estimate.factor_ids.size(); ++k) {
    const Factor& f = family.factor(estimate.factor_ids[k]);
    factors.push_back({{"factor", f.id},
                       {"scope", one_based(f.scope)},
                       {"assignment", f.assignment},
                       {"theta", estimate.report.theta[k]},
                       {"target", static_cast<bool>(estimate.is_target[k])}});
  }
  j["factors"] = std::move(factors);
  const SolverReport& r = estimate.report;
  j["solver"] = {{"iterations", r.iterations},       {"planned_iterations", r.planned_iterations},
                 {"best_iteration", r.best_iteration}, {"best_value", r.best_value},
                 {"best_log_value", r.best_log_value}, {"first_step", r.first_step},
                 {"last_step", r.last_step},           {"l1_norm", r.l1_norm},
                 {"l1_exceeds_prior", r.l1_exceeds_prior}};
  return j;
}

Json manifest_to_json(const RunManifest& manifest) {
  Json j;
  j["command"] = manifest.command;
  j["argv"] = manifest.argv;
  j["inputs"] = manifest.inputs;
  j["hyperparameters"] = manifest.hyperparameters;
  j["timings_seconds"] = manifest.timings;
  j["version"] = kVersion;
  return j;
}

}  // namespace giso
