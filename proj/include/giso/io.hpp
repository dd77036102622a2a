#pragma once

#include <iosfwd>
#include <json.hpp>
#include <map>
#include <string>
#include <vector>

#include "giso/conditioning.hpp"
#include "giso/model.hpp"
#include "giso/oracle.hpp"
#include "giso/samples.hpp"
#include "giso/suprise.hpp"

namespace giso {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

/// Canonical text: sorted keys, two-space indent, shortest round-trip floats,
/// trailing newline.
std::string dump_json(const Json& j);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Vertices are 1-based in files. `require_theta` is off for families.
Json model_to_json(const GraphicalModel& model);
GraphicalModel model_from_json(const Json& j, bool require_theta = true);
GraphicalModel load_model(const std::string& path, bool require_theta = true);
void save_model(const std::string& path, const GraphicalModel& model);

/// "n p" header, then one row of space-separated symbols per sample.
void write_samples(std::ostream& out, const SampleSet& samples);
void write_samples(const std::string& path, const SampleSet& samples);
SampleSet read_samples(std::istream& in, const Alphabet& alphabet);
SampleSet read_samples(const std::string& path, const Alphabet& alphabet);

/// "q1,q2,..." or a single "q" repeated to p entries.
Alphabet parse_alphabet(const std::string& text, int p);

Json report_to_json(const StructureReport& report);
StructureReport report_from_json(const Json& j);
Json metrics_to_json(const RecoveryMetrics& m);
Json npc_to_json(const NpcReport& report);
Json distribution_to_json(const ExactDistribution& dist);
Json node_estimate_to_json(const NodeEstimate& estimate, const FactorGraph& family, BasisKind basis,
                           const Alphabet& alphabet);

struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  std::map<std::string, std::string> inputs;
  Json hyperparameters = Json::object();
  std::map<std::string, double> timings;
};

Json manifest_to_json(const RunManifest& manifest);

}  // namespace giso
