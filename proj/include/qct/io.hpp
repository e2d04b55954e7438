#pragma once

#include <optional>
#include <string>

#include "qct/embed.hpp"
#include "qct/ising.hpp"
#include "qct/route.hpp"

namespace qct {

// Schema versions, reported by the command line tool.
inline constexpr int kSchemaQasm = 1;
inline constexpr int kSchemaCoupling = 1;
inline constexpr int kSchemaModel = 1;
inline constexpr int kSchemaEmbedding = 1;
inline constexpr int kSchemaSamples = 1;
inline constexpr int kSchemaSchedule = 1;
inline constexpr int kSchemaSknet = 1;

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Model file:
//   {"vartype": "SPIN"|"BINARY", "linear": {"a": 1.0}, "quadratic": {"a,b": -1.0},
//    "terms": [{"vars": ["a","b","c"], "coeff": -5.0}], "offset": 0.0}
// "terms" makes it higher-order (binary only). `negate` flips the sign of
// every coefficient and the offset on load, for inputs written with the
// opposite energy convention.
struct LoadedModel {
    std::optional<QuadraticModel> quadratic;
    std::optional<HuboModel> hubo;
};

LoadedModel load_model_json(const std::string& text, bool negate = false);
std::string model_to_json(const QuadraticModel& model);
std::string hubo_to_json(const HuboModel& model);

// Coupling graph: {"nodes": 5, "edges": [[0,1,"sym"],[1,2,"uni"],...]}
// (a bare [a,b] edge defaults to "sym").
CouplingGraph load_coupling_json(const std::string& text);
std::string coupling_to_json(const CouplingGraph& graph);

// Hardware graph: same schema without direction flags; "nodes" may be an
// explicit list (direction flags, when present, are ignored).
HardwareGraph load_hardware_json(const std::string& text);
std::string hardware_to_json(const HardwareGraph& graph);

// Embedding: {"var": [0, 4], ...}
Embedding load_embedding_json(const std::string& text);
std::string embedding_to_json(const Embedding& emb);

// Unitary: {"dim": 2, "entries": [[re, im], ...]} row-major, dim*dim pairs.
Mat load_unitary_json(const std::string& text);
std::string unitary_to_json(const Mat& u);

// Samples: one JSON object per line,
//   {"assignment": {...}, "energy": e, "occurrences": n, "chain_break_fraction": f}
std::string samples_to_jsonl(const SampleSet& samples);
SampleSet load_samples_jsonl(const std::string& text);

// Layout: {"0": 3, "1": 1, ...} virtual -> physical
std::string layout_to_json(const Layout& layout);

}  // namespace qct
