#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qct/ising.hpp"

namespace qct {

struct HardwareGraph {
    std::set<int> nodes;
    std::set<std::pair<int, int>> edges;  // first < second

    void add_node(int n);
    void add_edge(int a, int b);
    void remove_node(int n);  // drops incident edges

    bool has_edge(int a, int b) const;
    std::vector<int> neighbors(int n) const;
    int degree(int n) const;
};

// m x n grid of complete bipartite K_{t,t} cells; vertical inter-cell edges
// join same-index qubits of the first shore, horizontal ones the second.
HardwareGraph chimera_graph(int m, int n, int t);

// Interaction graph of a quadratic model (one node per variable).
struct SourceGraph {
    std::vector<std::string> vars;
    std::set<std::pair<int, int>> edges;

    static SourceGraph from_model(const QuadraticModel& model);
    static SourceGraph from_edges(const std::vector<std::pair<std::string, std::string>>& edges);
};

// logical variable -> connected chain of hardware nodes
using Embedding = std::map<std::string, std::vector<int>>;

struct EmbeddingReport {
    bool chains_disjoint = true;
    bool chains_connected = true;
    bool edges_covered = true;
    std::vector<std::string> violations;
    std::map<int, int> chain_length_histogram;  // length -> count
    int max_chain_length = 0;
    int min_chain_length = 0;

    bool ok() const { return chains_disjoint && chains_connected && edges_covered; }
};

EmbeddingReport validate_embedding(const SourceGraph& source, const HardwareGraph& target,
                                   const Embedding& emb);

// Heuristic chain growth with overlap penalties plus refinement sweeps;
// deterministic per seed, retried `tries` times with derived seeds. Throws
// embedding_not_found after the last retry (not a proof of non-embeddability).
Embedding find_embedding(const SourceGraph& source, const HardwareGraph& target,
                         std::uint64_t seed, int tries = 16);

// Spreads biases evenly over chains, places each logical coupling on the
// lexicographically first physical edge between the chains, and adds
// -chain_strength couplings on every intra-chain edge.
IsingModel embed_ising(const IsingModel& model, const Embedding& emb,
                       const HardwareGraph& target, double chain_strength);

// 2 * max(|h|, |J|) * (longest chain), at least 1.
double default_chain_strength(const IsingModel& model, const Embedding& emb);

// Majority-vote decoding; even splits resolved by a seeded coin per
// (record, variable). chain_break_fraction = fraction of non-unanimous
// chains. Energies are recomputed against the logical model.
SampleSet unembed_samples(const SampleSet& samples, const Embedding& emb,
                          const IsingModel& logical, std::uint64_t tie_seed);

struct QacEncoding {
    IsingModel encoded;
    int n = 1;
    double gamma = 0;
    std::vector<std::string> logical_vars;

    std::string copy_name(const std::string& var, int l) const { return var + "@" + std::to_string(l); }
    std::string penalty_name(const std::string& var) const { return var + "@P"; }
};

// n problem copies per variable plus one penalty qubit tied ferromagnetically
// with weight gamma; couplings replicated per copy, biases replicated.
QacEncoding qac_encode(const IsingModel& model, int n, double gamma);

// Majority vote over the n problem copies (penalty qubit excluded).
SampleSet qac_decode(const SampleSet& samples, const QacEncoding& enc, const IsingModel& logical);

struct ClonedProblem {
    IsingModel physical;
    std::vector<Embedding> replicas;  // pairwise non-adjacent node sets
};

// k replicas of the embedded problem; replica r+1 is re-found on the target
// minus the nodes of earlier replicas and their neighbors. Throws
// insufficient_room (detail = achievable count) when k does not fit.
ClonedProblem clone_problem(const IsingModel& model, const HardwareGraph& target,
                            const Embedding& emb, int k, double chain_strength,
                            std::uint64_t seed);

// Pools the per-replica decodings of physical samples.
SampleSet unembed_clones(const SampleSet& samples, const std::vector<Embedding>& replicas,
                         const IsingModel& logical, std::uint64_t tie_seed);

}  // namespace qct
