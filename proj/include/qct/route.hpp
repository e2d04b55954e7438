#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "qct/circuit.hpp"

namespace qct {

enum class EdgeKind { uni, sym };

// Device connectivity. A `uni` edge (a,b) offers cx with control a and target
// b only; a `sym` edge offers both directions (cz-style couplers).
struct CouplingGraph {
    int num_nodes = 0;

    CouplingGraph() = default;
    explicit CouplingGraph(int n);

    void add_edge(int a, int b, EdgeKind kind);

    bool has_link(int a, int b) const;       // any direction
    bool has_direction(int a, int b) const;  // cx control a -> target b available
    const std::vector<int>& neighbors(int node) const;  // undirected skeleton, sorted
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::map<std::pair<int, int>, EdgeKind>& edges() const { return edges_; }

    // Shortest path (BFS over the skeleton, ties resolved toward lower node
    // indices). Empty when unreachable.
    std::vector<int> shortest_path(int from, int to) const;

  private:
    // uni edges keyed (a,b); sym edges keyed (min,max)
    std::map<std::pair<int, int>, EdgeKind> edges_;
    std::vector<std::vector<int>> adj_;
};

// Injective virtual qubit -> physical node map.
struct Layout {
    std::map<int, int> map;

    int physical(int virtual_qubit) const;
    void check(int num_virtual, const CouplingGraph& graph) const;
    static Layout identity(int num_virtual);
};

enum class LayoutStrategy { trivial, dense };

Layout choose_layout(const Circuit& circuit, const CouplingGraph& graph,
                     LayoutStrategy strategy, std::uint64_t seed);

// Inserts swap chains along a shortest path in front of each non-adjacent
// two-qubit gate and undoes them right after, so the virtual->physical map is
// the same before and after every gate. Output acts on graph.num_nodes qubits.
Circuit route_cascade(const Circuit& circuit, const CouplingGraph& graph, const Layout& layout);

struct RoutedCircuit {
    Circuit circuit;
    Layout final_layout;
    int swaps_added = 0;
};

// Greedy look-ahead routing: each inserted swap minimizes the summed skeleton
// distance of the next `window` two-qubit gates, and the virtual->physical map
// drifts. Falls back to the cascade result if it would ever use more swaps.
RoutedCircuit route_lookahead(const Circuit& circuit, const CouplingGraph& graph,
                              const Layout& layout, int window, std::uint64_t seed);

// Replaces each cx whose direction the device lacks by the reversed cx
// conjugated with Hadamards. cz and swap only need the link to exist.
Circuit fix_directions(const Circuit& circuit, const CouplingGraph& graph);

// Simulation check (<= 10 physical qubits): the routed circuit, read through
// the initial and final layouts with ancillas in |0>, must equal the original
// up to a global phase (tolerance 1e-8).
bool verify_routed(const Circuit& original, const Circuit& routed, const Layout& layout,
                   const Layout& final_layout);

int count_swaps(const Circuit& c);

}  // namespace qct
