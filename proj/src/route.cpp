#include "qct/route.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "qct/error.hpp"
#include "qct/rng.hpp"

namespace qct {

CouplingGraph::CouplingGraph(int n) : num_nodes(n), adj_(static_cast<size_t>(std::max(n, 0))) {
    if (n <= 0) throw Error(Errc::invalid_input, "coupling graph needs at least one node");
}

void CouplingGraph::add_edge(int a, int b, EdgeKind kind) {
    if (a < 0 || b < 0 || a >= num_nodes || b >= num_nodes)
        throw Error(Errc::index_out_of_range, "edge endpoint outside node range");
    if (a == b) throw Error(Errc::invalid_input, "self-loops are not allowed");
    const std::pair<int, int> key = kind == EdgeKind::sym ? std::pair{std::min(a, b), std::max(a, b)}
                                                          : std::pair{a, b};
    edges_[key] = kind;
    auto link = [this](int u, int v) {
        auto& vec = adj_[static_cast<size_t>(u)];
        auto it = std::lower_bound(vec.begin(), vec.end(), v);
        if (it == vec.end() || *it != v) vec.insert(it, v);
    };
    link(a, b);
    link(b, a);
}

bool CouplingGraph::has_link(int a, int b) const {
    return has_direction(a, b) || has_direction(b, a);
}

bool CouplingGraph::has_direction(int a, int b) const {
    if (edges_.count({a, b})) return true;
    auto it = edges_.find({std::min(a, b), std::max(a, b)});
    return it != edges_.end() && it->second == EdgeKind::sym;
}

const std::vector<int>& CouplingGraph::neighbors(int node) const {
    return adj_.at(static_cast<size_t>(node));
}

std::vector<int> CouplingGraph::shortest_path(int from, int to) const {
    std::vector<int> parent(static_cast<size_t>(num_nodes), -1);
    std::deque<int> queue{from};
    parent[static_cast<size_t>(from)] = from;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        if (u == to) break;
        for (int v : neighbors(u)) {
            if (parent[static_cast<size_t>(v)] < 0) {
                parent[static_cast<size_t>(v)] = u;
                queue.push_back(v);
            }
        }
    }
    if (parent[static_cast<size_t>(to)] < 0) return {};
    std::vector<int> path{to};
    while (path.back() != from) path.push_back(parent[static_cast<size_t>(path.back())]);
    std::reverse(path.begin(), path.end());
    return path;
}

int Layout::physical(int virtual_qubit) const {
    auto it = map.find(virtual_qubit);
    if (it == map.end())
        throw Error(Errc::invalid_input, "layout misses virtual qubit " + std::to_string(virtual_qubit));
    return it->second;
}

void Layout::check(int num_virtual, const CouplingGraph& graph) const {
    std::set<int> images;
    for (int v = 0; v < num_virtual; ++v) {
        const int p = physical(v);
        if (p < 0 || p >= graph.num_nodes)
            throw Error(Errc::index_out_of_range, "layout image outside the device");
        if (!images.insert(p).second)
            throw Error(Errc::invalid_input, "layout is not injective");
    }
}

Layout Layout::identity(int num_virtual) {
    Layout l;
    for (int v = 0; v < num_virtual; ++v) l.map[v] = v;
    return l;
}

Layout choose_layout(const Circuit& circuit, const CouplingGraph& graph, LayoutStrategy strategy,
                     std::uint64_t seed) {
    const int n = circuit.num_qubits;
    if (n > graph.num_nodes)
        throw Error(Errc::too_few_physical_qubits,
                    std::to_string(n) + " virtual qubits on " + std::to_string(graph.num_nodes) +
                        " physical nodes");
    if (strategy == LayoutStrategy::trivial) return Layout::identity(n);

    // dense: greedy growth maximizing internal edge count, restarted from every
    // node, seeded tie-breaking.
    Rng rng(seed);
    std::vector<int> best_set;
    long best_score = -1;
    for (int start = 0; start < graph.num_nodes; ++start) {
        std::vector<char> in_set(static_cast<size_t>(graph.num_nodes), 0);
        std::vector<int> chosen{start};
        in_set[static_cast<size_t>(start)] = 1;
        long score = 0;
        while (static_cast<int>(chosen.size()) < n) {
            int best_gain = -1;
            std::vector<int> ties;
            for (int cand = 0; cand < graph.num_nodes; ++cand) {
                if (in_set[static_cast<size_t>(cand)]) continue;
                int gain = 0;
                for (int nb : graph.neighbors(cand)) gain += in_set[static_cast<size_t>(nb)] ? 1 : 0;
                if (gain > best_gain) {
                    best_gain = gain;
                    ties.assign(1, cand);
                } else if (gain == best_gain) {
                    ties.push_back(cand);
                }
            }
            const int pick = ties[static_cast<size_t>(rng.uniform_int(ties.size()))];
            in_set[static_cast<size_t>(pick)] = 1;
            chosen.push_back(pick);
            score += best_gain;
        }
        if (score > best_score) {
            best_score = score;
            std::sort(chosen.begin(), chosen.end());
            best_set = chosen;
        }
    }
    Layout l;
    for (int v = 0; v < n; ++v) l.map[v] = best_set[static_cast<size_t>(v)];
    return l;
}

namespace {

void check_connected_over_image(const CouplingGraph& graph, const Layout& layout, int num_virtual) {
    if (num_virtual == 0) return;
    const int root = layout.physical(0);
    std::vector<char> seen(static_cast<size_t>(graph.num_nodes), 0);
    std::deque<int> queue{root};
    seen[static_cast<size_t>(root)] = 1;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int v : graph.neighbors(u))
            if (!seen[static_cast<size_t>(v)]) {
                seen[static_cast<size_t>(v)] = 1;
                queue.push_back(v);
            }
    }
    for (int v = 0; v < num_virtual; ++v)
        if (!seen[static_cast<size_t>(layout.physical(v))])
            throw Error(Errc::disconnected_region,
                        "virtual qubit " + std::to_string(v) + " is unreachable");
}

}  // namespace

Circuit route_cascade(const Circuit& circuit, const CouplingGraph& graph, const Layout& layout) {
    layout.check(circuit.num_qubits, graph);
    check_connected_over_image(graph, layout, circuit.num_qubits);
    Circuit out(graph.num_nodes);
    for (const Gate& g : circuit.gates) {
        if (g.arity() == 1) {
            Gate moved = g;
            moved.qubits[0] = layout.physical(g.qubits[0]);
            out.append(std::move(moved));
            continue;
        }
        if (g.arity() != 2)
            throw Error(Errc::invalid_gate, "routing expects gates on at most two qubits");
        const int a = layout.physical(g.qubits[0]);
        const int b = layout.physical(g.qubits[1]);
        Gate moved = g;
        if (graph.has_link(a, b)) {
            moved.qubits = {a, b};
            out.append(std::move(moved));
            continue;
        }
        const std::vector<int> path = graph.shortest_path(a, b);
        if (path.empty()) throw Error(Errc::disconnected_region, "no path between gate qubits");
        // walk the first operand next to the second, apply, then walk back
        for (size_t i = 0; i + 2 < path.size(); ++i)
            out.append(Gate(GateKind::swap, {path[i], path[i + 1]}));
        moved.qubits = {path[path.size() - 2], path.back()};
        out.append(std::move(moved));
        for (size_t i = path.size() - 2; i-- > 0;)
            out.append(Gate(GateKind::swap, {path[i], path[i + 1]}));
    }
    return out;
}

namespace {

struct LiveLayout {
    std::vector<int> pos;  // virtual -> physical
    std::vector<int> occ;  // physical -> virtual or -1

    LiveLayout(const Layout& layout, int num_virtual, int num_nodes)
        : pos(static_cast<size_t>(num_virtual)), occ(static_cast<size_t>(num_nodes), -1) {
        for (int v = 0; v < num_virtual; ++v) {
            pos[static_cast<size_t>(v)] = layout.physical(v);
            occ[static_cast<size_t>(layout.physical(v))] = v;
        }
    }

    void swap_nodes(int p, int q) {
        const int vp = occ[static_cast<size_t>(p)], vq = occ[static_cast<size_t>(q)];
        occ[static_cast<size_t>(p)] = vq;
        occ[static_cast<size_t>(q)] = vp;
        if (vp >= 0) pos[static_cast<size_t>(vp)] = q;
        if (vq >= 0) pos[static_cast<size_t>(vq)] = p;
    }
};

// all-pairs skeleton distances (small graphs)
std::vector<std::vector<int>> all_distances(const CouplingGraph& graph) {
    const size_t n = static_cast<size_t>(graph.num_nodes);
    std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
    for (size_t s = 0; s < n; ++s) {
        std::deque<int> queue{static_cast<int>(s)};
        dist[s][s] = 0;
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            for (int v : graph.neighbors(u))
                if (dist[s][static_cast<size_t>(v)] < 0) {
                    dist[s][static_cast<size_t>(v)] = dist[s][static_cast<size_t>(u)] + 1;
                    queue.push_back(v);
                }
        }
    }
    return dist;
}

}  // namespace

RoutedCircuit route_lookahead(const Circuit& circuit, const CouplingGraph& graph,
                              const Layout& layout, int window, std::uint64_t seed) {
    if (window < 1) throw Error(Errc::invalid_input, "window must be >= 1");
    layout.check(circuit.num_qubits, graph);
    check_connected_over_image(graph, layout, circuit.num_qubits);

    const Circuit cascade = route_cascade(circuit, graph, layout);
    const int cascade_swaps = count_swaps(cascade);

    const auto dist = all_distances(graph);
    Rng rng(seed);
    LiveLayout live(layout, circuit.num_qubits, graph.num_nodes);
    Circuit out(graph.num_nodes);
    int swaps = 0;

    // physical-node pairs of the next `window` two-qubit gates from index gi
    std::vector<size_t> two_qubit_indices;
    for (size_t i = 0; i < circuit.gates.size(); ++i)
        if (circuit.gates[i].arity() == 2) two_qubit_indices.push_back(i);

    auto window_cost = [&](size_t from_2q_rank) {
        long cost = 0;
        for (size_t r = from_2q_rank;
             r < two_qubit_indices.size() && r < from_2q_rank + static_cast<size_t>(window); ++r) {
            const Gate& g = circuit.gates[two_qubit_indices[r]];
            const int pa = live.pos[static_cast<size_t>(g.qubits[0])];
            const int pb = live.pos[static_cast<size_t>(g.qubits[1])];
            cost += dist[static_cast<size_t>(pa)][static_cast<size_t>(pb)];
        }
        return cost;
    };

    size_t rank = 0;
    bool overflow = false;
    for (size_t gi = 0; gi < circuit.gates.size() && !overflow; ++gi) {
        const Gate& g = circuit.gates[gi];
        if (g.arity() == 1) {
            Gate moved = g;
            moved.qubits[0] = live.pos[static_cast<size_t>(g.qubits[0])];
            out.append(std::move(moved));
            continue;
        }
        if (g.arity() != 2)
            throw Error(Errc::invalid_gate, "routing expects gates on at most two qubits");

        int budget = 2 * graph.num_nodes;  // improving-move budget, then walk the path
        while (true) {
            const int pa = live.pos[static_cast<size_t>(g.qubits[0])];
            const int pb = live.pos[static_cast<size_t>(g.qubits[1])];
            if (graph.has_link(pa, pb)) break;

            int chosen_u = -1, chosen_v = -1;
            if (budget > 0) {
                const long now = window_cost(rank);
                long best_cost = now;
                std::vector<std::pair<int, int>> ties;
                for (int endpoint : {pa, pb}) {
                    for (int nb : graph.neighbors(endpoint)) {
                        live.swap_nodes(endpoint, nb);
                        const long cost = window_cost(rank);
                        live.swap_nodes(endpoint, nb);
                        if (cost < best_cost) {
                            best_cost = cost;
                            ties.assign(1, {endpoint, nb});
                        } else if (cost == best_cost && cost < now) {
                            ties.push_back({endpoint, nb});
                        }
                    }
                }
                if (!ties.empty()) {
                    const auto pick = ties[static_cast<size_t>(rng.uniform_int(ties.size()))];
                    chosen_u = pick.first;
                    chosen_v = pick.second;
                    --budget;
                }
            }
            if (chosen_u < 0) {
                // no improving swap: step along the shortest path
                const std::vector<int> path = graph.shortest_path(pa, pb);
                if (path.size() < 2)
                    throw Error(Errc::disconnected_region, "no path between gate qubits");
                chosen_u = path[0];
                chosen_v = path[1];
            }
            live.swap_nodes(chosen_u, chosen_v);
            out.append(Gate(GateKind::swap, {chosen_u, chosen_v}));
            if (++swaps > cascade_swaps) {
                overflow = true;
                break;
            }
        }
        if (overflow) break;
        Gate moved = g;
        moved.qubits = {live.pos[static_cast<size_t>(g.qubits[0])],
                        live.pos[static_cast<size_t>(g.qubits[1])]};
        out.append(std::move(moved));
        ++rank;
    }

    if (overflow) {
        // never worse than the cascade scheme
        return {cascade, layout, cascade_swaps};
    }
    Layout final_layout;
    for (int v = 0; v < circuit.num_qubits; ++v) final_layout.map[v] = live.pos[static_cast<size_t>(v)];
    return {std::move(out), std::move(final_layout), swaps};
}

Circuit fix_directions(const Circuit& circuit, const CouplingGraph& graph) {
    Circuit out(circuit.num_qubits);
    for (const Gate& g : circuit.gates) {
        if (g.arity() != 2) {
            out.append(g);
            continue;
        }
        const int a = g.qubits[0], b = g.qubits[1];
        if (!graph.has_link(a, b))
            throw Error(Errc::edge_absent_both_directions,
                        "no edge between " + std::to_string(a) + " and " + std::to_string(b));
        if (g.kind == GateKind::cx && !graph.has_direction(a, b)) {
            out.append(Gate(GateKind::h, {a}));
            out.append(Gate(GateKind::h, {b}));
            out.append(Gate(GateKind::cx, {b, a}));
            out.append(Gate(GateKind::h, {a}));
            out.append(Gate(GateKind::h, {b}));
            continue;
        }
        out.append(g);
    }
    return out;
}

bool verify_routed(const Circuit& original, const Circuit& routed, const Layout& layout,
                   const Layout& final_layout) {
    if (routed.num_qubits > 10)
        throw Error(Errc::dimension_too_large, "verification supports at most 10 physical qubits");
    const Mat u_orig = compose_unitary(original).m;
    const Mat u_routed = compose_unitary(routed).m;

    const int n = original.num_qubits;
    const std::size_t dim_n = std::size_t(1) << n;
    auto embed = [&](const Layout& l, std::size_t virtual_state) {
        std::size_t phys = 0;
        for (int v = 0; v < n; ++v)
            if (virtual_state & (std::size_t(1) << v)) phys |= std::size_t(1) << l.physical(v);
        return phys;
    };

    cxd phase(0, 0);
    double best_mag = -1;
    for (std::size_t col = 0; col < dim_n; ++col) {
        const auto routed_col = u_routed.col(static_cast<Eigen::Index>(embed(layout, col)));
        for (std::size_t row = 0; row < dim_n; ++row) {
            const cxd expect = u_orig(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
            if (std::abs(expect) > best_mag) {
                const cxd got = routed_col(static_cast<Eigen::Index>(embed(final_layout, row)));
                best_mag = std::abs(expect);
                if (std::abs(expect) > 1e-6)
                    phase = got / expect;
            }
        }
    }
    if (std::abs(std::abs(phase) - 1.0) > 1e-6) return false;

    for (std::size_t col = 0; col < dim_n; ++col) {
        const auto routed_col = u_routed.col(static_cast<Eigen::Index>(embed(layout, col)));
        // every amplitude must sit where the final layout says, nothing elsewhere
        Vec expected = Vec::Zero(u_routed.rows());
        for (std::size_t row = 0; row < dim_n; ++row)
            expected(static_cast<Eigen::Index>(embed(final_layout, row))) =
                phase * u_orig(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
        if ((routed_col - expected).cwiseAbs().maxCoeff() > 1e-8) return false;
    }
    return true;
}

int count_swaps(const Circuit& c) {
    int n = 0;
    for (const Gate& g : c.gates)
        if (g.kind == GateKind::swap) ++n;
    return n;
}

}  // namespace qct
