#include "qct/embed.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>

#include "qct/error.hpp"
#include "qct/rng.hpp"

namespace qct {

void HardwareGraph::add_node(int n) {
    if (n < 0) throw Error(Errc::index_out_of_range, "negative node id");
    nodes.insert(n);
}

void HardwareGraph::add_edge(int a, int b) {
    if (a == b) throw Error(Errc::invalid_input, "self-loops are not allowed");
    add_node(a);
    add_node(b);
    edges.insert({std::min(a, b), std::max(a, b)});
}

void HardwareGraph::remove_node(int n) {
    nodes.erase(n);
    for (auto it = edges.begin(); it != edges.end();) {
        if (it->first == n || it->second == n)
            it = edges.erase(it);
        else
            ++it;
    }
}

bool HardwareGraph::has_edge(int a, int b) const {
    return edges.count({std::min(a, b), std::max(a, b)}) > 0;
}

std::vector<int> HardwareGraph::neighbors(int n) const {
    std::vector<int> out;
    for (const auto& [a, b] : edges) {
        if (a == n) out.push_back(b);
        else if (b == n) out.push_back(a);
    }
    return out;
}

int HardwareGraph::degree(int n) const { return static_cast<int>(neighbors(n).size()); }

HardwareGraph chimera_graph(int m, int n, int t) {
    if (m < 1 || n < 1 || t < 1) throw Error(Errc::invalid_input, "chimera needs m, n, t >= 1");
    HardwareGraph g;
    auto id = [&](int r, int c, int k) { return (r * n + c) * 2 * t + k; };
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < n; ++c) {
            for (int k1 = 0; k1 < t; ++k1)
                for (int k2 = t; k2 < 2 * t; ++k2) g.add_edge(id(r, c, k1), id(r, c, k2));
            if (r + 1 < m)
                for (int k = 0; k < t; ++k) g.add_edge(id(r, c, k), id(r + 1, c, k));
            if (c + 1 < n)
                for (int k = t; k < 2 * t; ++k) g.add_edge(id(r, c, k), id(r, c + 1, k));
        }
    return g;
}

SourceGraph SourceGraph::from_model(const QuadraticModel& model) {
    SourceGraph s;
    s.vars = model.variables();
    std::map<std::string, int> index;
    for (size_t i = 0; i < s.vars.size(); ++i) index[s.vars[i]] = static_cast<int>(i);
    for (const auto& [pair, j] : model.quadratic) {
        (void)j;
        int a = index.at(pair.first), b = index.at(pair.second);
        s.edges.insert({std::min(a, b), std::max(a, b)});
    }
    return s;
}

SourceGraph SourceGraph::from_edges(
    const std::vector<std::pair<std::string, std::string>>& edges) {
    SourceGraph s;
    std::map<std::string, int> index;
    auto intern = [&](const std::string& v) {
        auto [it, fresh] = index.emplace(v, static_cast<int>(s.vars.size()));
        if (fresh) s.vars.push_back(v);
        return it->second;
    };
    for (const auto& [u, v] : edges) {
        const int a = intern(u), b = intern(v);
        if (a == b) throw Error(Errc::invalid_input, "self-loop in source graph");
        s.edges.insert({std::min(a, b), std::max(a, b)});
    }
    return s;
}

EmbeddingReport validate_embedding(const SourceGraph& source, const HardwareGraph& target,
                                   const Embedding& emb) {
    EmbeddingReport rep;
    std::map<int, std::string> owner;

    for (const auto& var : source.vars) {
        auto it = emb.find(var);
        if (it == emb.end() || it->second.empty()) {
            rep.chains_connected = false;
            rep.violations.push_back("variable '" + var + "' has no chain");
            continue;
        }
        const auto& chain = it->second;
        const int len = static_cast<int>(chain.size());
        ++rep.chain_length_histogram[len];
        rep.max_chain_length = std::max(rep.max_chain_length, len);
        rep.min_chain_length = rep.min_chain_length == 0 ? len : std::min(rep.min_chain_length, len);

        for (int node : chain) {
            if (!target.nodes.count(node)) {
                rep.chains_connected = false;
                rep.violations.push_back("chain of '" + var + "' uses unknown node " +
                                         std::to_string(node));
            }
            auto [it2, fresh] = owner.emplace(node, var);
            if (!fresh) {
                rep.chains_disjoint = false;
                rep.violations.push_back("node " + std::to_string(node) + " shared by '" +
                                         it2->second + "' and '" + var + "'");
            }
        }

        // connectivity of the induced subgraph
        std::set<int> seen{chain.front()};
        std::deque<int> queue{chain.front()};
        const std::set<int> in_chain(chain.begin(), chain.end());
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            for (int v : target.neighbors(u))
                if (in_chain.count(v) && !seen.count(v)) {
                    seen.insert(v);
                    queue.push_back(v);
                }
        }
        if (seen.size() != in_chain.size()) {
            rep.chains_connected = false;
            rep.violations.push_back("chain of '" + var + "' is not connected");
        }
    }

    for (const auto& [ia, ib] : source.edges) {
        const auto& va = source.vars[static_cast<size_t>(ia)];
        const auto& vb = source.vars[static_cast<size_t>(ib)];
        auto ita = emb.find(va);
        auto itb = emb.find(vb);
        if (ita == emb.end() || itb == emb.end()) continue;
        bool covered = false;
        for (int na : ita->second) {
            for (int nb : itb->second)
                if (target.has_edge(na, nb)) {
                    covered = true;
                    break;
                }
            if (covered) break;
        }
        if (!covered) {
            rep.edges_covered = false;
            rep.violations.push_back("no edge between chains of '" + va + "' and '" + vb + "'");
        }
    }
    return rep;
}

namespace {

constexpr double kOverlapPenalty = 8.0;

struct ChainFinder {
    const HardwareGraph& target;
    std::vector<int> node_list;
    std::map<int, int> node_index;
    std::vector<std::vector<int>> adj;

    explicit ChainFinder(const HardwareGraph& g) : target(g) {
        node_list.assign(g.nodes.begin(), g.nodes.end());
        for (size_t i = 0; i < node_list.size(); ++i) node_index[node_list[i]] = static_cast<int>(i);
        adj.resize(node_list.size());
        for (size_t i = 0; i < node_list.size(); ++i)
            for (int nb : g.neighbors(node_list[i])) adj[i].push_back(node_index.at(nb));
    }

    // weighted multi-source shortest paths: cost of a path is the sum of
    // 1 + penalty*usage over its nodes, sources excluded
    void dijkstra(const std::set<int>& sources, const std::vector<double>& weight,
                  std::vector<double>& dist, std::vector<int>& parent) const {
        const size_t n = node_list.size();
        dist.assign(n, 1e300);
        parent.assign(n, -1);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        for (int s : sources) {
            const int si = node_index.at(s);
            dist[static_cast<size_t>(si)] = 0.0;
            parent[static_cast<size_t>(si)] = si;
            pq.push({0.0, si});
        }
        while (!pq.empty()) {
            auto [d, u] = pq.top();
            pq.pop();
            if (d > dist[static_cast<size_t>(u)]) continue;
            for (int v : adj[static_cast<size_t>(u)]) {
                const double nd = d + weight[static_cast<size_t>(v)];
                if (nd < dist[static_cast<size_t>(v)] - 1e-12) {
                    dist[static_cast<size_t>(v)] = nd;
                    parent[static_cast<size_t>(v)] = u;
                    pq.push({nd, v});
                }
            }
        }
    }
};

using Chains = std::vector<std::set<int>>;

std::set<int> grow_chain(const ChainFinder& cf, const std::vector<std::set<int>>& neighbor_chains,
                         const std::vector<int>& usage, Rng& rng) {
    const size_t n = cf.node_list.size();
    std::vector<double> weight(n);
    for (size_t i = 0; i < n; ++i)
        weight[i] = 1.0 + kOverlapPenalty * usage[i];

    if (neighbor_chains.empty()) {
        // fresh start: least-used node, seeded tie-break
        double best = 1e300;
        std::vector<int> ties;
        for (size_t i = 0; i < n; ++i) {
            if (weight[i] < best - 1e-12) {
                best = weight[i];
                ties.assign(1, static_cast<int>(i));
            } else if (weight[i] < best + 1e-12) {
                ties.push_back(static_cast<int>(i));
            }
        }
        return {cf.node_list[static_cast<size_t>(ties[static_cast<size_t>(rng.uniform_int(ties.size()))])]};
    }

    std::vector<std::vector<double>> dists;
    std::vector<std::vector<int>> parents;
    for (const auto& chain : neighbor_chains) {
        std::vector<double> d;
        std::vector<int> p;
        cf.dijkstra(chain, weight, d, p);
        dists.push_back(std::move(d));
        parents.push_back(std::move(p));
    }

    double best = 1e300;
    std::vector<int> ties;
    for (size_t i = 0; i < n; ++i) {
        double total = weight[i];
        for (const auto& d : dists) {
            if (d[i] >= 1e300) {
                total = 1e300;
                break;
            }
            total += d[i];
        }
        if (total >= 1e300) continue;
        if (total < best - 1e-9) {
            best = total;
            ties.assign(1, static_cast<int>(i));
        } else if (total < best + 1e-9) {
            ties.push_back(static_cast<int>(i));
        }
    }
    if (ties.empty()) return {};
    const int root = ties[static_cast<size_t>(rng.uniform_int(ties.size()))];

    std::set<int> chain{cf.node_list[static_cast<size_t>(root)]};
    for (size_t j = 0; j < dists.size(); ++j) {
        int cur = root;
        while (parents[j][static_cast<size_t>(cur)] != cur) {
            cur = parents[j][static_cast<size_t>(cur)];
            if (parents[j][static_cast<size_t>(cur)] == cur) break;  // stop before the source chain node
            chain.insert(cf.node_list[static_cast<size_t>(cur)]);
        }
    }
    return chain;
}

void shrink_chain(const ChainFinder& cf, std::set<int>& chain,
                  const std::vector<const std::set<int>*>& neighbor_chains) {
    auto connected_without = [&](int drop) {
        std::set<int> rest(chain);
        rest.erase(drop);
        if (rest.empty()) return false;
        std::set<int> seen{*rest.begin()};
        std::deque<int> queue{*rest.begin()};
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            for (int v : cf.target.neighbors(u))
                if (rest.count(v) && !seen.count(v)) {
                    seen.insert(v);
                    queue.push_back(v);
                }
        }
        return seen.size() == rest.size();
    };
    auto covers_all_without = [&](int drop) {
        for (const auto* nc : neighbor_chains) {
            bool covered = false;
            for (int a : chain) {
                if (a == drop) continue;
                for (int b : *nc)
                    if (cf.target.has_edge(a, b)) {
                        covered = true;
                        break;
                    }
                if (covered) break;
            }
            if (!covered) return false;
        }
        return true;
    };

    bool changed = true;
    while (changed && chain.size() > 1) {
        changed = false;
        std::vector<int> order(chain.rbegin(), chain.rend());
        for (int node : order) {
            if (chain.size() == 1) break;
            if (connected_without(node) && covers_all_without(node)) {
                chain.erase(node);
                changed = true;
            }
        }
    }
}

std::optional<Embedding> attempt_embedding(const SourceGraph& source, const ChainFinder& cf,
                                           Rng& rng) {
    const size_t ns = source.vars.size();
    const size_t nt = cf.node_list.size();
    if (ns == 0) return Embedding{};
    if (nt == 0) return std::nullopt;

    std::vector<std::vector<int>> src_adj(ns);
    for (const auto& [a, b] : source.edges) {
        src_adj[static_cast<size_t>(a)].push_back(b);
        src_adj[static_cast<size_t>(b)].push_back(a);
    }
    std::vector<int> order(ns);
    for (size_t i = 0; i < ns; ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return src_adj[static_cast<size_t>(a)].size() > src_adj[static_cast<size_t>(b)].size();
    });

    Chains chains(ns);
    std::vector<int> usage(nt, 0);
    auto add_usage = [&](const std::set<int>& chain, int delta) {
        for (int node : chain) usage[static_cast<size_t>(cf.node_index.at(node))] += delta;
    };

    auto rebuild = [&](int u) {
        std::vector<std::set<int>> neighbor_chains;
        for (int v : src_adj[static_cast<size_t>(u)])
            if (!chains[static_cast<size_t>(v)].empty()) neighbor_chains.push_back(chains[static_cast<size_t>(v)]);
        return grow_chain(cf, neighbor_chains, usage, rng);
    };

    for (int u : order) {
        std::set<int> chain = rebuild(u);
        if (chain.empty()) return std::nullopt;
        chains[static_cast<size_t>(u)] = chain;
        add_usage(chain, +1);
    }

    for (int sweep = 0; sweep < 3; ++sweep) {
        for (int u : order) {
            add_usage(chains[static_cast<size_t>(u)], -1);
            std::set<int> fresh = rebuild(u);
            if (fresh.empty()) {
                add_usage(chains[static_cast<size_t>(u)], +1);
                continue;
            }
            auto overlap_of = [&](const std::set<int>& chain) {
                int o = 0;
                for (int node : chain) o += usage[static_cast<size_t>(cf.node_index.at(node))] > 0 ? 1 : 0;
                return o;
            };
            const int old_overlap = overlap_of(chains[static_cast<size_t>(u)]);
            const int new_overlap = overlap_of(fresh);
            if (new_overlap < old_overlap ||
                (new_overlap == old_overlap && fresh.size() <= chains[static_cast<size_t>(u)].size()))
                chains[static_cast<size_t>(u)] = std::move(fresh);
            add_usage(chains[static_cast<size_t>(u)], +1);
        }
    }

    for (int c : usage)
        if (c > 1) return std::nullopt;

    // shrink chains while keeping connectivity and edge coverage
    for (int u = 0; u < static_cast<int>(ns); ++u) {
        std::vector<const std::set<int>*> ncs;
        for (int v : src_adj[static_cast<size_t>(u)]) ncs.push_back(&chains[static_cast<size_t>(v)]);
        shrink_chain(cf, chains[static_cast<size_t>(u)], ncs);
    }

    Embedding emb;
    for (size_t i = 0; i < ns; ++i)
        emb[source.vars[i]] = std::vector<int>(chains[i].begin(), chains[i].end());
    return emb;
}

}  // namespace

Embedding find_embedding(const SourceGraph& source, const HardwareGraph& target,
                         std::uint64_t seed, int tries) {
    if (tries < 1) throw Error(Errc::invalid_input, "tries must be >= 1");
    ChainFinder cf(target);
    for (int t = 0; t < tries; ++t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        auto emb = attempt_embedding(source, cf, rng);
        if (!emb) continue;
        if (validate_embedding(source, target, *emb).ok()) return *emb;
    }
    throw Error(Errc::embedding_not_found,
                "no embedding found after " + std::to_string(tries) + " tries", tries);
}

IsingModel embed_ising(const IsingModel& model, const Embedding& emb, const HardwareGraph& target,
                       double chain_strength) {
    if (!(chain_strength > 0))
        throw Error(Errc::invalid_input, "chain_strength must be > 0");
    const SourceGraph source = SourceGraph::from_model(model);
    const EmbeddingReport rep = validate_embedding(source, target, emb);
    if (!rep.ok())
        throw Error(Errc::invalid_embedding,
                    rep.violations.empty() ? "invalid embedding" : rep.violations.front());

    IsingModel phys(Vartype::spin);
    phys.offset = model.offset;
    auto node_var = [](int node) { return std::to_string(node); };

    for (const auto& [var, h] : model.linear) {
        const auto& chain = emb.at(var);
        for (int node : chain) phys.add_linear(node_var(node), h / static_cast<double>(chain.size()));
        // ferromagnetic tie on every intra-chain edge
        for (size_t i = 0; i < chain.size(); ++i)
            for (size_t j = i + 1; j < chain.size(); ++j)
                if (target.has_edge(chain[i], chain[j]))
                    phys.add_quadratic(node_var(chain[i]), node_var(chain[j]), -chain_strength);
    }

    for (const auto& [pair, j] : model.quadratic) {
        const auto& ca = emb.at(pair.first);
        const auto& cb = emb.at(pair.second);
        std::pair<int, int> best{-1, -1};
        for (int na : ca)
            for (int nb : cb)
                if (target.has_edge(na, nb)) {
                    std::pair<int, int> e{std::min(na, nb), std::max(na, nb)};
                    if (best.first < 0 || e < best) best = e;
                }
        phys.add_quadratic(node_var(best.first), node_var(best.second), j);
    }
    return phys;
}

double default_chain_strength(const IsingModel& model, const Embedding& emb) {
    double mx = 0;
    for (const auto& [v, h] : model.linear) mx = std::max(mx, std::abs(h));
    for (const auto& [p, j] : model.quadratic) mx = std::max(mx, std::abs(j));
    size_t longest = 1;
    for (const auto& [v, chain] : emb) longest = std::max(longest, chain.size());
    return std::max(1.0, 2.0 * mx * static_cast<double>(longest));
}

namespace {

Sample decode_record(const Sample& rec, const Embedding& emb, const IsingModel& logical,
                     Rng& rng) {
    Sample out;
    int broken = 0;
    for (const auto& [var, chain] : emb) {
        int up = 0;
        for (int node : chain) {
            auto it = rec.assignment.find(std::to_string(node));
            if (it == rec.assignment.end())
                throw Error(Errc::missing_physical_variable,
                            "sample misses node " + std::to_string(node));
            if (it->second == 1) ++up;
        }
        const int down = static_cast<int>(chain.size()) - up;
        int value;
        if (up > down)
            value = 1;
        else if (down > up)
            value = -1;
        else
            value = rng.coin() ? 1 : -1;
        if (up != 0 && down != 0) ++broken;
        out.assignment[var] = value;
    }
    out.energy = energy(logical, out.assignment);
    out.occurrences = rec.occurrences;
    out.chain_break_fraction =
        emb.empty() ? 0.0 : static_cast<double>(broken) / static_cast<double>(emb.size());
    return out;
}

}  // namespace

SampleSet unembed_samples(const SampleSet& samples, const Embedding& emb,
                          const IsingModel& logical, std::uint64_t tie_seed) {
    SampleSet out;
    out.records.reserve(samples.records.size());
    for (size_t i = 0; i < samples.records.size(); ++i) {
        Rng rng(derive_seed(tie_seed, i));
        out.records.push_back(decode_record(samples.records[i], emb, logical, rng));
    }
    return out;
}

QacEncoding qac_encode(const IsingModel& model, int n, double gamma) {
    if (n < 1 || n % 2 == 0) throw Error(Errc::even_n, "the repetition factor must be odd");
    if (!(gamma > 0)) throw Error(Errc::non_positive_gamma, "gamma must be > 0");

    QacEncoding enc;
    enc.n = n;
    enc.gamma = gamma;
    enc.logical_vars = model.variables();
    for (const auto& v : enc.logical_vars)
        if (v.find('@') != std::string::npos)
            throw Error(Errc::invalid_variable_name, "'" + v + "': '@' is reserved for copies");
    IsingModel& out = enc.encoded;
    out.vartype = Vartype::spin;
    out.offset = model.offset;

    for (const auto& [var, h] : model.linear) {
        for (int l = 0; l < n; ++l) out.add_linear(enc.copy_name(var, l), h);
        for (int l = 0; l < n; ++l)
            out.add_quadratic(enc.copy_name(var, l), enc.penalty_name(var), -gamma);
    }
    for (const auto& [pair, j] : model.quadratic)
        for (int l = 0; l < n; ++l)
            out.add_quadratic(enc.copy_name(pair.first, l), enc.copy_name(pair.second, l), j);
    return enc;
}

SampleSet qac_decode(const SampleSet& samples, const QacEncoding& enc, const IsingModel& logical) {
    SampleSet out;
    out.records.reserve(samples.records.size());
    for (const Sample& rec : samples.records) {
        Sample dec;
        int broken = 0;
        for (const auto& var : enc.logical_vars) {
            int up = 0;
            for (int l = 0; l < enc.n; ++l) {
                auto it = rec.assignment.find(enc.copy_name(var, l));
                if (it == rec.assignment.end())
                    throw Error(Errc::missing_physical_variable,
                                "sample misses copy " + enc.copy_name(var, l));
                if (it->second == 1) ++up;
            }
            dec.assignment[var] = (2 * up > enc.n) ? 1 : -1;
            if (up != 0 && up != enc.n) ++broken;
        }
        dec.energy = energy(logical, dec.assignment);
        dec.occurrences = rec.occurrences;
        dec.chain_break_fraction =
            enc.logical_vars.empty()
                ? 0.0
                : static_cast<double>(broken) / static_cast<double>(enc.logical_vars.size());
        out.records.push_back(std::move(dec));
    }
    return out;
}

ClonedProblem clone_problem(const IsingModel& model, const HardwareGraph& target,
                            const Embedding& emb, int k, double chain_strength,
                            std::uint64_t seed) {
    if (k < 1) throw Error(Errc::invalid_input, "k must be >= 1");
    const SourceGraph source = SourceGraph::from_model(model);
    if (!validate_embedding(source, target, emb).ok())
        throw Error(Errc::invalid_embedding, "seed embedding is invalid");

    ClonedProblem out;
    HardwareGraph remaining = target;
    auto block_replica = [&](const Embedding& replica) {
        std::set<int> to_remove;
        for (const auto& [var, chain] : replica)
            for (int node : chain) {
                to_remove.insert(node);
                for (int nb : target.neighbors(node)) to_remove.insert(nb);
            }
        for (int node : to_remove) remaining.remove_node(node);
    };

    out.replicas.push_back(emb);
    block_replica(emb);
    for (int r = 1; r < k; ++r) {
        Embedding next;
        try {
            next = find_embedding(source, remaining, derive_seed(seed, static_cast<std::uint64_t>(r)));
        } catch (const Error& e) {
            if (e.code() != Errc::embedding_not_found) throw;
            throw Error(Errc::insufficient_room,
                        "only " + std::to_string(r) + " of " + std::to_string(k) +
                            " replicas fit",
                        r);
        }
        out.replicas.push_back(next);
        block_replica(next);
    }

    IsingModel combined(Vartype::spin);
    for (const Embedding& replica : out.replicas) {
        IsingModel phys = embed_ising(model, replica, target, chain_strength);
        combined.offset += phys.offset;
        for (const auto& [v, h] : phys.linear) combined.add_linear(v, h);
        for (const auto& [p, j] : phys.quadratic) combined.add_quadratic(p.first, p.second, j);
    }
    out.physical = std::move(combined);
    return out;
}

SampleSet unembed_clones(const SampleSet& samples, const std::vector<Embedding>& replicas,
                         const IsingModel& logical, std::uint64_t tie_seed) {
    SampleSet out;
    for (size_t i = 0; i < samples.records.size(); ++i) {
        for (size_t r = 0; r < replicas.size(); ++r) {
            Rng rng(derive_seed(tie_seed, i * replicas.size() + r));
            out.records.push_back(decode_record(samples.records[i], replicas[r], logical, rng));
        }
    }
    return out;
}

}  // namespace qct
