#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qct/embed.hpp"
#include "qct/error.hpp"
#include "qct/rng.hpp"

using namespace qct;

namespace {

SourceGraph triangle() {
    return SourceGraph::from_edges({{"1", "2"}, {"2", "3"}, {"1", "3"}});
}

HardwareGraph square() {
    HardwareGraph g;
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(2, 3);
    g.add_edge(3, 0);
    return g;
}

IsingModel triangle_model(double j = 1.0) {
    IsingModel m(Vartype::spin);
    m.add_quadratic("1", "2", j);
    m.add_quadratic("2", "3", j);
    m.add_quadratic("1", "3", j);
    return m;
}

int count_two_chains(const Embedding& emb) {
    int n = 0;
    for (const auto& [v, chain] : emb) n += chain.size() == 2 ? 1 : 0;
    return n;
}

}  // namespace

TEST_CASE("chimera cell counts") {
    HardwareGraph c114 = chimera_graph(1, 1, 4);
    CHECK(c114.nodes.size() == 8);
    CHECK(c114.edges.size() == 16);

    HardwareGraph c214 = chimera_graph(2, 1, 4);
    CHECK(c214.nodes.size() == 16);
    CHECK(c214.edges.size() == 36);  // 2 cells x 16 + 4 vertical links
    int degree5 = 0;
    for (int node : c214.nodes) degree5 += c214.degree(node) == 5 ? 1 : 0;
    CHECK(degree5 == 8);  // the 4 linked qubits of each cell

    HardwareGraph c334 = chimera_graph(3, 3, 4);
    int max_degree = 0;
    for (int node : c334.nodes) max_degree = std::max(max_degree, c334.degree(node));
    CHECK(max_degree == 6);
}

TEST_CASE("triangle into the square uses exactly one 2-chain") {
    Embedding emb = find_embedding(triangle(), square(), 0);
    EmbeddingReport rep = validate_embedding(triangle(), square(), emb);
    CHECK(rep.ok());
    CHECK(rep.max_chain_length == 2);
    CHECK(count_two_chains(emb) == 1);
}

TEST_CASE("triangle into a bipartite cell: one 2-chain spanning the shores") {
    HardwareGraph cell = chimera_graph(1, 1, 4);
    Embedding emb = find_embedding(triangle(), cell, 1);
    EmbeddingReport rep = validate_embedding(triangle(), cell, emb);
    CHECK(rep.ok());
    CHECK(rep.max_chain_length == 2);
    CHECK(count_two_chains(emb) == 1);
    for (const auto& [var, chain] : emb) {
        if (chain.size() == 2) {
            const bool shore0 = chain[0] < 4, shore1 = chain[1] < 4;
            CHECK(shore0 != shore1);
        }
    }
}

TEST_CASE("subgraph sources embed with unit chains") {
    HardwareGraph k4;
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) k4.add_edge(a, b);
    Embedding emb = find_embedding(triangle(), k4, 3);
    EmbeddingReport rep = validate_embedding(triangle(), k4, emb);
    CHECK(rep.ok());
    CHECK(rep.max_chain_length == 1);
}

TEST_CASE("embedding is deterministic per seed") {
    HardwareGraph target = chimera_graph(2, 2, 4);
    SourceGraph k5 = SourceGraph::from_edges({{"a", "b"}, {"a", "c"}, {"a", "d"}, {"a", "e"},
                                              {"b", "c"}, {"b", "d"}, {"b", "e"}, {"c", "d"},
                                              {"c", "e"}, {"d", "e"}});
    Embedding e1 = find_embedding(k5, target, 42);
    Embedding e2 = find_embedding(k5, target, 42);
    CHECK(e1 == e2);
    CHECK(validate_embedding(k5, target, e1).ok());
}

TEST_CASE("validator flags violations") {
    SourceGraph tri = triangle();
    HardwareGraph sq = square();

    Embedding overlapping{{"1", {0, 1}}, {"2", {1}}, {"3", {2, 3}}};
    EmbeddingReport r1 = validate_embedding(tri, sq, overlapping);
    CHECK_FALSE(r1.chains_disjoint);

    Embedding uncovered{{"1", {0}}, {"2", {1}}, {"3", {2}}};
    EmbeddingReport r2 = validate_embedding(tri, sq, uncovered);
    CHECK_FALSE(r2.edges_covered);  // edge 1-3 has no 0-2 link on the square

    Embedding disconnected{{"1", {0, 2}}, {"2", {1}}, {"3", {3}}};
    EmbeddingReport r3 = validate_embedding(tri, sq, disconnected);
    CHECK_FALSE(r3.chains_connected);
}

TEST_CASE("embedding a model splits biases and ties chains") {
    IsingModel m = triangle_model(1.0);
    m.add_linear("1", 1.0);
    HardwareGraph sq = square();
    Embedding emb{{"1", {0, 3}}, {"2", {1}}, {"3", {2}}};
    REQUIRE(validate_embedding(SourceGraph::from_model(m), sq, emb).ok());

    IsingModel phys = embed_ising(m, emb, sq, 4.0);
    CHECK(phys.linear.at("0") == doctest::Approx(0.5));
    CHECK(phys.linear.at("3") == doctest::Approx(0.5));
    CHECK(phys.quadratic.at({"0", "3"}) == doctest::Approx(-4.0));
    // logical couplings each land on exactly one physical edge
    CHECK(phys.quadratic.at({"0", "1"}) == doctest::Approx(1.0));  // 1-2
    CHECK(phys.quadratic.at({"1", "2"}) == doctest::Approx(1.0));  // 2-3
    CHECK(phys.quadratic.at({"2", "3"}) == doctest::Approx(1.0));  // 1-3 via nodes 2,3
}

TEST_CASE("unit chains reproduce the logical model") {
    IsingModel m = triangle_model(0.7);
    m.add_linear("2", -0.3);
    HardwareGraph k4;
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) k4.add_edge(a, b);
    Embedding emb{{"1", {0}}, {"2", {1}}, {"3", {2}}};
    IsingModel phys = embed_ising(m, emb, k4, 2.0);
    CHECK(phys.linear.at("1") == doctest::Approx(-0.3));
    CHECK(phys.quadratic.size() == 3);
    GroundSet gl = brute_force_solve(m);
    GroundSet gp = brute_force_solve(phys);
    CHECK(gp.energy == doctest::Approx(gl.energy).epsilon(1e-12));
}

TEST_CASE("strong chains keep ground states aligned and projectable") {
    Rng rng(97);
    HardwareGraph target = chimera_graph(2, 2, 4);
    for (int rep = 0; rep < 15; ++rep) {
        IsingModel m(Vartype::spin);
        const int nv = 3 + static_cast<int>(rng.uniform_int(2));
        for (int i = 0; i < nv; ++i)
            for (int j = i + 1; j < nv; ++j)
                if (rng.uniform() < 0.8)
                    m.add_quadratic("v" + std::to_string(i), "v" + std::to_string(j),
                                    std::round((2 * rng.uniform() - 1) * 4) / 4);
        for (int i = 0; i < nv; ++i)
            m.add_linear("v" + std::to_string(i), std::round((2 * rng.uniform() - 1) * 4) / 4);

        Embedding emb = find_embedding(SourceGraph::from_model(m), target, derive_seed(7, static_cast<std::uint64_t>(rep)));
        double sum_abs = 0;
        for (const auto& [v, h] : m.linear) sum_abs += std::abs(h);
        for (const auto& [p, j] : m.quadratic) sum_abs += std::abs(j);
        const double strength = 2 * sum_abs + 1;
        IsingModel phys = embed_ising(m, emb, target, strength);
        if (phys.num_variables() > 16) continue;

        GroundSet gp = brute_force_solve(phys);
        GroundSet gl = brute_force_solve(m);
        for (const auto& pa : gp.assignments) {
            Assignment logical;
            for (const auto& [var, chain] : emb) {
                const int first = pa.at(std::to_string(chain.front()));
                for (int node : chain) CHECK(pa.at(std::to_string(node)) == first);
                logical[var] = first;
            }
            CHECK(energy(m, logical) == doctest::Approx(gl.energy).epsilon(1e-9));
        }
    }
}

TEST_CASE("majority vote decoding") {
    IsingModel m(Vartype::spin);
    m.add_linear("a", 1.0);
    m.add_variable("b");
    Embedding emb{{"a", {0, 1, 2}}, {"b", {3}}};

    SampleSet phys;
    Sample rec;
    rec.assignment = {{"0", 1}, {"1", 1}, {"2", -1}, {"3", -1}};
    rec.occurrences = 2;
    phys.records.push_back(rec);

    SampleSet logical = unembed_samples(phys, emb, m, 5);
    REQUIRE(logical.records.size() == 1);
    CHECK(logical.records[0].assignment.at("a") == 1);
    CHECK(logical.records[0].assignment.at("b") == -1);
    CHECK(logical.records[0].chain_break_fraction == doctest::Approx(0.5));
    CHECK(logical.records[0].occurrences == 2);
    CHECK(logical.records[0].energy == doctest::Approx(energy(m, logical.records[0].assignment)));

    // unanimous chains: zero break fraction, values copied
    Sample all_up;
    all_up.assignment = {{"0", 1}, {"1", 1}, {"2", 1}, {"3", 1}};
    SampleSet unan;
    unan.records.push_back(all_up);
    SampleSet dec = unembed_samples(unan, emb, m, 5);
    CHECK(dec.records[0].chain_break_fraction == 0.0);
    CHECK(dec.records[0].assignment.at("a") == 1);

    // ties resolve deterministically under a fixed seed
    Embedding even{{"a", {0, 1}}, {"b", {2}}};
    Sample tied;
    tied.assignment = {{"0", 1}, {"1", -1}, {"2", 1}};
    SampleSet tied_set;
    tied_set.records.push_back(tied);
    SampleSet d1 = unembed_samples(tied_set, even, m, 11);
    SampleSet d2 = unembed_samples(tied_set, even, m, 11);
    CHECK(d1.records[0].assignment.at("a") == d2.records[0].assignment.at("a"));

    SampleSet missing;
    Sample bad;
    bad.assignment = {{"0", 1}};
    missing.records.push_back(bad);
    CHECK_THROWS_AS(unembed_samples(missing, even, m, 1), Error);
}

TEST_CASE("repetition encoding structure and energy scale") {
    IsingModel m(Vartype::spin);
    m.add_linear("a", 1.0);
    m.add_quadratic("a", "b", -0.5);

    CHECK_THROWS_AS(qac_encode(m, 2, 1.0), Error);
    CHECK_THROWS_AS(qac_encode(m, 3, 0.0), Error);

    QacEncoding enc = qac_encode(m, 3, 2.0);
    CHECK(enc.encoded.num_variables() == 8);  // 3 copies x 2 + 2 penalty qubits
    CHECK(enc.encoded.linear.at("a@0") == 1.0);
    CHECK(enc.encoded.quadratic.at({"a@0", "a@P"}) == -2.0);
    CHECK(enc.encoded.quadratic.at({"a@1", "b@1"}) == -0.5);

    // all-aligned sector: energies scale by n up to the constant penalty floor
    GroundSet gl = brute_force_solve(m);
    for (const auto& la : gl.assignments) {
        Assignment phys;
        for (const auto& [var, val] : la) {
            for (int l = 0; l < 3; ++l) phys[enc.copy_name(var, l)] = val;
            phys[enc.penalty_name(var)] = val;
        }
        const double floor = -2.0 * 3 * 2;  // -gamma * n per variable
        CHECK(energy(enc.encoded, phys) == doctest::Approx(3 * gl.energy + floor).epsilon(1e-9));
    }
}

TEST_CASE("single-variable encoded ground state is fully aligned") {
    IsingModel m(Vartype::spin);
    m.add_linear("a", 1.0);
    QacEncoding enc = qac_encode(m, 3, 1.5);
    GroundSet g = brute_force_solve(enc.encoded);
    REQUIRE(g.assignments.size() == 1);
    for (const auto& [v, val] : g.assignments[0]) CHECK(val == -1);
}

TEST_CASE("repetition decoding tolerates one flip, fails at two") {
    IsingModel m(Vartype::spin);
    m.add_linear("a", -1.0);
    QacEncoding enc = qac_encode(m, 3, 1.0);

    auto make_sample = [&](int flips) {
        Sample s;
        s.assignment[enc.penalty_name("a")] = 1;
        for (int l = 0; l < 3; ++l) s.assignment[enc.copy_name("a", l)] = l < flips ? -1 : 1;
        return s;
    };

    for (int flips : {0, 1}) {
        SampleSet in;
        in.records.push_back(make_sample(flips));
        SampleSet dec = qac_decode(in, enc, m);
        CHECK(dec.records[0].assignment.at("a") == 1);
    }
    SampleSet in;
    in.records.push_back(make_sample(2));
    SampleSet dec = qac_decode(in, enc, m);
    CHECK(dec.records[0].assignment.at("a") == -1);  // beyond n/2 flips decodes wrong
}

TEST_CASE("cloning produces disjoint non-adjacent replicas") {
    IsingModel m(Vartype::spin);
    m.add_quadratic("a", "b", -1.0);
    HardwareGraph target = chimera_graph(2, 1, 4);
    SourceGraph src = SourceGraph::from_model(m);
    Embedding emb = find_embedding(src, target, 2);

    ClonedProblem cloned = clone_problem(m, target, emb, 2, 2.0, 9);
    REQUIRE(cloned.replicas.size() == 2);
    std::set<int> first_nodes, second_nodes;
    for (const auto& [v, chain] : cloned.replicas[0]) first_nodes.insert(chain.begin(), chain.end());
    for (const auto& [v, chain] : cloned.replicas[1]) second_nodes.insert(chain.begin(), chain.end());
    for (int a : first_nodes) {
        CHECK(second_nodes.count(a) == 0);
        for (int b : second_nodes) CHECK_FALSE(target.has_edge(a, b));
    }

    // pooled decoding yields one logical record per replica per sample
    GroundSet gp = brute_force_solve(cloned.physical);
    SampleSet phys;
    Sample s;
    s.assignment = gp.assignments.front();
    phys.records.push_back(s);
    SampleSet pooled = unembed_clones(phys, cloned.replicas, m, 3);
    CHECK(pooled.records.size() == 2);
    GroundSet gl = brute_force_solve(m);
    for (const auto& r : pooled.records) CHECK(r.energy == doctest::Approx(gl.energy));

    // k = 1 equals a plain embedding
    ClonedProblem single = clone_problem(m, target, emb, 1, 2.0, 9);
    IsingModel direct = embed_ising(m, emb, target, 2.0);
    CHECK(single.physical.linear == direct.linear);
    CHECK(single.physical.quadratic == direct.quadratic);

    // far beyond capacity: the error carries the achievable count
    try {
        clone_problem(m, target, emb, 50, 2.0, 9);
        FAIL("expected insufficient_room");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::insufficient_room);
        CHECK(e.detail() >= 1);
        CHECK(e.detail() < 50);
    }
}
