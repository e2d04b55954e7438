#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qct/error.hpp"
#include "qct/rng.hpp"
#include "qct/route.hpp"

using namespace qct;

namespace {

CouplingGraph path_graph(int n, EdgeKind kind = EdgeKind::sym) {
    CouplingGraph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1, kind);
    return g;
}

CouplingGraph star_graph(int leaves) {
    CouplingGraph g(leaves + 1);
    for (int i = 1; i <= leaves; ++i) g.add_edge(0, i, EdgeKind::sym);
    return g;
}

CouplingGraph grid_graph(int rows, int cols) {
    CouplingGraph g(rows * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) g.add_edge(r * cols + c, r * cols + c + 1, EdgeKind::sym);
            if (r + 1 < rows) g.add_edge(r * cols + c, (r + 1) * cols + c, EdgeKind::sym);
        }
    return g;
}

Circuit random_two_qubit_circuit(int n, int gates, Rng& rng) {
    Circuit c(n);
    for (int i = 0; i < gates; ++i) {
        const double roll = rng.uniform();
        if (roll < 0.35) {
            c.append(Gate(GateKind::u3, {static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)))},
                          {rng.uniform() * 3, rng.uniform() * 3, rng.uniform() * 3}));
            continue;
        }
        int a = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
        int b;
        do {
            b = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
        } while (b == a);
        c.append(Gate(roll < 0.8 ? GateKind::cx : GateKind::cz, {a, b}));
    }
    return c;
}

}  // namespace

TEST_CASE("trivial layout is the identity map") {
    Circuit c(3);
    CouplingGraph g = path_graph(5);
    Layout l = choose_layout(c, g, LayoutStrategy::trivial, 1);
    for (int v = 0; v < 3; ++v) CHECK(l.physical(v) == v);

    Circuit too_big(6);
    CHECK_THROWS_AS(choose_layout(too_big, g, LayoutStrategy::trivial, 1), Error);
}

TEST_CASE("dense layout picks adjacent pairs and star hubs") {
    Circuit two(2);
    CouplingGraph g = path_graph(5);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Layout l = choose_layout(two, g, LayoutStrategy::dense, seed);
        CHECK(g.has_link(l.physical(0), l.physical(1)));
    }

    Circuit three(3);
    CouplingGraph star = star_graph(4);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Layout l = choose_layout(three, star, LayoutStrategy::dense, seed);
        bool hub = false;
        for (int v = 0; v < 3; ++v) hub |= (l.physical(v) == 0);
        CHECK(hub);
    }
}

TEST_CASE("cascade leaves compliant circuits unchanged") {
    Circuit c(3);
    c.append(Gate(GateKind::h, {0}));
    c.append(Gate(GateKind::cx, {0, 1}));
    c.append(Gate(GateKind::cx, {1, 2}));
    CouplingGraph g = path_graph(3);
    Circuit routed = route_cascade(c, g, Layout::identity(3));
    CHECK(routed.gates.size() == c.gates.size());
    CHECK(count_swaps(routed) == 0);
}

TEST_CASE("cascade inserts swap sandwich along the shortest path") {
    Circuit c(3);
    c.append(Gate(GateKind::cx, {0, 2}));
    CouplingGraph g = path_graph(3);
    Circuit routed = route_cascade(c, g, Layout::identity(3));
    REQUIRE(routed.gates.size() == 3);
    CHECK(routed.gates[0].kind == GateKind::swap);
    CHECK(routed.gates[0].qubits == std::vector<int>{0, 1});
    CHECK(routed.gates[1].kind == GateKind::cx);
    CHECK(routed.gates[1].qubits == std::vector<int>{1, 2});
    CHECK(routed.gates[2].kind == GateKind::swap);
    CHECK(routed.gates[2].qubits == std::vector<int>{0, 1});
    CHECK(verify_routed(c, routed, Layout::identity(3), Layout::identity(3)));
}

TEST_CASE("cascade output matches the original unitary") {
    Rng rng(19);
    CouplingGraph g = path_graph(5);
    for (int i = 0; i < 25; ++i) {
        Circuit c = random_two_qubit_circuit(5, 12, rng);
        Circuit routed = route_cascade(c, g, Layout::identity(5));
        for (const Gate& gate : routed.gates)
            if (gate.arity() == 2) CHECK(g.has_link(gate.qubits[0], gate.qubits[1]));
        CHECK(verify_routed(c, routed, Layout::identity(5), Layout::identity(5)));
    }
}

TEST_CASE("lookahead adds no swap on compliant input") {
    Circuit c(3);
    c.append(Gate(GateKind::cx, {0, 1}));
    c.append(Gate(GateKind::cx, {1, 2}));
    CouplingGraph g = path_graph(3);
    auto routed = route_lookahead(c, g, Layout::identity(3), 4, 7);
    CHECK(routed.swaps_added == 0);
    CHECK(count_swaps(routed.circuit) == 0);
}

TEST_CASE("lookahead avoids the swap-back on repeated far gates") {
    Circuit c(3);
    c.append(Gate(GateKind::cx, {0, 2}));
    c.append(Gate(GateKind::cx, {0, 2}));
    CouplingGraph g = path_graph(3);
    const Circuit cascade = route_cascade(c, g, Layout::identity(3));
    CHECK(count_swaps(cascade) == 4);
    auto routed = route_lookahead(c, g, Layout::identity(3), 4, 7);
    CHECK(routed.swaps_added == 1);
    CHECK(verify_routed(c, routed.circuit, Layout::identity(3), routed.final_layout));
}

TEST_CASE("lookahead routes random circuits correctly with fewer-or-equal swaps") {
    Rng rng(77);
    const CouplingGraph graphs[] = {path_graph(5), star_graph(4), grid_graph(2, 3)};
    for (const auto& g : graphs) {
        for (int i = 0; i < 20; ++i) {
            Circuit c = random_two_qubit_circuit(std::min(5, g.num_nodes), 14, rng);
            Layout l = Layout::identity(c.num_qubits);
            Circuit cascade = route_cascade(c, g, l);
            auto routed = route_lookahead(c, g, l, 3, derive_seed(5, static_cast<std::uint64_t>(i)));
            CHECK(routed.swaps_added <= count_swaps(cascade));
            for (const Gate& gate : routed.circuit.gates)
                if (gate.arity() == 2) CHECK(g.has_link(gate.qubits[0], gate.qubits[1]));
            CHECK(verify_routed(c, routed.circuit, l, routed.final_layout));
        }
    }
}

TEST_CASE("fix_directions rewrites unavailable cx directions") {
    CouplingGraph g(2);
    g.add_edge(1, 0, EdgeKind::uni);  // only control 1 -> target 0

    Circuit ok(2);
    ok.append(Gate(GateKind::cx, {1, 0}));
    CHECK(fix_directions(ok, g).gates.size() == 1);

    Circuit flipped(2);
    flipped.append(Gate(GateKind::cx, {0, 1}));
    Circuit fixed = fix_directions(flipped, g);
    REQUIRE(fixed.gates.size() == 5);
    CHECK(fixed.gates[2].kind == GateKind::cx);
    CHECK(fixed.gates[2].qubits == std::vector<int>{1, 0});
    CHECK(distance(compose_unitary(flipped).m, compose_unitary(fixed).m) < 1e-10);

    // cz rides on the symmetric operator regardless of listing order
    Circuit cz1(2), cz2(2);
    cz1.append(Gate(GateKind::cz, {0, 1}));
    cz2.append(Gate(GateKind::cz, {1, 0}));
    CHECK(fix_directions(cz1, g).gates.size() == 1);
    CHECK(fix_directions(cz2, g).gates.size() == 1);

    CouplingGraph disconnected(3);
    disconnected.add_edge(0, 1, EdgeKind::sym);
    Circuit far(3);
    far.append(Gate(GateKind::cx, {0, 2}));
    CHECK_THROWS_AS(fix_directions(far, disconnected), Error);
}

TEST_CASE("directed path end to end") {
    // all edges only point low -> high; routing then direction fixing
    Rng rng(3);
    CouplingGraph g = path_graph(4, EdgeKind::uni);
    for (int i = 0; i < 10; ++i) {
        Circuit c = random_two_qubit_circuit(4, 10, rng);
        Circuit routed = route_cascade(c, g, Layout::identity(4));
        Circuit fixed = fix_directions(routed, g);
        for (const Gate& gate : fixed.gates)
            if (gate.kind == GateKind::cx) CHECK(g.has_direction(gate.qubits[0], gate.qubits[1]));
        CHECK(verify_routed(c, fixed, Layout::identity(4), Layout::identity(4)));
    }
}

TEST_CASE("verify_routed detects a missing swap") {
    Circuit c(3);
    c.append(Gate(GateKind::cx, {0, 2}));
    CouplingGraph g = path_graph(3);
    Circuit routed = route_cascade(c, g, Layout::identity(3));
    Circuit broken(3);
    broken.append(routed.gates[0]);
    broken.append(routed.gates[1]);  // drop the swap-back
    CHECK_FALSE(verify_routed(c, broken, Layout::identity(3), Layout::identity(3)));
}

TEST_CASE("verify_routed identity case") {
    Rng rng(4);
    Circuit c = random_two_qubit_circuit(4, 8, rng);
    CHECK(verify_routed(c, c, Layout::identity(4), Layout::identity(4)));
}

TEST_CASE("disconnected regions are reported") {
    CouplingGraph g(4);
    g.add_edge(0, 1, EdgeKind::sym);
    g.add_edge(2, 3, EdgeKind::sym);
    Circuit c(4);
    c.append(Gate(GateKind::cx, {0, 3}));
    CHECK_THROWS_AS(route_cascade(c, g, Layout::identity(4)), Error);
    try {
        route_cascade(c, g, Layout::identity(4));
    } catch (const Error& e) {
        CHECK(e.code() == Errc::disconnected_region);
    }
}
