#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qct/error.hpp"
#include "qct/rng.hpp"
#include "qct/synth.hpp"

using namespace qct;

namespace {

Mat product_of_factors(const std::vector<TwoLevelFactor>& fs, int dim) {
    Mat m = Mat::Identity(dim, dim);
    for (const auto& f : fs) m = m * f.expanded();
    return m;
}

int count_cx(const Circuit& c) {
    int n = 0;
    for (const Gate& g : c.gates)
        if (g.kind == GateKind::cx) ++n;
    return n;
}

int count_1q(const Circuit& c) {
    int n = 0;
    for (const Gate& g : c.gates)
        if (g.arity() == 1) ++n;
    return n;
}

}  // namespace

TEST_CASE("two-level splitting of a 2x2 input returns the input") {
    Mat h(2, 2);
    const double r = 1 / std::sqrt(2.0);
    h << r, r, r, -r;
    auto fs = two_level_decompose(h);
    REQUIRE(fs.size() == 1);
    CHECK(fs[0].i == 0);
    CHECK(fs[0].j == 1);
    CHECK((fs[0].block - h).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("two-level splitting of diag(1,1,1,-1)") {
    Mat d = Mat::Identity(4, 4);
    d(3, 3) = -1;
    auto fs = two_level_decompose(d);
    REQUIRE(fs.size() == 1);
    CHECK(fs[0].i == 2);
    CHECK(fs[0].j == 3);
    CHECK((fs[0].expanded() - d).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("two-level splitting reconstructs random unitaries") {
    Rng rng(11);
    for (int dim : {2, 4, 8, 16}) {
        for (int rep = 0; rep < 10; ++rep) {
            Mat u = random_special_unitary(dim, rng);
            auto fs = two_level_decompose(u);
            CHECK(static_cast<int>(fs.size()) <= dim * (dim - 1) / 2);
            CHECK((product_of_factors(fs, dim) - u).cwiseAbs().maxCoeff() < 1e-9);
            for (const auto& f : fs) CHECK(is_unitary(f.expanded(), 1e-9));
        }
    }
    CHECK_THROWS_AS(two_level_decompose(Mat::Identity(4, 4) * 2.0), Error);
}

TEST_CASE("two-level factor count stays within the bound on diagonal inputs") {
    Rng rng(13);
    for (int rep = 0; rep < 5; ++rep) {
        Vec d(8);
        for (int k = 0; k < 8; ++k) d(k) = std::polar(1.0, rng.uniform() * 2 * kPi);
        Mat u = d.asDiagonal();
        auto fs = two_level_decompose(u);
        CHECK(static_cast<int>(fs.size()) <= 8 * 7 / 2);
        CHECK((product_of_factors(fs, 8) - u).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("two-level factor to multi-controlled circuit") {
    Rng rng(17);

    // dim 2: plain single-qubit gate, no controls
    TwoLevelFactor f2{2, 0, 1, random_special_unitary(2, rng)};
    Circuit c2 = two_level_to_multicontrolled(f2, 1);
    REQUIRE(c2.gates.size() == 1);
    CHECK(c2.gates[0].arity() == 1);
    CHECK(distance(compose_unitary(c2).m, f2.expanded()) < 1e-9);

    // adjacent states 6,7: one doubly-controlled gate, no x wrappers
    TwoLevelFactor f67{8, 6, 7, random_special_unitary(2, rng)};
    Circuit c67 = two_level_to_multicontrolled(f67, 3);
    REQUIRE(c67.gates.size() == 1);
    CHECK(c67.gates[0].kind == GateKind::custom);
    CHECK(c67.gates[0].qubits == std::vector<int>{0, 1, 2});
    CHECK((compose_unitary(c67).m - f67.expanded()).cwiseAbs().maxCoeff() < 1e-9);

    // far pair 0,7 needs the gray-code chain
    TwoLevelFactor f07{8, 0, 7, random_special_unitary(2, rng)};
    Circuit c07 = two_level_to_multicontrolled(f07, 3);
    CHECK(c07.gates.size() > 1);
    CHECK((compose_unitary(c07).m - f07.expanded()).cwiseAbs().maxCoeff() < 1e-9);

    CHECK_THROWS_AS(two_level_to_multicontrolled(f07, 2), Error);
}

TEST_CASE("two-level to multi-controlled on random factors") {
    Rng rng(23);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 2 + static_cast<int>(rng.uniform_int(2));
        const int dim = 1 << n;
        int i = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(dim)));
        int j;
        do {
            j = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(dim)));
        } while (j == i);
        TwoLevelFactor f{dim, std::min(i, j), std::max(i, j), random_special_unitary(2, rng)};
        Circuit c = two_level_to_multicontrolled(f, n);
        CHECK((compose_unitary(c).m - f.expanded()).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("multi-controlled square-root ladder") {
    Rng rng(29);

    Circuit c0 = multicontrolled_to_cnot(pauli_z(), 0);
    REQUIRE(c0.gates.size() == 1);
    CHECK((compose_unitary(c0).m - pauli_z()).cwiseAbs().maxCoeff() < 1e-12);

    // Toffoli via controlled sqrt(X)
    Circuit toffoli = multicontrolled_to_cnot(pauli_x(), 2);
    CHECK((compose_unitary(toffoli).m - make_controlled(pauli_x(), 2)).cwiseAbs().maxCoeff() <
          1e-9);
    bool has_controlled_v = false;
    for (const Gate& g : toffoli.gates)
        has_controlled_v |= (g.kind == GateKind::custom && g.arity() == 2);
    CHECK(has_controlled_v);

    // C^3-Z
    Circuit c3z = multicontrolled_to_cnot(pauli_z(), 3);
    CHECK((compose_unitary(c3z).m - make_controlled(pauli_z(), 3)).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(metrics(c3z).two_qubit_count > 0);

    for (int rep = 0; rep < 10; ++rep) {
        const int n_controls = 1 + static_cast<int>(rng.uniform_int(3));
        Mat u2 = random_special_unitary(2, rng);
        Circuit c = multicontrolled_to_cnot(u2, n_controls);
        CHECK((compose_unitary(c).m - make_controlled(u2, n_controls)).cwiseAbs().maxCoeff() <
              1e-9);
        for (const Gate& g : c.gates) CHECK(g.arity() <= 2);
    }
}

TEST_CASE("controlled single-qubit gate via two cx") {
    Rng rng(31);

    Circuit cx_case = controlled_u_to_basic(pauli_x());
    REQUIRE(cx_case.gates.size() == 1);
    CHECK(cx_case.gates[0].kind == GateKind::cx);

    Circuit cz_case = controlled_u_to_basic(pauli_z());
    CHECK((compose_unitary(cz_case).m - make_controlled(pauli_z(), 1)).cwiseAbs().maxCoeff() <
          1e-9);

    for (int rep = 0; rep < 30; ++rep) {
        Mat u2 = random_special_unitary(2, rng);
        if (rng.coin()) u2 *= std::polar(1.0, rng.uniform() * 2 * kPi);
        Circuit c = controlled_u_to_basic(u2);
        CHECK(count_cx(c) == 2);
        CHECK(count_1q(c) <= 4);
        CHECK((compose_unitary(c).m - make_controlled(u2, 1)).cwiseAbs().maxCoeff() < 1e-9);
    }
}

namespace {

// exp(i(x XX + y YY + z ZZ)) from the three commuting scalar exponentials
Mat canonical_interaction(double x, double y, double z) {
    auto pp = [](const Mat& p, double t) {
        return Mat(std::cos(t) * Mat::Identity(4, 4) + cxd(0, std::sin(t)) * kron(p, p));
    };
    return pp(pauli_x(), x) * pp(pauli_y(), y) * pp(pauli_z(), z);
}

}  // namespace

TEST_CASE("canonical analysis reconstructs and lands in the cell") {
    Rng rng(37);
    for (int rep = 0; rep < 100; ++rep) {
        Mat u = random_special_unitary(4, rng);
        if (rng.coin()) u *= std::polar(1.0, rng.uniform() * 2 * kPi);
        KakDecomposition k = kak_analyze(u);
        CHECK(k.x <= kPi / 4 + 1e-9);
        CHECK(k.x >= k.y - 1e-9);
        CHECK(k.y >= std::abs(k.z) - 1e-9);
        CHECK(k.y >= -1e-9);
        const Mat rebuilt = std::polar(1.0, k.phase) * kron(k.a1, k.a0) *
                            canonical_interaction(k.x, k.y, k.z) * kron(k.b1, k.b0);
        CHECK((rebuilt - u).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("analysis of the canonical gate itself recovers the angles") {
    Rng rng(59);
    for (int rep = 0; rep < 50; ++rep) {
        // sample inside the cell: pi/4 > x > y > |z|
        double x = rng.uniform() * kPi / 4;
        double y = rng.uniform() * x;
        double z = (2 * rng.uniform() - 1) * y;
        KakDecomposition k = kak_analyze(canonical_interaction(x, y, z));
        CHECK(k.x == doctest::Approx(x).epsilon(1e-8));
        CHECK(k.y == doctest::Approx(y).epsilon(1e-8));
        CHECK(k.z == doctest::Approx(z).epsilon(1e-8));
    }
}

TEST_CASE("kak on special gates") {
    // cx itself: one cx in the output
    Circuit cx(2);
    cx.append(Gate(GateKind::cx, {0, 1}));
    Mat cx_mat = compose_unitary(cx).m;
    Circuit out = kak_decompose(cx_mat);
    CHECK(count_cx(out) <= 1);
    CHECK(distance(compose_unitary(out).m, cx_mat) < 1e-8);

    // tensor products: no cx at all
    Rng rng(41);
    for (int rep = 0; rep < 20; ++rep) {
        Mat local = kron(random_special_unitary(2, rng), random_special_unitary(2, rng));
        Circuit c = kak_decompose(local);
        CHECK(count_cx(c) == 0);
        CHECK(distance(compose_unitary(c).m, local) < 1e-8);
    }

    // swap needs all three
    Mat swap_mat = Mat::Zero(4, 4);
    swap_mat(0, 0) = 1;
    swap_mat(2, 1) = 1;
    swap_mat(1, 2) = 1;
    swap_mat(3, 3) = 1;
    Circuit sw = kak_decompose(swap_mat);
    CHECK(count_cx(sw) == 3);
    CHECK(distance(compose_unitary(sw).m, swap_mat) < 1e-8);
}

TEST_CASE("kak on random unitaries: 3 cx, 15 single-qubit gates, reconstruction") {
    Rng rng(43);
    for (int rep = 0; rep < 200; ++rep) {
        Mat u = random_special_unitary(4, rng);
        if (rng.coin()) u *= std::polar(1.0, rng.uniform() * 2 * kPi);
        Circuit c = kak_decompose(u);
        CHECK(count_cx(c) <= 3);
        CHECK(count_1q(c) <= 15);
        CHECK(metrics(c).two_qubit_count == count_cx(c));
        CHECK(distance(compose_unitary(c).m, u) < 1e-8);
    }
}

TEST_CASE("kak input validation") {
    CHECK_THROWS_AS(kak_decompose(Mat::Identity(2, 2)), Error);
    CHECK_THROWS_AS(kak_decompose(Mat::Identity(4, 4) * 1.5), Error);
}

TEST_CASE("full exact synthesis to x/cx/custom-1q") {
    Rng rng(47);
    for (int n : {1, 2, 3}) {
        for (int rep = 0; rep < (n == 3 ? 4 : 10); ++rep) {
            Mat u = random_special_unitary(1 << n, rng);
            Circuit c = synthesize_exact(u);
            for (const Gate& g : c.gates) {
                CHECK(g.arity() <= 2);
                if (g.arity() == 2) CHECK(g.kind == GateKind::cx);
            }
            CHECK(distance(compose_unitary(c).m, u) < 1e-8);
        }
    }
}

TEST_CASE("rebase to u3 preserves the circuit up to global phase") {
    Rng rng(53);
    Mat u = random_special_unitary(8, rng);
    Circuit c = synthesize_exact(u);
    Circuit rebased = rebase_to_u3(c);
    for (const Gate& g : rebased.gates) CHECK(g.kind != GateKind::custom);
    CHECK(distance(compose_unitary(rebased).m, u) < 1e-8);
}
