#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "qct/error.hpp"
#include "qct/rng.hpp"
#include "qct/sk.hpp"

using namespace qct;

namespace {

GateBasis htt() { return GateBasis::from_names({"h", "t", "tdg"}); }

}  // namespace

TEST_CASE("precompile enumerates short sequences with pruning") {
    SKNet net1 = sk_precompile(htt(), 1, 50);
    CHECK(net1.entries().size() == 4);  // identity + h + t + tdg

    SKNet net2 = sk_precompile(htt(), 2, 50);
    // 13 raw sequences at most; h h = I, t tdg = I, tdg t = I pruned
    CHECK(net2.entries().size() == 10);
    for (const auto& e : net2.entries()) {
        Mat u = Mat::Identity(2, 2);
        for (int g : e.seq) u = net2.basis().gates[static_cast<size_t>(g)].matrix * u;
        CHECK((u - e.u).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(static_cast<int>(e.seq.size()) <= 2);
    }
}

TEST_CASE("covering radius estimate shrinks as the table grows") {
    SKNet small = sk_precompile(htt(), 3, 300);
    SKNet big = sk_precompile(htt(), 8, 300);
    CHECK(big.eps0() < small.eps0());
    CHECK(big.eps0() > 0);
}

TEST_CASE("basic approximation finds exact table hits") {
    SKNet net = sk_precompile(htt(), 3, 100);

    SkApprox id = sk_basic_approx(net, Mat::Identity(2, 2));
    CHECK(id.seq.empty());
    CHECK(id.dist < 1e-12);

    const Mat h = htt().gates[0].matrix;
    SkApprox ha = sk_basic_approx(net, h);
    CHECK(sequence_names(net, ha.seq) == std::vector<std::string>{"h"});
    CHECK(ha.dist < 1e-12);

    const Mat t = htt().gates[1].matrix;
    SkApprox th = sk_basic_approx(net, t * h);  // h applied first, then t
    CHECK(th.dist < 1e-12);
    CHECK(sequence_names(net, th.seq) == std::vector<std::string>{"h", "t"});
}

TEST_CASE("group commutator reconstructs small rotations") {
    const Mat id = Mat::Identity(2, 2);
    auto [vi, wi] = group_commutator_factor(id);
    CHECK((vi - id).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((wi - id).cwiseAbs().maxCoeff() < 1e-12);

    const Mat delta = rot_z(0.01);
    auto [v, w] = group_commutator_factor(delta);
    CHECK(distance(v * w * v.adjoint() * w.adjoint(), delta) < 1e-10);

    CHECK_THROWS_AS(group_commutator_factor(rot_z(3.0)), Error);
}

TEST_CASE("group commutator balance and exactness on random small rotations") {
    Rng rng(71);
    const Mat id = Mat::Identity(2, 2);
    for (int rep = 0; rep < 100; ++rep) {
        const double theta = 0.002 + 0.8 * rng.uniform();
        std::array<double, 3> axis{rng.normal(), rng.normal(), rng.normal()};
        const Mat delta = su2_from_axis_angle(theta, axis);
        if (distance(delta, id) >= 0.5) continue;
        auto [v, w] = group_commutator_factor(delta);
        CHECK(distance(v * w * v.adjoint() * w.adjoint(), delta) < 1e-10);
        const double delta_norm = (delta - id).cwiseAbs().maxCoeff();
        CHECK((v - id).cwiseAbs().maxCoeff() <= 2.0 * std::sqrt(delta_norm) + 1e-12);
        CHECK((w - id).cwiseAbs().maxCoeff() <= 2.0 * std::sqrt(delta_norm) + 1e-12);
    }
}

TEST_CASE("compile depth 0 equals the basic approximation") {
    SKNet net = sk_precompile(htt(), 8, 200);
    Rng rng(73);
    for (int rep = 0; rep < 10; ++rep) {
        const Mat u = random_special_unitary(2, rng);
        SkApprox base = sk_basic_approx(net, u);
        SkApprox c0 = sk_compile(u, net, 0);
        CHECK(c0.dist == doctest::Approx(base.dist).epsilon(1e-12));
        CHECK(c0.seq == base.seq);
    }
}

TEST_CASE("compile distance is monotone in depth and improves") {
    SKNet net = sk_precompile(htt(), 8, 300);
    Rng rng(79);
    double improved = 0;
    for (int rep = 0; rep < 10; ++rep) {
        const Mat u = (rep == 0) ? rot_z(0.37) : random_special_unitary(2, rng);
        double last = 1e300;
        for (int depth = 0; depth <= 3; ++depth) {
            SkApprox a = sk_compile(u, net, depth);
            CHECK(a.dist <= last + 1e-12);
            CHECK(static_cast<int>(a.seq.size()) <=
                  static_cast<int>(std::pow(5.0, depth)) * net.l0());
            // the reported distance matches the emitted sequence
            Mat composed = Mat::Identity(2, 2);
            for (int g : a.seq) composed = net.basis().gates[static_cast<size_t>(g)].matrix * composed;
            CHECK(distance(composed, u) == doctest::Approx(a.dist).epsilon(1e-10));
            last = a.dist;
        }
        SkApprox d0 = sk_compile(u, net, 0);
        SkApprox d3 = sk_compile(u, net, 3);
        if (d3.dist < d0.dist - 1e-9) improved += 1;
    }
    CHECK(improved >= 8);  // the recursion genuinely refines almost every target
}

TEST_CASE("coarse nets are rejected") {
    GateBasis tiny = GateBasis::from_names({"t", "tdg"});  // not universal, terrible coverage
    SKNet net = sk_precompile(tiny, 2, 200);
    CHECK(net.eps0() >= 0.5);
    CHECK_THROWS_AS(sk_compile(rot_z(0.3), net, 1), Error);
}

TEST_CASE("net cache round trip") {
    SKNet net = sk_precompile(htt(), 5, 100);
    const std::string path = "sknet_test_cache.bin";
    net.save(path);
    SKNet back = SKNet::load(path);
    std::remove(path.c_str());
    CHECK(back.l0() == net.l0());
    CHECK(back.eps0() == doctest::Approx(net.eps0()).epsilon(1e-12));
    REQUIRE(back.entries().size() == net.entries().size());
    for (size_t i = 0; i < net.entries().size(); ++i) {
        CHECK(back.entries()[i].seq == net.entries()[i].seq);
        CHECK((back.entries()[i].u - net.entries()[i].u).cwiseAbs().maxCoeff() < 1e-15);
    }

    // loading against a different basis is refused via the content hash
    SKNet other = sk_precompile(GateBasis::from_names({"h", "s", "sdg"}), 2, 10);
    other.save(path);
    SKNet reloaded = SKNet::load(path);
    CHECK(reloaded.basis().index_of("s") >= 0);
    std::remove(path.c_str());
}

TEST_CASE("sequence circuit uses native gate names") {
    SKNet net = sk_precompile(htt(), 2, 10);
    const Mat t = htt().gates[1].matrix;
    const Mat h = htt().gates[0].matrix;
    SkApprox a = sk_basic_approx(net, t * h);
    Circuit c = sequence_circuit(net, a.seq);
    REQUIRE(c.gates.size() == 2);
    CHECK(c.gates[0].kind == GateKind::h);
    CHECK(c.gates[1].kind == GateKind::t);
}
