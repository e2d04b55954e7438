#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qct/error.hpp"
#include "qct/ising.hpp"
#include "qct/rng.hpp"

using namespace qct;

namespace {

QuadraticModel random_model(Vartype vt, int n, Rng& rng, double edge_prob = 0.6) {
    QuadraticModel m(vt);
    for (int i = 0; i < n; ++i) m.add_variable("v" + std::to_string(i));
    for (int i = 0; i < n; ++i) {
        m.add_linear("v" + std::to_string(i), 2 * rng.uniform() - 1);
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < edge_prob)
                m.add_quadratic("v" + std::to_string(i), "v" + std::to_string(j),
                                2 * rng.uniform() - 1);
    }
    return m;
}

Assignment random_assignment(const QuadraticModel& m, Rng& rng) {
    Assignment a;
    for (const auto& v : m.variables())
        a[v] = m.vartype == Vartype::spin ? (rng.coin() ? 1 : -1) : (rng.coin() ? 1 : 0);
    return a;
}

HuboModel random_hubo(int n, int terms, int max_degree, Rng& rng) {
    HuboModel h;
    for (int t = 0; t < terms; ++t) {
        const int deg = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(max_degree)));
        std::vector<std::string> vars;
        while (static_cast<int>(vars.size()) < deg) {
            std::string v = "x" + std::to_string(rng.uniform_int(static_cast<std::uint64_t>(n)));
            if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
        }
        h.add_term(vars, std::round((4 * rng.uniform() - 2) * 8) / 8);
    }
    return h;
}

}  // namespace

TEST_CASE("energy basics") {
    IsingModel m(Vartype::spin);
    m.add_linear("a", 1.0);
    CHECK(energy(m, {{"a", -1}}) == -1.0);

    IsingModel j(Vartype::spin);
    j.add_quadratic("a", "b", -1.0);
    CHECK(energy(j, {{"a", 1}, {"b", 1}}) == -1.0);
    CHECK(energy(j, {{"a", -1}, {"b", -1}}) == -1.0);
    CHECK(energy(j, {{"a", 1}, {"b", -1}}) == 1.0);

    QuboModel q(Vartype::binary);
    q.add_quadratic("x1", "x2", 3.0);
    q.add_linear("x1", -1.0);
    CHECK(energy(q, {{"x1", 1}, {"x2", 1}}) == 2.0);
}

TEST_CASE("energy error paths") {
    IsingModel m(Vartype::spin);
    m.add_linear("a", 1.0);
    CHECK_THROWS_AS(energy(m, {}), Error);
    try {
        energy(m, {{"a", 0}});
        FAIL("expected domain_violation");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::domain_violation);
    }
}

TEST_CASE("qubo to ising fixed examples") {
    QuboModel q(Vartype::binary);
    q.add_linear("a", 1.0);
    IsingModel m = qubo_to_ising(q);
    CHECK(m.linear.at("a") == 0.5);
    CHECK(m.offset == 0.5);
    CHECK(m.quadratic.empty());

    QuboModel q2(Vartype::binary);
    q2.add_quadratic("a", "b", 4.0);
    IsingModel m2 = qubo_to_ising(q2);
    CHECK(m2.quadratic.at({"a", "b"}) == 1.0);
    CHECK(m2.linear.at("a") == 1.0);
    CHECK(m2.linear.at("b") == 1.0);
    CHECK(m2.offset == 1.0);
}

TEST_CASE("qubo/ising conversions preserve energies and round trip") {
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        QuboModel q = random_model(Vartype::binary, 2 + static_cast<int>(rng.uniform_int(5)), rng);
        q.offset = rng.uniform();
        IsingModel m = qubo_to_ising(q);
        for (int k = 0; k < 8; ++k) {
            Assignment xb = random_assignment(q, rng);
            Assignment sp;
            for (const auto& [v, x] : xb) sp[v] = 2 * x - 1;
            CHECK(energy(q, xb) == doctest::Approx(energy(m, sp)).epsilon(1e-12));
        }
        QuboModel back = ising_to_qubo(m);
        CHECK(back.offset == doctest::Approx(q.offset).epsilon(1e-12));
        for (const auto& [v, h] : q.linear)
            CHECK(back.linear.at(v) == doctest::Approx(h).epsilon(1e-12));
        for (const auto& [p, j] : q.quadratic)
            CHECK(back.quadratic.at(p) == doctest::Approx(j).epsilon(1e-12));
    }
}

TEST_CASE("rescale") {
    Rng rng(9);
    IsingModel m = random_model(Vartype::spin, 10, rng);
    IsingModel same = rescale(m, 1.0);
    CHECK(same.linear == m.linear);

    IsingModel doubled = rescale(m, 2.0);
    for (int k = 0; k < 10; ++k) {
        Assignment a = random_assignment(m, rng);
        CHECK(energy(doubled, a) == doctest::Approx(2 * energy(m, a)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(rescale(m, 0.0), Error);
    CHECK_THROWS_AS(rescale(m, -2.0), Error);
}

TEST_CASE("rescale preserves the ground-state set") {
    Rng rng(23);
    for (int i = 0; i < 20; ++i) {
        IsingModel m = random_model(Vartype::spin, 10, rng, 0.3);
        const double alpha = 0.25 + 3 * rng.uniform();
        GroundSet before = brute_force_solve(m);
        GroundSet after = brute_force_solve(rescale(m, alpha));
        CHECK(after.energy == doctest::Approx(alpha * before.energy).epsilon(1e-9));
        REQUIRE(after.assignments.size() == before.assignments.size());
        CHECK(after.assignments == before.assignments);
    }
}

TEST_CASE("reduction penalty table") {
    CHECK(reduction_penalty(1, 1, 1) == 0.0);
    CHECK(reduction_penalty(1, 1, 0) == 1.0);
    CHECK(reduction_penalty(0, 0, 1) == 3.0);
    // z == x*y is exactly the zero set
    for (int x : {0, 1})
        for (int y : {0, 1})
            for (int z : {0, 1}) {
                if (z == x * y)
                    CHECK(reduction_penalty(x, y, z) == 0.0);
                else
                    CHECK(reduction_penalty(x, y, z) >= 1.0);
            }
}

TEST_CASE("reduce_hubo substitutes cubic terms") {
    HuboModel h;
    h.add_term({"s1", "s2", "s3"}, -5.0);
    const double M = default_reduction_weight(h);
    HuboReduction red = reduce_hubo(h, M);
    REQUIRE(red.substitutions.size() == 1);
    CHECK(red.substitutions[0].x == "s1");
    CHECK(red.substitutions[0].y == "s2");
    CHECK(red.substitutions[0].aux == "s1*s2");
    CHECK(red.qubo.quadratic.at({"s1*s2", "s3"}) == -5.0);
    // consistent extensions agree exactly
    for (int s1 : {0, 1})
        for (int s2 : {0, 1})
            for (int s3 : {0, 1}) {
                Assignment a{{"s1", s1}, {"s2", s2}, {"s3", s3}};
                Assignment ext = a;
                ext["s1*s2"] = s1 * s2;
                CHECK(energy(red.qubo, ext) == doctest::Approx(energy(h, a)).epsilon(1e-12));
            }
    CHECK_THROWS_AS(reduce_hubo(h, 0.0), Error);
}

TEST_CASE("reduce_hubo ground states project onto hubo ground states") {
    Rng rng(31);
    for (int i = 0; i < 25; ++i) {
        HuboModel h = random_hubo(6, 8, 4, rng);
        if (h.max_degree() < 3) continue;
        HuboReduction red = reduce_hubo(h, default_reduction_weight(h));
        CHECK(red.qubo.num_variables() <= 16);  // keeps brute force cheap
        GroundSet gh = brute_force_solve(h);
        GroundSet gq = brute_force_solve(red.qubo);
        CHECK(gq.energy == doctest::Approx(gh.energy).epsilon(1e-9));
        // every reduced minimum projects to a hubo minimum
        for (const auto& a : gq.assignments) {
            Assignment proj;
            for (const auto& v : h.variables()) proj[v] = a.at(v);
            CHECK(energy(h, proj) == doctest::Approx(gh.energy).epsilon(1e-9));
            // and the auxiliary variables are consistent products
            for (const auto& sub : red.substitutions)
                CHECK(a.at(sub.aux) == a.at(sub.x) * a.at(sub.y));
        }
    }
}

TEST_CASE("inconsistent extensions cost more than any consistent energy") {
    HuboModel h;
    h.add_term({"a", "b", "c"}, -2.0);
    h.add_term({"a", "b"}, 1.0);
    const double M = default_reduction_weight(h);
    HuboReduction red = reduce_hubo(h, M);
    double max_consistent = -1e300;
    for (int a = 0; a <= 1; ++a)
        for (int b = 0; b <= 1; ++b)
            for (int c = 0; c <= 1; ++c)
                max_consistent = std::max(
                    max_consistent, energy(h, Assignment{{"a", a}, {"b", b}, {"c", c}}));
    for (int a = 0; a <= 1; ++a)
        for (int b = 0; b <= 1; ++b)
            for (int c = 0; c <= 1; ++c) {
                Assignment bad{{"a", a}, {"b", b}, {"c", c}, {"a*b", 1 - a * b}};
                CHECK(energy(red.qubo, bad) > max_consistent + 1 - 1e-9);
            }
}

TEST_CASE("brute force basics") {
    IsingModel m(Vartype::spin);
    m.add_linear("a", -1.0);
    GroundSet g = brute_force_solve(m);
    CHECK(g.energy == -1.0);
    REQUIRE(g.assignments.size() == 1);
    CHECK(g.assignments[0].at("a") == 1);

    IsingModel tri(Vartype::spin);
    tri.add_quadratic("a", "b", 1.0);
    tri.add_quadratic("b", "c", 1.0);
    tri.add_quadratic("a", "c", 1.0);
    GroundSet gt = brute_force_solve(tri);
    CHECK(gt.energy == -1.0);
    CHECK(gt.assignments.size() == 6);

    IsingModel empty(Vartype::spin);
    empty.offset = 0.25;
    GroundSet ge = brute_force_solve(empty);
    CHECK(ge.energy == 0.25);
    REQUIRE(ge.assignments.size() == 1);
    CHECK(ge.assignments[0].empty());

    IsingModel big(Vartype::spin);
    for (int i = 0; i < 25; ++i) big.add_variable("v" + std::to_string(i));
    CHECK_THROWS_AS(brute_force_solve(big), Error);
}

TEST_CASE("boltzmann distribution") {
    IsingModel sym(Vartype::spin);
    sym.add_variable("a");
    Distribution d = boltzmann_distribution(sym, 1.0);
    CHECK(d.probs[0] == doctest::Approx(0.5));
    CHECK(d.probs[1] == doctest::Approx(0.5));

    IsingModel m(Vartype::spin);
    m.add_linear("a", 1.0);
    Distribution d2 = boltzmann_distribution(m, 1.0);
    const double expect = std::exp(1.0) / (std::exp(1.0) + std::exp(-1.0));
    CHECK(d2.probs[d2.index_of({{"a", -1}})] == doctest::Approx(expect).epsilon(1e-12));

    CHECK_THROWS_AS(boltzmann_distribution(m, 0.0), Error);
    CHECK_THROWS_AS(boltzmann_distribution(m, -1.0), Error);
}

TEST_CASE("boltzmann normalization and low-T concentration") {
    Rng rng(41);
    for (int i = 0; i < 10; ++i) {
        IsingModel m = random_model(Vartype::spin, 6, rng, 0.4);
        Distribution d = boltzmann_distribution(m, 0.7);
        double sum = 0;
        for (double p : d.probs) sum += p;
        CHECK(std::abs(sum - 1.0) < 1e-12);

        GroundSet g = brute_force_solve(m);
        Distribution cold = boltzmann_distribution(m, 0.01);
        double ground_mass = 0;
        for (const auto& a : g.assignments) ground_mass += cold.probs[cold.index_of(a)];
        CHECK(ground_mass > 0.999);
    }
}

TEST_CASE("sample set invariants") {
    IsingModel m(Vartype::spin);
    m.add_linear("a", 1.0);
    m.add_quadratic("a", "b", -0.5);
    SampleSet s = SampleSet::make(m, {{{{"a", 1}, {"b", 1}}, 3}, {{{"a", -1}, {"b", -1}}, 2},
                                      {{{"a", 1}, {"b", 1}}, 1}});
    for (const auto& r : s.records)
        CHECK(r.energy == doctest::Approx(energy(m, r.assignment)).epsilon(1e-9));
    SampleSet agg = s.aggregated();
    CHECK(agg.records.size() == 2);
    CHECK(agg.total_occurrences() == 6);
    CHECK(agg.best()->energy <= agg.records.back().energy);
    CHECK(agg.records.front().energy <= agg.records.back().energy);
}

TEST_CASE("variable names with reserved characters are rejected") {
    IsingModel m(Vartype::spin);
    CHECK_THROWS_AS(m.add_variable("a,b"), Error);
    HuboModel h;
    CHECK_THROWS_AS(h.add_term({"a@1"}, 1.0), Error);
    CHECK_THROWS_AS(h.add_term({"a*b"}, 1.0), Error);
    CHECK_THROWS_AS(m.add_variable(""), Error);
    CHECK_THROWS_AS(m.add_quadratic("a", "a", 1.0), Error);
}
