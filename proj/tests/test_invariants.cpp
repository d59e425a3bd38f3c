#include "oracles.hpp"

#include "gmtk/error.hpp"
#include "gmtk/invariants.hpp"
#include "gmtk/plumbing.hpp"
#include "gmtk/splice.hpp"

#include <doctest.h>

using namespace gmtk;

namespace {

SpliceDiagram one_node(const std::vector<long>& leaf_weights) {
    SpliceDiagram g;
    std::size_t v = g.add_node("v");
    for (std::size_t i = 0; i < leaf_weights.size(); ++i) g.add_edge(v, g.add_leaf("l" + std::to_string(i)), leaf_weights[i]);
    return g;
}

std::size_t node_id(const SpliceDiagram& g, std::string_view id) { return g.index_of(id); }

}  // namespace

TEST_SUITE("invariants") {

TEST_CASE("orbifold Euler characteristic") {
    SpliceDiagram p = splice_from_plumbing(e8()).normalized;
    CHECK(orbifold_euler_char(p, p.nodes().front()) == Rational(1, 30));
    SpliceDiagram g = splice_from_plumbing(dumbbell48()).normalized;
    CHECK(orbifold_euler_char(g, node_id(g, "u")) == 0);
    CHECK(orbifold_euler_char(one_node({2, 2, 2}), 0) == Rational(1, 2));
    CHECK_THROWS_AS(orbifold_euler_char(g, node_id(g, "l1")), InputError);
}

TEST_CASE("orbifold Euler characteristic matches Seifert invariants") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        PlumbingDiagram d = random_normal_form(seed);
        SpliceDiagram g = splice_from_plumbing(d).normalized;
        if (g.nodes().size() != 1) continue;
        std::size_t v = g.nodes().front();
        SeifertData s = seifert_data(d, g.vertex(v).id);
        Rational chi = 2;
        for (const auto& arm : s.arms) chi -= 1 - make_rational(1, arm.alpha);
        REQUIRE(orbifold_euler_char(g, v) == chi);
    }
}

TEST_CASE("rational Euler numbers") {
    SpliceDiagram p = splice_from_plumbing(e8()).normalized;
    CHECK(euler_number(p, 1, p.nodes().front()) == Rational(-1, 30));
    SpliceDiagram g = splice_from_plumbing(dumbbell48()).normalized;
    CHECK(euler_number(g, 48, node_id(g, "u")) == -2);
    CHECK(euler_number(g, 48, node_id(g, "w")) == -2);
    CHECK(euler_number(one_node({2, 2, 4}), 24, 0) == Rational(-3, 2));
    CHECK_THROWS_AS(euler_number(g, 0, node_id(g, "u")), InputError);
}

TEST_CASE("Euler number does not depend on the distinguished edge") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        PlumbingDiagram d = random_normal_form(seed);
        SpliceDerivation s = splice_from_plumbing(d);
        const SpliceDiagram& g = s.normalized;
        for (std::size_t v : g.nodes()) {
            Rational e = euler_number(g, s.det, v);
            REQUIRE(e == node_euler_from_plumbing(d, g.vertex(v).id));
            bool has_zero = false;
            for (std::size_t k : g.incident(v)) has_zero = has_zero || g.weight_at(v, k) == 0;
            if (has_zero) continue;
            for (std::size_t k : g.incident(v))
                if (g.is_node(g.other_end(k, v))) REQUIRE(euler_number(g, s.det, v, k) == e);
        }
    }
}

TEST_CASE("fiber pairings") {
    SpliceDerivation s = splice_from_plumbing(dumbbell48());
    std::size_t k = s.normalized.node_edges().front();
    CHECK(fiber_pairing(s.normalized, 48, k) == 1);
    CHECK(fiber_pairing(s.unnormalized, s.det, k) == 1);
    CHECK(fiber_pairing(s, k) == 1);

    OrbifoldAdjustment a = orbifold_adjust(s.normalized, {{"l1", 3}});
    CHECK(fiber_pairing(a.diagram, 144, k) == 1);

    // Two triple nodes joined through one -2 vertex.
    PlumbingDiagram d;
    d.add_vertex("x", -3);
    d.add_vertex("y", -3);
    d.add_vertex("t", -2);
    for (const char* id : {"x1", "x2", "y1", "y2"}) d.add_vertex(id, -2);
    for (auto [a1, b1] : {std::pair{"x", "x1"}, {"x", "x2"}, {"x", "t"}, {"t", "y"}, {"y", "y1"}, {"y", "y2"}})
        d.add_edge(a1, b1);
    SpliceDerivation t = splice_from_plumbing(d);
    std::size_t e = t.normalized.node_edges().front();
    CHECK(fiber_pairing(t, e) == 2);
    CHECK(fiber_pairing(t, e) == Rational(string_determinant(d, "x", "y")));
}

TEST_CASE("linking numbers") {
    PlumbingDiagram single;
    single.add_vertex("a", -2);
    CHECK(linking_number(single, "a", "a") == Rational(1, 2));
    PlumbingDiagram d = dumbbell48();
    CHECK(linking_number(d, "u", "w") == Rational(1, 3));
    CHECK(linking_number(d, "u", "u") == Rational(2, 3));
    RatMatrix inv = oracle::inverse(intersection_matrix(d));
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.size(); ++j)
            CHECK(linking_number(d, d.vertex(i).id, d.vertex(j).id) == -inv(i, j));
}

TEST_CASE("linking identity on random plumbings") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        PlumbingDiagram d = random_normal_form(seed);
        SpliceDerivation s = splice_from_plumbing(d);
        const SpliceDiagram& g = s.normalized;
        RatMatrix inv = oracle::inverse(intersection_matrix(d));
        for (std::size_t v : g.nodes())
            for (std::size_t w : g.nodes()) {
                if (v == w) continue;
                std::size_t i = d.index_of(g.vertex(v).id), j = d.index_of(g.vertex(w).id);
                REQUIRE(-inv(i, j) == make_rational(linking_product(s.unnormalized, v, w), s.det));
            }
    }
}

TEST_CASE("decomposition graphs") {
    SpliceDiagram g = splice_from_plumbing(dumbbell48()).normalized;
    DecompositionGraph dg = decomposition_graph(g, 48);
    REQUIRE(dg.nodes.size() == 2);
    for (const auto& n : dg.nodes) {
        CHECK(n.euler == -2);
        CHECK(n.orbifold_euler_char == 0);
    }
    REQUIRE(dg.edges.size() == 1);
    CHECK(dg.edges[0].pairing == 1);
    RatMatrix m = dg.reduced_matrix();
    CHECK(m == RatMatrix{{-2, 1}, {1, -2}});
    CHECK(oracle::positive_definite(-m));

    SpliceDiagram p = splice_from_plumbing(e8()).normalized;
    DecompositionGraph de = decomposition_graph(p, 1);
    REQUIRE(de.nodes.size() == 1);
    CHECK(de.nodes[0].euler == Rational(-1, 30));
    CHECK(de.nodes[0].orbifold_euler_char == Rational(1, 30));
    CHECK(de.edges.empty());
    CHECK(oracle::positive_definite(-de.reduced_matrix()));
}

}
