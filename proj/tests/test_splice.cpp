#include "gmtk/error.hpp"
#include "gmtk/plumbing.hpp"
#include "gmtk/splice.hpp"

#include <doctest.h>

#include <algorithm>

using namespace gmtk;

namespace {

const Integer& weight(const SpliceDiagram& g, std::string_view v, std::string_view toward) {
    auto k = g.find_edge(g.index_of(v), g.index_of(toward));
    REQUIRE(k);
    return g.weight_at(g.index_of(v), *k);
}

std::size_t edge(const SpliceTree& g, std::string_view a, std::string_view b) {
    auto k = g.find_edge(g.index_of(a), g.index_of(b));
    REQUIRE(k);
    return *k;
}

// Two + nodes with leaves (2, 3), joined with weights 1 and 1.
SpliceDiagram negative_edge_pair() {
    SpliceDiagram g;
    std::size_t x = g.add_node("x"), y = g.add_node("y");
    std::size_t x2 = g.add_leaf("x2"), x3 = g.add_leaf("x3"), y2 = g.add_leaf("y2"), y3 = g.add_leaf("y3");
    g.add_edge(x, x2, 2);
    g.add_edge(x, x3, 3);
    g.add_edge(y, y2, 2);
    g.add_edge(y, y3, 3);
    g.add_edge(x, y, 1, 1);
    return g;
}

}  // namespace

TEST_SUITE("splice") {

TEST_CASE("E8 gives one positive node with weights 2, 3, 5") {
    SpliceDerivation s = splice_from_plumbing(e8());
    const SpliceDiagram& g = s.normalized;
    REQUIRE(g.nodes().size() == 1);
    std::size_t c = g.nodes().front();
    CHECK(g.vertex(c).id == "c");
    CHECK(g.sign(c) == 1);
    auto w = g.weights_at(c);
    std::sort(w.begin(), w.end());
    CHECK(w == std::vector<Integer>{2, 3, 5});
    CHECK(s.det == 1);
}

TEST_CASE("dumbbell48 splice diagram") {
    SpliceDerivation s = splice_from_plumbing(dumbbell48());
    const SpliceDiagram& g = s.normalized;
    REQUIRE(g.nodes().size() == 2);
    CHECK(g.sign(g.index_of("u")) == 1);
    CHECK(g.sign(g.index_of("w")) == 1);
    CHECK(weight(g, "u", "w") == 8);
    CHECK(weight(g, "w", "u") == 8);
    CHECK(weight(g, "u", "l1") == 2);
    CHECK(weight(g, "w", "r2") == 2);
    CHECK(edge_determinant(g, edge(g, "u", "w")) == 48);
    CHECK(edge_determinant(s.unnormalized, edge(s.unnormalized, "u", "w")) == 48);
    CHECK_FALSE(pairwise_coprime_at_nodes(g));
    CHECK_THROWS_AS(edge_determinant(g, edge(g, "u", "l1")), InputError);
}

TEST_CASE("a chain is atomic") {
    PlumbingDiagram d;
    d.add_vertex("a", -3);
    d.add_vertex("b", -2);
    d.add_edge("a", "b");
    SpliceDerivation s = splice_from_plumbing(d);
    CHECK(s.normalized.is_atomic());
    CHECK(s.det == 5);
}

TEST_CASE("zero determinant is rejected") {
    PlumbingDiagram d = star(-1, {1, 1, 1});
    // det(-A) = -4; only a vanishing determinant is an error.
    CHECK_NOTHROW(splice_from_plumbing(d));
    PlumbingDiagram z = star(-2, {1, 1, 1, 1});
    CHECK(det_plumbing(z) == 0);
    CHECK_THROWS_AS(splice_from_plumbing(z), InputError);
}

TEST_CASE("three-node figure edge determinants") {
    SpliceDiagram g = sample_three_node_diagram();
    CHECK(validate_splice(g).ok);
    CHECK(edge_determinant(g, edge(g, "A", "B")) == 430);
    CHECK(edge_determinant(g, edge(g, "B", "C")) == 432);
    CHECK(linking_product(g, g.index_of("A"), g.index_of("C")) == 630);
    CHECK_FALSE(pairwise_coprime_at_nodes(g));
}

TEST_CASE("validation violations") {
    SpliceDiagram leaf_zero;
    std::size_t v = leaf_zero.add_node("v");
    for (auto [id, w] : {std::pair{"a", 0}, {"b", 3}, {"c", 5}}) leaf_zero.add_edge(v, leaf_zero.add_leaf(id), w);
    CHECK_FALSE(validate_splice(leaf_zero).ok);
    CHECK(validate_splice(leaf_zero, true).ok);

    SpliceDiagram two_zero;
    std::size_t x = two_zero.add_node("x"), y = two_zero.add_node("y"), z = two_zero.add_node("z");
    two_zero.add_edge(x, y, 0, 1);
    two_zero.add_edge(x, z, 0, 1);
    two_zero.add_edge(x, two_zero.add_leaf("x1"), 2);
    for (std::size_t n : {y, z})
        for (int i = 0; i < 2; ++i) two_zero.add_edge(n, two_zero.add_leaf(two_zero.vertex(n).id + std::to_string(i)), 2 + i);
    auto r = validate_splice(two_zero);
    CHECK_FALSE(r.ok);
    CHECK(r.violations.front().find("has 2 zero weights") != std::string::npos);

    SpliceDiagram thin;
    std::size_t t = thin.add_node("t");
    thin.add_edge(t, thin.add_leaf("p"), 2);
    thin.add_edge(t, thin.add_leaf("q"), 3);
    CHECK_FALSE(validate_splice(thin).ok);
}

TEST_CASE("sees") {
    SpliceDiagram g = splice_from_plumbing(dumbbell48()).normalized;
    std::size_t u = g.index_of("u"), w = g.index_of("w"), l1 = g.index_of("l1");
    std::size_t central = edge(g, "u", "w");
    CHECK(sees(g, w, central, l1));
    CHECK_FALSE(sees(g, u, central, l1));
    CHECK(sees(g, u, edge(g, "u", "l1"), l1));
    CHECK_FALSE(sees(g, u, edge(g, "u", "l2"), l1));
}

TEST_CASE("linking products") {
    SpliceDiagram g = splice_from_plumbing(dumbbell48()).normalized;
    CHECK(linking_product(g, g.index_of("u"), g.index_of("w")) == 16);
    CHECK(linking_product(g, g.index_of("u"), g.index_of("u")) == 32);
}

TEST_CASE("pairwise coprime") {
    CHECK(pairwise_coprime_at_nodes(splice_from_plumbing(e8()).normalized));
}

TEST_CASE("orbifold adjustment") {
    SpliceDiagram g = splice_from_plumbing(dumbbell48()).normalized;
    OrbifoldAdjustment same = orbifold_adjust(g, {});
    CHECK(same.diagram == g);
    CHECK(same.degree_product == 1);

    OrbifoldAdjustment a = orbifold_adjust(g, {{"l1", 3}});
    const SpliceDiagram& h = a.diagram;
    CHECK(a.degree_product == 3);
    CHECK(weight(h, "u", "l1") == 6);
    CHECK(weight(h, "u", "l2") == 2);
    CHECK(weight(h, "u", "w") == 8);
    CHECK(weight(h, "w", "r1") == 2);
    CHECK(weight(h, "w", "r2") == 2);
    CHECK(weight(h, "w", "u") == 24);
    CHECK(edge_determinant(h, edge(h, "u", "w")) == 144);
    CHECK(edge_determinant(h, edge(h, "u", "w")) == 3 * edge_determinant(g, edge(g, "u", "w")));

    SpliceDiagram p = splice_from_plumbing(e8()).normalized;
    std::string five;
    std::size_t c = p.nodes().front();
    for (std::size_t k : p.incident(c))
        if (p.weight_at(c, k) == 5) five = p.vertex(p.other_end(k, c)).id;
    OrbifoldAdjustment b = orbifold_adjust(p, {{five, 2}});
    auto w = b.diagram.weights_at(c);
    std::sort(w.begin(), w.end());
    CHECK(w == std::vector<Integer>{2, 3, 10});
    CHECK(b.degree_product == 2);

    CHECK_FALSE(validate_decoration(g, {{"u", 2}}).ok);
    CHECK_FALSE(validate_decoration(g, {{"l1", 0}}).ok);
}

TEST_CASE("normalized and unnormalized determinants agree up to end signs") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        SpliceDerivation s = splice_from_plumbing(random_normal_form(seed));
        if (s.normalized.is_atomic()) continue;
        for (std::size_t k : s.normalized.node_edges()) {
            const SpliceEdge& e = s.unnormalized.edge(k);
            if (e.wa == 0 || e.wb == 0) continue;
            Integer dt = edge_determinant(s.unnormalized, k);
            REQUIRE(edge_determinant(s.normalized, k) == Integer(sign(e.wa) * sign(e.wb)) * dt);
        }
        REQUIRE(s.maximal);
        REQUIRE(s.maximal->erase() == s.unnormalized);
    }
}

TEST_CASE("negative edge determinant") {
    SpliceDiagram g = negative_edge_pair();
    CHECK(validate_splice(g).ok);
    CHECK(edge_determinant(g, edge(g, "x", "y")) == -35);
}

}
