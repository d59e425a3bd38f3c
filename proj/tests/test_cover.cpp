#include "oracles.hpp"

#include "gmtk/cover.hpp"
#include "gmtk/crosscheck.hpp"
#include "gmtk/error.hpp"
#include "gmtk/io.hpp"

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

using namespace gmtk;

namespace {

PlumbingDiagram fixture(const std::string& name) {
    std::ifstream in(std::string(GMTK_FIXTURES) + "/" + name);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_plumbing(ss.str());
}

// Node c with a -2 arm, a -3 arm and a leaf z whose relation kills p times the
// meridian of c, so the weight toward z is 0.
CoverPiece zero_leaf_star(long p) {
    IntMatrix rel{{-1, 1, 1, 1}, {1, -2, 0, 0}, {1, 0, -3, 0}, {p, 0, 0, 0}};
    GeneralizedPlumbing m({"c", "a", "b", "z"}, {{1, 2, 3}, {0}, {0}, {0}}, rel);
    CoverPiece piece;
    piece.splice = derive_splice(m);
    piece.model = m;
    piece.order = abs(piece.splice.det);
    if (p > 1) piece.decoration["z"] = p;
    return piece;
}

std::size_t central(const SpliceDiagram& g) { return g.node_edges().front(); }

// |H_1| of the piece with the orbifold curve on the given leaf forgotten.
Integer underlying_order(const CoverPiece& piece, const std::string& leaf) {
    IntMatrix r = piece.model.relations();
    std::size_t i = piece.model.index_of(leaf);
    Integer c = piece.model.row_content(i);
    for (std::size_t j = 0; j < r.cols(); ++j) r(i, j) /= c;
    return abs(oracle::laplace_det(r));
}

}  // namespace

TEST_SUITE("cover") {

TEST_CASE("ideal generators") {
    PlumbingDiagram d = dumbbell48();
    CHECK(ideal_generator(d, "u", "w") == 2);
    CHECK(ideal_generator(d, "w", "u") == 2);
    CHECK(ideal_generator(d, "u", "l1") == 1);
    PlumbingDiagram e = e8();
    for (auto [a, b] : e.edges()) {
        CHECK(ideal_generator(e, e.vertex(a).id, e.vertex(b).id) == 1);
        CHECK(ideal_generator(e, e.vertex(b).id, e.vertex(a).id) == 1);
    }
    // Far side {w, r1, r2} minus w: the rows of r1 and r2 restricted to the far side.
    IntMatrix far{{2, 0, -1}, {0, 2, -1}};
    CHECK(oracle::minor_gcd_order(far) == 2);
}

TEST_CASE("ideal generator is constant along a string") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        PlumbingDiagram d = random_normal_form(seed);
        for (std::size_t v = 0; v < d.size(); ++v) {
            if (d.valence(v) < 3) continue;
            for (std::size_t u : d.neighbors(v)) {
                StringWalk s = walk_string(d, v, u);
                if (d.valence(s.end) < 3) continue;
                Integer first = ideal_generator(d, d.vertex(v).id, d.vertex(u).id);
                std::size_t prev = v;
                for (std::size_t x : s.interior) {
                    std::size_t next = x;
                    for (std::size_t y : d.neighbors(x))
                        if (y != prev) next = y;
                    REQUIRE(ideal_generator(d, d.vertex(x).id, d.vertex(next).id) == first);
                    prev = x;
                }
            }
        }
    }
}

TEST_CASE("dumbbell48 split") {
    CoverSplit s = split_at_edge(dumbbell48(), "u", "w");
    CHECK(s.node0 == "u");
    CHECK(s.node1 == "w");
    CHECK(s.r0 == 8);
    CHECK(s.r1 == 8);
    CHECK(s.d0 == 2);
    CHECK(s.d1 == 2);
    CHECK(s.p_glue0 == 2);
    CHECK(s.p_glue1 == 2);
    CHECK(s.components0 == 2);
    CHECK(s.components1 == 2);
    CHECK(s.tori == 4);
    CHECK(s.piece0.order == 24);
    CHECK(s.piece1.order == 24);
    const SpliceDiagram& g0 = s.piece0.diagram();
    REQUIRE(g0.nodes().size() == 1);
    auto w = g0.weights_at(g0.nodes().front());
    std::sort(w.begin(), w.end());
    CHECK(w == std::vector<Integer>{2, 2, 4});
    // Underlying manifold of the piece has |H_1| = 24 / p_glue.
    CHECK(s.piece0.decoration.at(s.torus_b) == 2);
    CHECK(underlying_order(s.piece0, s.torus_b) == 12);
}

TEST_CASE("piece data") {
    CoverPiece piece = piece_from_plumbing(dumbbell48());
    CoverSplit s = split_at_edge(piece, central(piece.diagram()));
    for (int side : {0, 1}) {
        CoverPieceData p = cover_piece_data(piece, s, side);
        CHECK(p.lambda == 8);
        CHECK(p.lambda_quotient == 8);
        CHECK(p.fiber_degree == 6);
        CHECK(p.base_degree == 4);
        REQUIRE(p.euler);
        CHECK(*p.euler == -2);
        REQUIRE(p.lifted_euler);
        CHECK(*p.lifted_euler == Rational(-4, 3));
        CHECK(*p.lifted_euler * Rational(p.fiber_degree) == Rational(p.base_degree) * *p.euler);
    }
    IntMatrix a = intersection_matrix(dumbbell48());
    CHECK(oracle::meridian_order(a, dumbbell48().index_of("u")) == 6);
    CHECK(meridian_order(piece.model, piece.model.index_of("u")) == 6);
}

TEST_CASE("piece data with an orbifold leaf") {
    CoverPiece piece = piece_from_plumbing(dumbbell48(), {{"l1", 3}});
    CHECK(piece.order == 144);
    CoverSplit s = split_at_edge(piece, central(piece.diagram()));
    CHECK(s.piece0.order * s.d1 == 144);
    CHECK(s.piece1.order * s.d0 == 144);
    for (int side : {0, 1}) {
        CoverPieceData p = cover_piece_data(piece, s, side);
        CHECK(p.lambda * p.fiber_degree == 144);
        CHECK(p.lambda == p.lambda_quotient);
        const std::string& node = side == 0 ? s.node0 : s.node1;
        CHECK(p.fiber_degree == meridian_order(piece.model, piece.model.index_of(node)));
    }
}

TEST_CASE("one-node universal abelian covers") {
    UacPlan p = one_node_uac(piece_from_plumbing(e8()));
    CHECK(p.kind == UacKind::Brieskorn);
    CHECK(p.exponents == std::vector<Integer>{2, 3, 5});
    CHECK(p.orientation == -1);
    CHECK(p.degree == 1);

    CoverSplit s = split_at_edge(dumbbell48(), "u", "w");
    UacPlan q = one_node_uac(s.piece0);
    CHECK(q.kind == UacKind::Brieskorn);
    CHECK(q.exponents == std::vector<Integer>{2, 2, 4});
    CHECK(q.degree == 24);
    CHECK(*q.euler == Rational(-3, 2));

    UacPlan z = one_node_uac(zero_leaf_star(1));
    CHECK(z.kind == UacKind::ConnectedSum);
    CHECK(z.exponents == std::vector<Integer>{2, 3});
    CHECK(z.zero_leaf_degree == 1);
    CHECK(z.degree == 6);
    CHECK(z.degree_steps.back() == 6);

    UacPlan z2 = one_node_uac(zero_leaf_star(2));
    CHECK(z2.zero_leaf_degree == 2);
    CHECK(z2.degree == 12);

    CHECK(connected_sum_degree(6, 4, 2) == 12);
    CHECK_THROWS_AS(connected_sum_degree(3, 1, 2), InputError);
    CHECK_THROWS_AS(one_node_uac(piece_from_plumbing(dumbbell48())), InputError);
}

TEST_CASE("a zero-weight cut edge kills twice a fiber") {
    PlumbingDiagram d = fixture("zero_cut.plumb");
    CHECK(h1_order(d) == 80);
    CoverPiece piece = piece_from_plumbing(d);
    CoverSplit s = split_at_edge(piece, central(piece.diagram()));
    CHECK((s.r0 == 0 || s.r1 == 0));
    UacPlan plan = uac_plan(piece);
    CHECK(plan.degree == 80);
    bool found = false;
    for (const auto& c : plan.children)
        if (c.kind == UacKind::ConnectedSum) {
            found = true;
            Integer prod = c.zero_leaf_degree;
            for (const auto& n : c.exponents) prod *= n;
            CHECK(prod == c.degree);
        }
    CHECK(found);
}

TEST_CASE("uac plans") {
    UacPlan e = uac_plan(e8());
    CHECK(e.kind == UacKind::Brieskorn);
    CHECK(e.exponents == std::vector<Integer>{2, 3, 5});

    UacPlan d = uac_plan(dumbbell48());
    CHECK(d.kind == UacKind::Split);
    CHECK(d.degree == 48);
    REQUIRE(d.split);
    CHECK(d.split->d0 == 2);
    CHECK(d.split->d1 == 2);
    CHECK(d.split->tori == 4);
    CHECK(*d.data0->lifted_euler == Rational(-4, 3));
    CHECK(*d.data1->lifted_euler == Rational(-4, 3));
    REQUIRE(d.children.size() == 2);
    for (const auto& c : d.children) {
        CHECK(c.kind == UacKind::Brieskorn);
        CHECK(c.degree == 24);
    }
    CHECK(uac_json(uac_plan(dumbbell48())) == uac_json(d));
    CHECK_THROWS_AS(uac_plan(dumbbell48(), UacOptions{1}), InputError);
}

TEST_CASE("integer homology sphere covers") {
    CHECK(zhs_check(splice_from_plumbing(e8()).normalized));
    CHECK_FALSE(zhs_check(splice_from_plumbing(dumbbell48()).normalized));
    CHECK_FALSE(zhs_check(sample_three_node_diagram()));
}

TEST_CASE("identity suites on seeds") {
    std::size_t multi = 0;
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        PlumbingDiagram d = random_normal_form(seed);
        if (splice_from_plumbing(d).normalized.nodes().size() >= 2) ++multi;
        CheckResult c = check_cover(d);
        INFO("seed " << seed << ": " << (c.ok() ? "" : c.failures.front()));
        REQUIRE(c.ok());
        SpliceDiagram g = splice_from_plumbing(d).normalized;
        if (g.nodes().size() >= 2) {
            CoverPiece piece = piece_from_plumbing(d);
            for (std::size_t k : g.node_edges()) {
                CoverSplit s = split_at_edge(piece, k);
                REQUIRE(s.piece0.order == s.p_glue0 * underlying_order(s.piece0, s.torus_b));
                REQUIRE(s.piece1.order == s.p_glue1 * underlying_order(s.piece1, s.torus_a));
            }
        }
        CheckResult i = check_identities(d);
        INFO("seed " << seed << ": " << (i.ok() ? "" : i.failures.front()));
        REQUIRE(i.ok());
    }
    CHECK(multi > 20);
}

TEST_CASE("fuzz summary is deterministic across job counts") {
    FuzzOptions one{0, 60, {}, 1};
    FuzzOptions four{0, 60, {}, 4};
    FuzzSummary a = run_fuzz(one), b = run_fuzz(four);
    CHECK(a.ok());
    CHECK(a.checks == b.checks);
    CHECK(a.multi_node == b.multi_node);
    CHECK(a.zhs == b.zhs);
}

}
