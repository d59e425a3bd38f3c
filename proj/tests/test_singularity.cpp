#include "oracles.hpp"

#include "gmtk/error.hpp"
#include "gmtk/io.hpp"
#include "gmtk/singularity.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace gmtk;

namespace {

SpliceDiagram negative_edge_pair() {
    SpliceDiagram g;
    std::size_t x = g.add_node("x"), y = g.add_node("y");
    g.add_edge(x, g.add_leaf("x2"), 2);
    g.add_edge(x, g.add_leaf("x3"), 3);
    g.add_edge(y, g.add_leaf("y2"), 2);
    g.add_edge(y, g.add_leaf("y3"), 3);
    g.add_edge(x, y, 1, 1);
    return g;
}

PlumbingDiagram fixture(const std::string& name) {
    std::ifstream in(std::string(GMTK_FIXTURES) + "/" + name);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_plumbing(ss.str());
}

}  // namespace

TEST_SUITE("singularity") {

TEST_CASE("splice condition") {
    CHECK(splice_condition(splice_from_plumbing(dumbbell48()).normalized).verdict);

    SingularityVerdict fig = splice_condition(sample_three_node_diagram());
    CHECK_FALSE(fig.verdict);
    REQUIRE(std::holds_alternative<NegativeNode>(fig.certificate));
    CHECK(std::get<NegativeNode>(fig.certificate).node == "B");

    SingularityVerdict neg = splice_condition(negative_edge_pair());
    CHECK_FALSE(neg.verdict);
    REQUIRE(std::holds_alternative<NonPositiveEdge>(neg.certificate));
    CHECK(std::get<NonPositiveEdge>(neg.certificate).determinant == -35);

    SpliceDiagram atomic = splice_from_plumbing(fixture("lens.plumb")).normalized;
    CHECK_THROWS_AS(splice_condition(atomic), InputError);
}

TEST_CASE("end-node reduction") {
    EliminationTranscript d = end_node_reduction(splice_from_plumbing(dumbbell48()).normalized, 48);
    CHECK(d.negative_definite);
    REQUIRE(d.steps.size() == 2);
    CHECK(d.steps[0].node == "u");
    CHECK(d.steps[0].pivot == -2);
    CHECK(d.steps[0].closed_form_checked);
    CHECK(*d.steps[0].neighbor_after == Rational(-3, 2));
    CHECK(d.steps[1].pivot == Rational(-3, 2));

    EliminationTranscript e = end_node_reduction(splice_from_plumbing(e8()).normalized, 1);
    CHECK(e.negative_definite);
    REQUIRE(e.steps.size() == 1);
    CHECK(e.steps[0].pivot == Rational(-1, 30));

    EliminationTranscript n = end_node_reduction(negative_edge_pair(), 35);
    CHECK_FALSE(n.negative_definite);
    REQUIRE_FALSE(n.steps.empty());
    CHECK(n.steps[0].pivot == Rational(1, 6));
}

TEST_CASE("reduction agrees with leading minors of the reduced matrix") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        SpliceDerivation s = splice_from_plumbing(random_normal_form(seed));
        if (s.normalized.is_atomic()) continue;
        Integer d = abs(s.det);
        RatMatrix m = decomposition_graph(s.normalized, d).reduced_matrix();
        REQUIRE(end_node_reduction(s.normalized, d).negative_definite == oracle::positive_definite(-m));
    }
}

TEST_CASE("three routes") {
    LinkVerdict e = is_singularity_link(e8());
    CHECK(e.verdict);
    CHECK(e.route_agreement);
    REQUIRE(std::holds_alternative<DefinitenessWitness>(e.certificate));
    CHECK(std::get<DefinitenessWitness>(e.certificate).minor_signs == std::vector<int>{1});

    LinkVerdict d = is_singularity_link(dumbbell48());
    CHECK(d.verdict);
    CHECK(d.route_agreement);
    CHECK(std::get<DefinitenessWitness>(d.certificate).minor_signs == std::vector<int>{1, 1});

    LinkVerdict i = is_singularity_link(fixture("indefinite.plumb"));
    CHECK_FALSE(i.verdict);
    CHECK(i.route_agreement);
    CHECK_FALSE(i.plumbing_route);
    CHECK_FALSE(std::holds_alternative<std::monostate>(i.certificate));

    CHECK_THROWS_AS(is_singularity_link(fixture("lens.plumb")), InputError);
}

TEST_CASE("routes agree on random plumbings") {
    std::size_t yes = 0, no = 0;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        PlumbingDiagram d = random_normal_form(seed);
        if (splice_from_plumbing(d).normalized.is_atomic()) continue;
        LinkVerdict v = is_singularity_link(d);
        REQUIRE(v.route_agreement);
        REQUIRE(v.plumbing_route == oracle::positive_definite(to_rational(-intersection_matrix(d))));
        if (!v.verdict) REQUIRE_FALSE(std::holds_alternative<std::monostate>(v.certificate));
        (v.verdict ? yes : no)++;
    }
    CHECK(yes > 0);
    CHECK(no > 0);
}

}
