#pragma once

#include "gmtk/exact.hpp"
#include "gmtk/plumbing.hpp"
#include "gmtk/splice.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gmtk {

// A (possibly orbifold) graph manifold piece: its homology model, splice
// diagram, leaf orbifold degrees and |H_1^orb|.
struct CoverPiece {
    GeneralizedPlumbing model;
    SpliceDerivation splice;
    OrbifoldDecoration decoration;
    Integer order;

    const SpliceDiagram& diagram() const { return splice.normalized; }
};

CoverPiece piece_from_plumbing(const PlumbingDiagram& d, const OrbifoldDecoration& deco = {});

// |H_1(M) / <meridians of the near side and of b>| for the torus at model edge
// (a, b); the far side is the one containing b.
Integer ideal_generator(const GeneralizedPlumbing& g, std::size_t a, std::size_t b);
Integer ideal_generator(const PlumbingDiagram& d, std::string_view a, std::string_view b);

// Ideal generator of splice edge k at node v, far side beyond v.
Integer edge_ideal_generator(const CoverPiece& piece, std::size_t v, std::size_t k);

// Model edge (v, first string vertex) realising splice edge k at node v.
std::pair<std::size_t, std::size_t> torus_edge(const CoverPiece& piece, std::size_t v, std::size_t k);

struct CoverSplit {
    std::string node0;
    std::string node1;
    std::string torus_a;  // model edge carrying the cut torus, a on side 0
    std::string torus_b;
    Integer r0;
    Integer r1;
    Integer d0;  // far side = side 0
    Integer d1;  // far side = side 1
    std::pair<Integer, Integer> kernel0;  // kills in side 0 piece, basis (m_a, m_b)
    std::pair<Integer, Integer> kernel1;  // kills in side 1 piece, basis (m_b, m_a)
    Integer p_glue0;
    Integer p_glue1;
    Integer components0;  // components of the preimage of side 0
    Integer components1;
    Integer tori;         // components of the preimage of the cut torus
    CoverPiece piece0;
    CoverPiece piece1;
};

// Side 0 is the end with the smaller id, or the larger one when !lower_id_first.
CoverSplit split_at_edge(const CoverPiece& piece, std::size_t k, bool lower_id_first = true);
CoverSplit split_at_edge(const PlumbingDiagram& d, std::string_view v0, std::string_view v1);

struct CoverPieceData {
    std::string node;
    Integer lambda;          // |H_1(M / F_v)| from the splice weights
    Integer lambda_quotient; // same, from a Smith normal form
    Integer fiber_degree;    // f = d / lambda
    Integer base_degree;     // lambda / (components over this side)
    std::optional<Rational> euler;
    std::optional<Rational> lifted_euler;  // d e / (c f^2), c = components over this side
};

// v must be an end of the split edge; side 0 is split.node0.
CoverPieceData cover_piece_data(const CoverPiece& piece, const CoverSplit& split, int side);

// Order of the meridian class of model vertex v in H_1.
Integer meridian_order(const GeneralizedPlumbing& g, std::size_t v);

enum class UacKind { Brieskorn, ConnectedSum, Split };

struct UacPlan {
    UacKind kind = UacKind::Brieskorn;
    Integer degree;  // covering degree of this piece, |H_1^orb|
    SpliceDiagram diagram;
    OrbifoldDecoration decoration;
    // one node
    std::string node;
    std::vector<Integer> exponents;  // Brieskorn exponents, or connected-sum orders
    int orientation = -1;            // sign of e; -1 is the standard orientation
    std::optional<Rational> euler;
    std::vector<Integer> degree_steps;
    Integer zero_leaf_degree = 1;  // orbifold degree on the zero-weight leaf
    // split
    std::optional<CoverSplit> split;
    std::optional<CoverPieceData> data0;
    std::optional<CoverPieceData> data1;
    std::vector<UacPlan> children;
};

UacPlan one_node_uac(const CoverPiece& piece);

struct UacOptions {
    // Index into the sorted node-edges of the top-level diagram.
    std::size_t root_edge = 0;
};

UacPlan uac_plan(const CoverPiece& piece, const UacOptions& options = {});
UacPlan uac_plan(const PlumbingDiagram& d, const UacOptions& options = {});

// Degree of the universal abelian cover of a connected sum built one summand
// at a time: deg' = n * deg / p for a sum along a sphere meeting an orbifold
// curve of degree p.
Integer connected_sum_degree(const Integer& deg, const Integer& n, const Integer& p);

bool zhs_check(const SpliceTree& g);

// Node-edges sorted by (smaller id, larger id).
std::vector<std::size_t> sorted_node_edges(const SpliceTree& g);

}  // namespace gmtk
