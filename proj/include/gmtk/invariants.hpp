#pragma once

#include "gmtk/exact.hpp"
#include "gmtk/linalg.hpp"
#include "gmtk/plumbing.hpp"
#include "gmtk/splice.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gmtk {

// 2 - n(v) + sum over leaf edges of 1/d.
Rational orbifold_euler_char(const SpliceDiagram& g, std::size_t v);

// Euler number of the Seifert piece at node v of a diagram with |H_1| = d.
// A zero weight at v forces its edge to be the distinguished one; otherwise
// first_edge picks it (default: the first node-edge at v).
Rational euler_number(const SpliceDiagram& g, const Integer& d, std::size_t v,
                      std::optional<std::size_t> first_edge = std::nullopt);

// |D| / d.
Rational fiber_pairing(const SpliceDiagram& g, const Integer& d, std::size_t k);
// D~ / det(-A), signed.
Rational fiber_pairing(const UnnormalizedSpliceDiagram& g, const Integer& det, std::size_t k);
// Both routes; throws ConsistencyError if they differ.
Rational fiber_pairing(const SpliceDerivation& s, std::size_t k);

// -(A^{-1})_{vw}.
Rational linking_number(const PlumbingDiagram& d, std::string_view v, std::string_view w);

struct DecompositionNode {
    std::string id;
    Rational euler;
    Rational orbifold_euler_char;
};

struct DecompositionEdge {
    std::size_t a;  // indices into nodes
    std::size_t b;
    Rational pairing;
};

struct DecompositionGraph {
    std::vector<DecompositionNode> nodes;
    std::vector<DecompositionEdge> edges;
    // Diagonal e_v, off-diagonal 1/p on decomposition edges.
    RatMatrix reduced_matrix() const;
};

DecompositionGraph decomposition_graph(const SpliceDiagram& g, const Integer& d);

}  // namespace gmtk
