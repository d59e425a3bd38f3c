#pragma once

#include "gmtk/exact.hpp"
#include "gmtk/plumbing.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace gmtk {

enum class VertexKind { Node, Leaf };

struct SpliceVertex {
    std::string id;
    VertexKind kind;
};

// End weights sit at node ends only; the weight stored at a leaf end is unused.
struct SpliceEdge {
    std::size_t a;
    std::size_t b;
    Integer wa;
    Integer wb;
};

// Topology and end weights shared by the normalized and unnormalized diagrams.
class SpliceTree {
public:
    std::size_t add_edge(std::size_t a, std::size_t b, Integer wa = 0, Integer wb = 0);

    std::size_t size() const { return vertices_.size(); }
    const SpliceVertex& vertex(std::size_t i) const { return vertices_[i]; }
    const std::vector<SpliceVertex>& vertices() const { return vertices_; }
    bool is_node(std::size_t i) const { return vertices_[i].kind == VertexKind::Node; }
    bool is_leaf(std::size_t i) const { return vertices_[i].kind == VertexKind::Leaf; }
    // A diagram without nodes stands for a lens space (or S^3).
    bool is_atomic() const;
    std::vector<std::size_t> nodes() const;
    std::vector<std::size_t> leaves() const;

    const std::vector<SpliceEdge>& edges() const { return edges_; }
    const SpliceEdge& edge(std::size_t k) const { return edges_[k]; }
    const std::vector<std::size_t>& incident(std::size_t v) const { return incident_[v]; }
    std::size_t other_end(std::size_t k, std::size_t v) const;
    bool is_node_edge(std::size_t k) const { return is_node(edges_[k].a) && is_node(edges_[k].b); }
    std::vector<std::size_t> node_edges() const;
    std::optional<std::size_t> find_edge(std::size_t a, std::size_t b) const;

    const Integer& weight_at(std::size_t v, std::size_t k) const;
    void set_weight_at(std::size_t v, std::size_t k, Integer w);
    // Product of the weights at v on every edge except k.
    Integer other_weights(std::size_t v, std::size_t k) const;
    // Product of the weights at v on leaf edges.
    Integer leaf_weight_product(std::size_t v) const;
    std::vector<Integer> weights_at(std::size_t v) const;

    std::optional<std::size_t> find(std::string_view id) const;
    std::size_t index_of(std::string_view id) const;

    // Vertices of the component of the tree minus v that contains the far end of k.
    std::vector<std::size_t> beyond(std::size_t v, std::size_t k) const;
    // Vertex path from v to w inclusive.
    std::vector<std::size_t> path(std::size_t v, std::size_t w) const;

    // Order-independent comparison key: one tuple (id, id, weight, weight) per edge.
    std::vector<std::tuple<std::string, std::string, std::string, std::string>> canonical_edges() const;

protected:
    std::size_t add_vertex(std::string id, VertexKind kind);

    std::vector<SpliceVertex> vertices_;
    std::vector<SpliceEdge> edges_;
    std::vector<std::vector<std::size_t>> incident_;
};

class SpliceDiagram : public SpliceTree {
public:
    std::size_t add_node(std::string id, int sign = 1);
    std::size_t add_leaf(std::string id);
    int sign(std::size_t v) const { return signs_[v]; }
    void set_sign(std::size_t v, int s) { signs_[v] = s; }
    bool operator==(const SpliceDiagram& o) const;

private:
    std::vector<int> signs_;
};

// Signed weights, no node signs.
class UnnormalizedSpliceDiagram : public SpliceTree {
public:
    std::size_t add_node(std::string id) { return add_vertex(std::move(id), VertexKind::Node); }
    std::size_t add_leaf(std::string id) { return add_vertex(std::move(id), VertexKind::Leaf); }
    bool operator==(const UnnormalizedSpliceDiagram& o) const { return canonical_edges() == o.canonical_edges(); }
};

// Whole plumbing tree with an integer weight at every (vertex, edge) end.
class MaximalSpliceDiagram {
public:
    struct End {
        std::size_t a;
        std::size_t b;
        Integer wa;
        Integer wb;
    };
    std::vector<std::string> ids;
    std::vector<End> edges;

    // Drop valence-two vertices and the decorations next to valence-one vertices.
    UnnormalizedSpliceDiagram erase() const;
};

// Leaf id -> orbifold degree. Missing leaves have degree 1.
using OrbifoldDecoration = std::map<std::string, Integer, std::less<>>;

struct SpliceDerivation {
    SpliceDiagram normalized;
    UnnormalizedSpliceDiagram unnormalized;
    std::optional<MaximalSpliceDiagram> maximal;
    Integer det;  // det(-A), signed
    // Per splice edge, the plumbing vertex ids strictly between its ends, read from a to b.
    std::vector<std::vector<std::string>> interiors;
    // Per splice edge, the plumbing neighbour of a (resp. b) that starts the string.
    std::vector<std::string> first_step_a;
    std::vector<std::string> first_step_b;
};

SpliceDerivation derive_splice(const GeneralizedPlumbing& g);
SpliceDerivation splice_from_plumbing(const PlumbingDiagram& d);

// D = r0 r1 - e0 e1 N0 N1 on a node-edge.
Integer edge_determinant(const SpliceDiagram& g, std::size_t k);
// D~ = r0 r1 - N0 N1.
Integer edge_determinant(const UnnormalizedSpliceDiagram& g, std::size_t k);

struct SpliceValidation {
    bool ok = true;
    std::vector<std::string> violations;
};

// Zero leaf weights are allowed only for pieces produced by cover splitting.
SpliceValidation validate_splice(const SpliceDiagram& g, bool allow_zero_leaf = false);
SpliceValidation validate_decoration(const SpliceDiagram& g, const OrbifoldDecoration& deco);

// Whether the end weight at v on edge k sees the given leaf.
bool sees(const SpliceTree& g, std::size_t v, std::size_t k, std::size_t leaf);

// Product of the weights adjacent to, but not on, the path from v to w.
Integer linking_product(const SpliceTree& g, std::size_t v, std::size_t w);

bool pairwise_coprime_at_nodes(const SpliceTree& g);

struct OrbifoldAdjustment {
    SpliceDiagram diagram;
    Integer degree_product;
};

OrbifoldAdjustment orbifold_adjust(const SpliceDiagram& g, const OrbifoldDecoration& deco);

// Three-node figure: A(+) leaves 3,5; B(-) leaf 7; C(+) leaves 3,2; A-B weights 22,10; B-C weights 2,6.
SpliceDiagram sample_three_node_diagram();

}  // namespace gmtk
