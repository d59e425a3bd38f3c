#include "gmtk/invariants.hpp"

#include "gmtk/error.hpp"

#include <algorithm>

namespace gmtk {

namespace {

void require_node(const SpliceTree& g, std::size_t v) {
    if (v >= g.size()) throw InputError("vertex index out of range");
    if (!g.is_node(v)) throw InputError(g.vertex(v).id + " is not a node");
}

}  // namespace

Rational orbifold_euler_char(const SpliceDiagram& g, std::size_t v) {
    if (g.is_atomic()) throw InputError("orbifold Euler characteristic of an atomic diagram");
    require_node(g, v);
    Rational chi = 2 - static_cast<long>(g.incident(v).size());
    for (std::size_t k : g.incident(v)) {
        if (!g.is_leaf(g.other_end(k, v))) continue;
        const Integer& w = g.weight_at(v, k);
        if (w == 0) throw InputError("zero leaf weight at " + g.vertex(v).id);
        chi += make_rational(1, w);
    }
    return chi;
}

Rational euler_number(const SpliceDiagram& g, const Integer& d, std::size_t v, std::optional<std::size_t> first_edge) {
    require_node(g, v);
    if (d == 0) throw InputError("euler_number needs a nonzero order");
    const Integer order = abs(d);
    const int eps = g.sign(v);
    std::vector<std::size_t> node_edges;
    std::optional<std::size_t> zero;
    for (std::size_t k : g.incident(v)) {
        const Integer& w = g.weight_at(v, k);
        bool to_node = g.is_node(g.other_end(k, v));
        if (w == 0) {
            if (zero) throw InputError("node " + g.vertex(v).id + " has two zero weights");
            if (!to_node) throw InputError("node " + g.vertex(v).id + " has a zero leaf weight");
            zero = k;
        }
        if (to_node) node_edges.push_back(k);
    }
    const Integer n_leaf = g.leaf_weight_product(v);
    if (node_edges.empty()) return Rational(-order * eps) / Rational(n_leaf);

    std::size_t one = node_edges.front();
    if (zero) {
        if (first_edge && *first_edge != *zero)
            throw InputError("a zero weight must sit on the distinguished edge");
        one = *zero;
    } else if (first_edge) {
        if (std::find(node_edges.begin(), node_edges.end(), *first_edge) == node_edges.end())
            throw InputError("distinguished edge is not a node-edge at " + g.vertex(v).id);
        one = *first_edge;
    }

    Integer r_rest = 1;
    for (std::size_t k : node_edges)
        if (k != one) r_rest *= g.weight_at(v, k);

    auto far = [&](std::size_t k) { return g.other_end(k, v); };
    Integer d1 = edge_determinant(g, one);
    if (d1 == 0) throw ConsistencyError("vanishing edge determinant at " + g.vertex(v).id);
    Rational total = Rational(eps * g.weight_at(far(one), one)) / Rational(n_leaf * d1 * r_rest);
    for (std::size_t k : node_edges) {
        if (k == one) continue;
        Integer di = edge_determinant(g, k);
        if (di == 0) throw ConsistencyError("vanishing edge determinant at " + g.vertex(v).id);
        std::size_t u = far(k);
        total += Rational(g.sign(u) * g.other_weights(u, k)) / Rational(g.weight_at(v, k) * di);
    }
    return -Rational(order) * total;
}

Rational fiber_pairing(const SpliceDiagram& g, const Integer& d, std::size_t k) {
    if (d == 0) throw InputError("fiber_pairing needs a nonzero order");
    return make_rational(abs(edge_determinant(g, k)), abs(d));
}

Rational fiber_pairing(const UnnormalizedSpliceDiagram& g, const Integer& det, std::size_t k) {
    if (det == 0) throw InputError("fiber_pairing needs a nonzero determinant");
    return make_rational(edge_determinant(g, k), det);
}

Rational fiber_pairing(const SpliceDerivation& s, std::size_t k) {
    Rational a = fiber_pairing(s.normalized, s.det, k);
    Rational b = fiber_pairing(s.unnormalized, s.det, k);
    if (a != b)
        throw ConsistencyError("fiber pairing routes disagree: |D|/d = " + to_string(a) + ", D~/det = " + to_string(b));
    return a;
}

Rational linking_number(const PlumbingDiagram& d, std::string_view v, std::string_view w) {
    IntMatrix a = intersection_matrix(d);
    Integer det = determinant(a);
    if (det == 0) throw InputError("intersection matrix is singular");
    std::size_t i = d.index_of(v), j = d.index_of(w);
    return -make_rational(cofactor(a, j, i), det);
}

RatMatrix DecompositionGraph::reduced_matrix() const {
    RatMatrix m(nodes.size(), nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) m(i, i) = nodes[i].euler;
    for (const auto& e : edges) {
        Rational x = 1 / e.pairing;
        m(e.a, e.b) = x;
        m(e.b, e.a) = x;
    }
    return m;
}

DecompositionGraph decomposition_graph(const SpliceDiagram& g, const Integer& d) {
    if (g.is_atomic()) throw InputError("decomposition graph of an atomic diagram");
    DecompositionGraph out;
    std::vector<std::size_t> at(g.size(), g.size());
    for (std::size_t v : g.nodes()) {
        at[v] = out.nodes.size();
        out.nodes.push_back({g.vertex(v).id, euler_number(g, d, v), orbifold_euler_char(g, v)});
    }
    for (std::size_t k : g.node_edges()) {
        const auto& e = g.edge(k);
        out.edges.push_back({at[e.a], at[e.b], fiber_pairing(g, d, k)});
    }
    return out;
}

}  // namespace gmtk
