#include "gmtk/singularity.hpp"

#include "gmtk/error.hpp"

#include <map>

namespace gmtk {

SingularityVerdict splice_condition(const SpliceDiagram& g) {
    if (g.is_atomic()) throw InputError("splice condition on an atomic diagram");
    for (std::size_t v : g.nodes())
        if (g.sign(v) < 0) return {false, NegativeNode{g.vertex(v).id}};
    for (std::size_t k : g.node_edges()) {
        Integer det = edge_determinant(g, k);
        if (det <= 0) return {false, NonPositiveEdge{g.vertex(g.edge(k).a).id, g.vertex(g.edge(k).b).id, det}};
    }
    return {true, {}};
}

EliminationTranscript end_node_reduction(const SpliceDiagram& g, const Integer& d) {
    DecompositionGraph dg = decomposition_graph(g, d);
    const std::size_t n = dg.nodes.size();
    std::vector<Rational> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = dg.nodes[i].euler;
    // neighbour -> (off-diagonal entry, splice edge index)
    std::vector<std::map<std::size_t, std::pair<Rational, std::size_t>>> adj(n);
    std::vector<std::size_t> original_degree(n, 0);
    auto node_edges = g.node_edges();
    for (std::size_t t = 0; t < dg.edges.size(); ++t) {
        const auto& e = dg.edges[t];
        adj[e.a][e.b] = {1 / e.pairing, node_edges[t]};
        adj[e.b][e.a] = {1 / e.pairing, node_edges[t]};
        ++original_degree[e.a];
        ++original_degree[e.b];
    }
    std::vector<std::size_t> splice_index;
    for (std::size_t v : g.nodes()) splice_index.push_back(v);

    EliminationTranscript tr;
    std::vector<bool> alive(n, true);
    for (std::size_t round = 0; round < n; ++round) {
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!alive[i] || adj[i].size() > 1) continue;
            if (pick == n || dg.nodes[i].id < dg.nodes[pick].id) pick = i;
        }
        if (pick == n) throw InputError("decomposition graph is not a tree");
        EliminationStep step;
        step.node = dg.nodes[pick].id;
        step.pivot = diag[pick];
        alive[pick] = false;
        if (!adj[pick].empty()) {
            auto [nb, entry] = *adj[pick].begin();
            step.neighbor = dg.nodes[nb].id;
            step.neighbor_before = diag[nb];
            if (step.pivot < 0) {
                diag[nb] -= entry.first * entry.first / step.pivot;
                step.neighbor_after = diag[nb];
            }
            if (original_degree[pick] == 1 && step.pivot != 0) {
                std::size_t v = splice_index[pick];
                std::size_t k = entry.second;
                std::size_t u = g.other_end(k, v);
                Integer big_d = edge_determinant(g, k);
                Integer s = g.weight_at(u, k);
                Integer leaf = g.other_weights(v, k);
                int eps = g.sign(v);
                Rational ord = abs(d);
                Rational expected_pivot = -Rational(eps * s) * ord / Rational(big_d * leaf);
                Rational expected_update = *step.neighbor_before + Rational(eps * leaf) * ord / Rational(big_d * s);
                Rational update = *step.neighbor_before - entry.first * entry.first / step.pivot;
                if (expected_pivot != step.pivot || expected_update != update)
                    throw ConsistencyError("end-node reduction at " + step.node + " disagrees with its closed form");
                step.closed_form_checked = true;
            }
            adj[nb].erase(pick);
            adj[pick].clear();
        }
        tr.steps.push_back(step);
        if (step.pivot >= 0) {
            tr.negative_definite = false;
            break;
        }
    }
    return tr;
}

LinkVerdict is_singularity_link(const PlumbingDiagram& d) {
    SpliceDerivation s = splice_from_plumbing(d);
    const SpliceDiagram& g = s.normalized;
    if (g.is_atomic()) throw InputError("plumbing has no node; the splice diagram is atomic");
    Integer order = abs(s.det);
    LinkVerdict out;
    SingularityVerdict sc = splice_condition(g);
    out.splice_route = sc.verdict;
    DecompositionGraph dg = decomposition_graph(g, order);
    RatMatrix reduced = dg.reduced_matrix();
    out.reduced_route = is_positive_definite(-reduced);
    EliminationTranscript tr = end_node_reduction(g, order);
    out.reduction_route = tr.negative_definite;
    out.plumbing_route = is_positive_definite(-intersection_matrix(d));
    out.route_agreement = out.splice_route == out.reduced_route && out.reduced_route == out.reduction_route &&
                          out.reduction_route == out.plumbing_route;
    out.verdict = out.splice_route;
    if (!sc.verdict) {
        out.certificate = sc.certificate;
    } else {
        DefinitenessWitness w{tr, {}};
        IntMatrix scaled(reduced.rows(), reduced.cols());
        Integer den = 1;
        for (std::size_t i = 0; i < reduced.rows(); ++i)
            for (std::size_t j = 0; j < reduced.cols(); ++j) den = lcm(den, reduced(i, j).get_den());
        for (std::size_t i = 0; i < reduced.rows(); ++i)
            for (std::size_t j = 0; j < reduced.cols(); ++j) scaled(i, j) = Rational(-reduced(i, j) * den).get_num();
        for (const auto& m : leading_principal_minors(scaled)) w.minor_signs.push_back(sign(m));
        out.certificate = w;
    }
    return out;
}

}  // namespace gmtk
