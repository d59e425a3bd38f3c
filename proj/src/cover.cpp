#include "gmtk/cover.hpp"

#include "gmtk/error.hpp"
#include "gmtk/invariants.hpp"

#include <algorithm>

namespace gmtk {

namespace {

// |Z^cols / projections of every relation row onto cols|.
Integer quotient_order(const GeneralizedPlumbing& g, const std::vector<std::size_t>& cols) {
    if (cols.empty()) return 1;
    const IntMatrix& r = g.relations();
    IntMatrix m(cols.size(), g.size());
    for (std::size_t i = 0; i < cols.size(); ++i)
        for (std::size_t row = 0; row < g.size(); ++row) m(i, row) = r(row, cols[i]);
    return smith_invariants(m).order;
}

std::vector<std::size_t> all_but(std::size_t n, const std::vector<std::size_t>& drop) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
        if (std::find(drop.begin(), drop.end(), i) == drop.end()) out.push_back(i);
    return out;
}

// Generator of ker(H_1(T) -> H_1(piece)) where the piece is the vertex set
// `side` and T is the torus at model edge (inner, outer), inner in `side`.
// Coordinates are (m_outer, m_inner).
std::pair<Integer, Integer> torus_kernel(const GeneralizedPlumbing& g, const std::vector<std::size_t>& side,
                                         std::size_t inner, std::size_t outer) {
    std::vector<std::size_t> cols = side;
    cols.push_back(outer);
    auto col_of = [&](std::size_t x) {
        return static_cast<std::size_t>(std::find(cols.begin(), cols.end(), x) - cols.begin());
    };
    IntMatrix k(2 + side.size(), cols.size());
    k(0, col_of(outer)) = 1;
    k(1, col_of(inner)) = 1;
    for (std::size_t i = 0; i < side.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) k(2 + i, j) = g.relations()(side[i], cols[j]);
    IntMatrix ker = left_kernel(k);
    IntMatrix proj(ker.rows(), 2);
    for (std::size_t i = 0; i < ker.rows(); ++i) {
        proj(i, 0) = ker(i, 0);
        proj(i, 1) = ker(i, 1);
    }
    IntMatrix basis = row_lattice_basis(proj);
    if (basis.rows() != 1)
        throw ConsistencyError("torus kernel has rank " + std::to_string(basis.rows()) + ", expected 1");
    Integer x = basis(0, 0), y = basis(0, 1);
    if (x < 0 || (x == 0 && y < 0)) {
        x = -x;
        y = -y;
    }
    return {x, y};
}

// Keep `near` and append the far torus vertex with the relation kx*m_near_end + ky*m_far.
GeneralizedPlumbing filled_model(const GeneralizedPlumbing& g, std::vector<std::size_t> near, std::size_t near_end,
                                 std::size_t far, const std::pair<Integer, Integer>& kernel) {
    near.push_back(far);
    std::sort(near.begin(), near.end());
    std::vector<std::size_t> at(g.size(), g.size());
    for (std::size_t i = 0; i < near.size(); ++i) at[near[i]] = i;
    std::vector<std::string> ids;
    std::vector<std::vector<std::size_t>> adj(near.size());
    IntMatrix rel(near.size(), near.size());
    for (std::size_t i = 0; i < near.size(); ++i) {
        std::size_t x = near[i];
        ids.push_back(g.id(x));
        if (x == far) {
            adj[i].push_back(at[near_end]);
            rel(i, at[near_end]) = kernel.first;
            rel(i, i) = kernel.second;
            continue;
        }
        for (std::size_t y : g.neighbors(x))
            if (at[y] != g.size()) adj[i].push_back(at[y]);
        for (std::size_t y = 0; y < g.size(); ++y)
            if (at[y] != g.size()) rel(i, at[y]) = g.relations()(x, y);
    }
    return GeneralizedPlumbing(std::move(ids), std::move(adj), std::move(rel));
}

// The near half of the diagram with the far subtree collapsed to a leaf.
SpliceDiagram collapsed_diagram(const SpliceDiagram& g, std::size_t v0, std::size_t k, const Integer& divisor,
                                const std::string& leaf_id) {
    std::size_t v1 = g.other_end(k, v0);
    auto far = g.beyond(v0, k);
    std::vector<bool> keep(g.size(), true);
    for (std::size_t x : far) keep[x] = false;
    SpliceDiagram out;
    std::vector<std::size_t> at(g.size(), g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!keep[i]) continue;
        at[i] = g.is_node(i) ? out.add_node(g.vertex(i).id, g.sign(i)) : out.add_leaf(g.vertex(i).id);
    }
    std::size_t leaf = out.add_leaf(leaf_id);
    auto scaled = [&](std::size_t x, std::size_t j) -> Integer {
        if (!g.is_node(x)) return 0;
        Integer w = g.weight_at(x, j);
        auto part = g.beyond(x, j);
        if (!std::binary_search(part.begin(), part.end(), v1)) return w;
        if (w % divisor != 0)
            throw ConsistencyError("weight " + w.get_str() + " at " + g.vertex(x).id + " is not divisible by " +
                                   divisor.get_str());
        return w / divisor;
    };
    for (std::size_t j = 0; j < g.edges().size(); ++j) {
        const auto& e = g.edge(j);
        if (j == k || !keep[e.a] || !keep[e.b]) continue;
        out.add_edge(at[e.a], at[e.b], scaled(e.a, j), scaled(e.b, j));
    }
    out.add_edge(at[v0], leaf, scaled(v0, k), 0);
    return out;
}

CoverPiece make_child(const CoverPiece& parent, GeneralizedPlumbing model, const SpliceDiagram& expected,
                      const std::string& new_leaf, const Integer& new_degree) {
    CoverPiece c;
    c.splice = derive_splice(model);
    c.model = std::move(model);
    c.order = abs(c.splice.det);
    if (c.splice.normalized.canonical_edges() != expected.canonical_edges())
        throw ConsistencyError("split piece weights from homology disagree with the divided splice weights");
    for (std::size_t v : c.splice.normalized.nodes()) {
        std::size_t pv = parent.diagram().index_of(c.splice.normalized.vertex(v).id);
        c.splice.normalized.set_sign(v, parent.diagram().sign(pv));
    }
    for (const auto& [id, deg] : parent.decoration)
        if (c.splice.normalized.find(id)) c.decoration[id] = deg;
    if (new_degree > 1) c.decoration[new_leaf] = new_degree;
    for (std::size_t l : c.splice.normalized.leaves()) {
        const std::string& id = c.splice.normalized.vertex(l).id;
        auto it = c.decoration.find(id);
        Integer want = it == c.decoration.end() ? Integer(1) : it->second;
        if (c.model.row_content(c.model.index_of(id)) != want)
            throw ConsistencyError("orbifold degree of leaf " + id + " disagrees with its relation");
    }
    return c;
}

CoverSplit split_oriented(const CoverPiece& piece, std::size_t v0, std::size_t k) {
    const SpliceDiagram& g = piece.diagram();
    if (!g.is_node_edge(k)) throw InputError("cover split needs an edge between two nodes");
    std::size_t v1 = g.other_end(k, v0);
    const GeneralizedPlumbing& m = piece.model;
    auto [a, b] = torus_edge(piece, v0, k);
    auto side1 = m.component_beyond(a, b);
    auto side0 = m.component_beyond(b, a);

    CoverSplit s;
    s.node0 = g.vertex(v0).id;
    s.node1 = g.vertex(v1).id;
    s.torus_a = m.id(a);
    s.torus_b = m.id(b);
    s.r0 = g.weight_at(v0, k);
    s.r1 = g.weight_at(v1, k);
    s.d1 = ideal_generator(m, a, b);
    s.d0 = ideal_generator(m, b, a);
    if (s.r0 % s.d1 != 0 || s.r1 % s.d0 != 0)
        throw ConsistencyError("ideal generators do not divide the cut-edge weights");
    s.kernel0 = torus_kernel(m, side1, b, a);
    s.kernel1 = torus_kernel(m, side0, a, b);
    s.p_glue0 = gcd(s.kernel0.first, s.kernel0.second);
    s.p_glue1 = gcd(s.kernel1.first, s.kernel1.second);
    s.components0 = s.d1;
    s.components1 = s.d0;
    s.tori = quotient_order(m, all_but(m.size(), {a, b}));
    if (s.tori != s.d0 * s.d1) throw ConsistencyError("torus preimage count differs from d0*d1");

    auto expected0 = collapsed_diagram(g, v0, k, s.d1, m.id(b));
    auto expected1 = collapsed_diagram(g, v1, k, s.d0, m.id(a));
    s.piece0 = make_child(piece, filled_model(m, side0, a, b, s.kernel0), expected0, m.id(b), s.p_glue0);
    s.piece1 = make_child(piece, filled_model(m, side1, b, a, s.kernel1), expected1, m.id(a), s.p_glue1);
    if (s.piece0.order * s.d1 != piece.order || s.piece1.order * s.d0 != piece.order)
        throw ConsistencyError("split piece orders do not multiply back to the total order");
    return s;
}

}  // namespace

CoverPiece piece_from_plumbing(const PlumbingDiagram& d, const OrbifoldDecoration& deco) {
    CoverPiece p;
    p.splice = splice_from_plumbing(d);
    auto check = validate_decoration(p.splice.normalized, deco);
    if (!check.ok) throw InputError(check.violations.front());
    p.model = GeneralizedPlumbing(d);
    for (const auto& [id, degree] : deco) {
        if (degree == 1) continue;
        p.model.scale_row(p.model.index_of(id), degree);
        p.decoration[id] = degree;
    }
    if (!p.decoration.empty()) {
        SpliceDiagram signs = p.splice.normalized;
        auto model_splice = derive_splice(p.model);
        p.splice.normalized = model_splice.normalized;
        p.splice.unnormalized = model_splice.unnormalized;
        p.splice.det = model_splice.det;
        p.splice.maximal.reset();
        for (std::size_t v : signs.nodes()) p.splice.normalized.set_sign(v, signs.sign(v));
    }
    p.order = abs(p.splice.det);
    return p;
}

Integer ideal_generator(const GeneralizedPlumbing& g, std::size_t a, std::size_t b) {
    const auto& n = g.neighbors(a);
    if (std::find(n.begin(), n.end(), b) == n.end())
        throw InputError("no edge " + g.id(a) + "-" + g.id(b));
    auto far = g.component_beyond(a, b);
    far.erase(std::find(far.begin(), far.end(), b));
    Integer order = quotient_order(g, far);
    if (order == 0) throw ConsistencyError("relative homology at " + g.id(a) + "-" + g.id(b) + " is infinite");
    return order;
}

Integer ideal_generator(const PlumbingDiagram& d, std::string_view a, std::string_view b) {
    GeneralizedPlumbing g(d);
    return ideal_generator(g, g.index_of(a), g.index_of(b));
}

std::pair<std::size_t, std::size_t> torus_edge(const CoverPiece& piece, std::size_t v, std::size_t k) {
    const SpliceDiagram& g = piece.diagram();
    const auto& e = g.edge(k);
    const std::string& step = e.a == v ? piece.splice.first_step_a.at(k) : piece.splice.first_step_b.at(k);
    return {piece.model.index_of(g.vertex(v).id), piece.model.index_of(step)};
}

Integer edge_ideal_generator(const CoverPiece& piece, std::size_t v, std::size_t k) {
    auto [a, b] = torus_edge(piece, v, k);
    return ideal_generator(piece.model, a, b);
}

CoverSplit split_at_edge(const CoverPiece& piece, std::size_t k, bool lower_id_first) {
    const SpliceDiagram& g = piece.diagram();
    std::size_t v0 = g.edge(k).a, v1 = g.edge(k).b;
    if ((g.vertex(v1).id < g.vertex(v0).id) == lower_id_first) v0 = v1;
    return split_oriented(piece, v0, k);
}

CoverSplit split_at_edge(const PlumbingDiagram& d, std::string_view v0, std::string_view v1) {
    CoverPiece p = piece_from_plumbing(d);
    const SpliceDiagram& g = p.diagram();
    auto a = g.find(v0), b = g.find(v1);
    if (!a || !b || !g.is_node(*a) || !g.is_node(*b))
        throw InputError("cover edge endpoints must be nodes of the splice diagram");
    auto k = g.find_edge(*a, *b);
    if (!k) throw InputError("no splice edge " + std::string(v0) + "-" + std::string(v1));
    return split_oriented(p, *a, *k);
}

Integer meridian_order(const GeneralizedPlumbing& g, std::size_t v) {
    IntMatrix m(g.size(), g.size() + 1);
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) m(j, i) = g.relations()(i, j);
    m(v, g.size()) = 1;
    Integer quotient = smith_invariants(m).order;
    return abs(g.determinant()) / quotient;
}

CoverPieceData cover_piece_data(const CoverPiece& piece, const CoverSplit& split, int side) {
    const SpliceDiagram& g = piece.diagram();
    std::size_t v = g.index_of(side == 0 ? split.node0 : split.node1);
    const Integer components = side == 0 ? split.components0 : split.components1;
    CoverPieceData out;
    out.node = g.vertex(v).id;

    std::vector<std::size_t> zeros;
    for (std::size_t j : g.incident(v))
        if (g.weight_at(v, j) == 0) zeros.push_back(j);
    if (zeros.size() > 1) throw InputError("node " + out.node + " has two zero weights");
    if (zeros.size() == 1) {
        out.lambda = edge_ideal_generator(piece, v, zeros.front()) * g.other_weights(v, zeros.front());
    } else {
        Integer all = 1, l = 1;
        for (std::size_t j : g.incident(v)) {
            const Integer& w = g.weight_at(v, j);
            Integer dj = edge_ideal_generator(piece, v, j);
            if (w % dj != 0) throw ConsistencyError("ideal generator does not divide weight at " + out.node);
            all *= w;
            l = lcm(l, w / dj);
        }
        out.lambda = all / l;
    }
    std::size_t mv = piece.model.index_of(out.node);
    out.lambda_quotient = piece.order / meridian_order(piece.model, mv);
    if (out.lambda != out.lambda_quotient)
        throw ConsistencyError("meridian quotient at " + out.node + ": formula gives " + out.lambda.get_str() +
                               ", Smith form gives " + out.lambda_quotient.get_str());
    if (piece.order % out.lambda != 0) throw ConsistencyError("lambda does not divide the order at " + out.node);
    out.fiber_degree = piece.order / out.lambda;
    if (out.lambda % components != 0)
        throw ConsistencyError("base degree at " + out.node + " is not an integer");
    out.base_degree = out.lambda / components;
    try {
        out.euler = euler_number(g, piece.order, v);
    } catch (const InputError&) {
        out.euler.reset();
    }
    if (out.euler) {
        Rational f = out.fiber_degree;
        out.lifted_euler = Rational(piece.order) * *out.euler / (Rational(components) * f * f);
    }
    return out;
}

Integer connected_sum_degree(const Integer& deg, const Integer& n, const Integer& p) {
    if (p <= 0 || (n * deg) % p != 0) throw InputError("connected sum degree: p must divide n*d");
    return n * deg / p;
}

UacPlan one_node_uac(const CoverPiece& piece) {
    const SpliceDiagram& g = piece.diagram();
    auto nodes = g.nodes();
    if (nodes.size() != 1) throw InputError("one_node_uac needs exactly one node");
    UacPlan plan;
    plan.degree = piece.order;
    plan.diagram = g;
    plan.decoration = piece.decoration;
    std::size_t v = nodes.front();
    plan.node = g.vertex(v).id;
    std::vector<Integer> nonzero;
    int zeros = 0;
    for (std::size_t k : g.incident(v)) {
        const Integer& w = g.weight_at(v, k);
        if (w != 0) {
            nonzero.push_back(w);
            continue;
        }
        ++zeros;
        auto it = piece.decoration.find(g.vertex(g.other_end(k, v)).id);
        if (it != piece.decoration.end()) plan.zero_leaf_degree = it->second;
    }
    if (zeros > 1) throw InputError("node " + plan.node + " has two zero weights");
    std::sort(nonzero.begin(), nonzero.end());
    plan.exponents = nonzero;
    if (zeros == 0) {
        plan.kind = UacKind::Brieskorn;
        plan.euler = euler_number(g, piece.order, v);
        plan.orientation = sign(*plan.euler);
        return plan;
    }
    plan.kind = UacKind::ConnectedSum;
    // The central sphere quotient is S^3 with the zero leaf's core as an
    // unknotted orbifold curve; its cover is the cyclic branched cover.
    Integer deg = plan.zero_leaf_degree;
    for (const auto& n : nonzero) {
        deg = connected_sum_degree(deg, n, 1);
        plan.degree_steps.push_back(deg);
    }
    if (deg != piece.order)
        throw ConsistencyError("connected sum degree " + deg.get_str() + " differs from |H_1| = " +
                               piece.order.get_str());
    return plan;
}

std::vector<std::size_t> sorted_node_edges(const SpliceTree& g) {
    auto ks = g.node_edges();
    auto key = [&](std::size_t k) {
        const std::string& a = g.vertex(g.edge(k).a).id;
        const std::string& b = g.vertex(g.edge(k).b).id;
        return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    };
    std::sort(ks.begin(), ks.end(), [&](std::size_t x, std::size_t y) { return key(x) < key(y); });
    return ks;
}

UacPlan uac_plan(const CoverPiece& piece, const UacOptions& options) {
    const SpliceDiagram& g = piece.diagram();
    if (g.is_atomic()) throw InputError("universal abelian cover plan needs at least one node");
    if (g.nodes().size() == 1) return one_node_uac(piece);
    auto ks = sorted_node_edges(g);
    if (options.root_edge >= ks.size()) throw InputError("root edge index out of range");
    UacPlan plan;
    plan.kind = UacKind::Split;
    plan.degree = piece.order;
    plan.diagram = g;
    plan.decoration = piece.decoration;
    CoverSplit s = split_at_edge(piece, ks[options.root_edge]);
    plan.data0 = cover_piece_data(piece, s, 0);
    plan.data1 = cover_piece_data(piece, s, 1);
    plan.children.push_back(uac_plan(s.piece0));
    plan.children.push_back(uac_plan(s.piece1));
    if (plan.children[0].degree * s.d1 != plan.degree || plan.children[1].degree * s.d0 != plan.degree)
        throw ConsistencyError("uac plan does not conserve degree");
    plan.split = std::move(s);
    return plan;
}

UacPlan uac_plan(const PlumbingDiagram& d, const UacOptions& options) {
    return uac_plan(piece_from_plumbing(d), options);
}

bool zhs_check(const SpliceTree& g) { return pairwise_coprime_at_nodes(g); }

}  // namespace gmtk
