#include "gmtk/splice.hpp"

#include "gmtk/error.hpp"

#include <algorithm>
#include <set>

namespace gmtk {

std::size_t SpliceTree::add_vertex(std::string id, VertexKind kind) {
    if (find(id)) throw InputError("duplicate splice vertex id '" + id + "'");
    vertices_.push_back({std::move(id), kind});
    incident_.emplace_back();
    return vertices_.size() - 1;
}

std::size_t SpliceTree::add_edge(std::size_t a, std::size_t b, Integer wa, Integer wb) {
    if (a >= size() || b >= size() || a == b) throw InputError("invalid splice edge");
    edges_.push_back({a, b, std::move(wa), std::move(wb)});
    std::size_t k = edges_.size() - 1;
    incident_[a].push_back(k);
    incident_[b].push_back(k);
    return k;
}

bool SpliceTree::is_atomic() const { return nodes().empty(); }

std::vector<std::size_t> SpliceTree::nodes() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i)
        if (is_node(i)) out.push_back(i);
    return out;
}

std::vector<std::size_t> SpliceTree::leaves() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i)
        if (is_leaf(i)) out.push_back(i);
    return out;
}

std::size_t SpliceTree::other_end(std::size_t k, std::size_t v) const {
    const auto& e = edges_[k];
    if (e.a == v) return e.b;
    if (e.b == v) return e.a;
    throw InputError("edge is not incident to vertex " + vertices_[v].id);
}

std::vector<std::size_t> SpliceTree::node_edges() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < edges_.size(); ++k)
        if (is_node_edge(k)) out.push_back(k);
    return out;
}

std::optional<std::size_t> SpliceTree::find_edge(std::size_t a, std::size_t b) const {
    for (std::size_t k : incident_[a])
        if (other_end(k, a) == b) return k;
    return std::nullopt;
}

const Integer& SpliceTree::weight_at(std::size_t v, std::size_t k) const {
    if (!is_node(v)) throw InputError("leaf " + vertices_[v].id + " carries no end weight");
    const auto& e = edges_[k];
    if (e.a == v) return e.wa;
    if (e.b == v) return e.wb;
    throw InputError("edge is not incident to vertex " + vertices_[v].id);
}

void SpliceTree::set_weight_at(std::size_t v, std::size_t k, Integer w) {
    auto& e = edges_[k];
    if (e.a == v)
        e.wa = std::move(w);
    else if (e.b == v)
        e.wb = std::move(w);
    else
        throw InputError("edge is not incident to vertex " + vertices_[v].id);
}

Integer SpliceTree::other_weights(std::size_t v, std::size_t k) const {
    Integer p = 1;
    for (std::size_t j : incident_[v])
        if (j != k) p *= weight_at(v, j);
    return p;
}

Integer SpliceTree::leaf_weight_product(std::size_t v) const {
    Integer p = 1;
    for (std::size_t j : incident_[v])
        if (is_leaf(other_end(j, v))) p *= weight_at(v, j);
    return p;
}

std::vector<Integer> SpliceTree::weights_at(std::size_t v) const {
    std::vector<Integer> out;
    for (std::size_t j : incident_[v]) out.push_back(weight_at(v, j));
    return out;
}

std::optional<std::size_t> SpliceTree::find(std::string_view id) const {
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        if (vertices_[i].id == id) return i;
    return std::nullopt;
}

std::size_t SpliceTree::index_of(std::string_view id) const {
    auto i = find(id);
    if (!i) throw InputError("unknown splice vertex '" + std::string(id) + "'");
    return *i;
}

std::vector<std::size_t> SpliceTree::beyond(std::size_t v, std::size_t k) const {
    std::vector<bool> mark(size(), false);
    mark[v] = true;
    std::size_t start = other_end(k, v);
    mark[start] = true;
    std::vector<std::size_t> stack{start}, out;
    while (!stack.empty()) {
        std::size_t x = stack.back();
        stack.pop_back();
        out.push_back(x);
        for (std::size_t j : incident_[x]) {
            std::size_t y = other_end(j, x);
            if (!mark[y]) {
                mark[y] = true;
                stack.push_back(y);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> SpliceTree::path(std::size_t v, std::size_t w) const {
    std::vector<std::size_t> parent(size(), size());
    parent[v] = v;
    std::vector<std::size_t> queue{v};
    for (std::size_t h = 0; h < queue.size(); ++h) {
        std::size_t x = queue[h];
        for (std::size_t j : incident_[x]) {
            std::size_t y = other_end(j, x);
            if (parent[y] == size()) {
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    if (parent[w] == size()) throw InputError("splice diagram is not connected");
    std::vector<std::size_t> out{w};
    while (out.back() != v) out.push_back(parent[out.back()]);
    std::reverse(out.begin(), out.end());
    return out;
}

std::vector<std::tuple<std::string, std::string, std::string, std::string>> SpliceTree::canonical_edges() const {
    std::vector<std::tuple<std::string, std::string, std::string, std::string>> out;
    for (const auto& e : edges_) {
        std::string ia = vertices_[e.a].id, ib = vertices_[e.b].id;
        std::string wa = is_node(e.a) ? e.wa.get_str() : "-";
        std::string wb = is_node(e.b) ? e.wb.get_str() : "-";
        if (ib < ia) {
            std::swap(ia, ib);
            std::swap(wa, wb);
        }
        out.emplace_back(ia, ib, wa, wb);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t SpliceDiagram::add_node(std::string id, int s) {
    if (s != 1 && s != -1) throw InputError("node sign must be +1 or -1");
    std::size_t i = add_vertex(std::move(id), VertexKind::Node);
    signs_.resize(size(), 1);
    signs_[i] = s;
    return i;
}

std::size_t SpliceDiagram::add_leaf(std::string id) {
    std::size_t i = add_vertex(std::move(id), VertexKind::Leaf);
    signs_.resize(size(), 1);
    return i;
}

bool SpliceDiagram::operator==(const SpliceDiagram& o) const {
    if (canonical_edges() != o.canonical_edges() || size() != o.size()) return false;
    for (std::size_t i = 0; i < size(); ++i) {
        auto j = o.find(vertex(i).id);
        if (!j || o.vertex(*j).kind != vertex(i).kind) return false;
        if (is_node(i) && o.sign(*j) != sign(i)) return false;
    }
    return true;
}

UnnormalizedSpliceDiagram MaximalSpliceDiagram::erase() const {
    const std::size_t n = ids.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& e : edges) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    auto weight = [&](std::size_t a, std::size_t b) -> const Integer& {
        for (const auto& e : edges) {
            if (e.a == a && e.b == b) return e.wa;
            if (e.b == a && e.a == b) return e.wb;
        }
        throw InputError("maximal diagram: missing edge");
    };
    UnnormalizedSpliceDiagram out;
    std::vector<std::size_t> node_count;
    for (std::size_t i = 0; i < n; ++i)
        if (adj[i].size() >= 3) node_count.push_back(i);
    if (node_count.empty()) return out;
    std::vector<std::size_t> at(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (adj[i].size() >= 3)
            at[i] = out.add_node(ids[i]);
        else if (adj[i].size() == 1)
            at[i] = out.add_leaf(ids[i]);
    }
    std::set<std::pair<std::size_t, std::size_t>> done;
    for (std::size_t v : node_count) {
        for (std::size_t u : adj[v]) {
            if (done.count({v, u})) continue;
            std::size_t prev = v, cur = u;
            while (adj[cur].size() == 2) {
                std::size_t next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
                prev = cur;
                cur = next;
            }
            if (adj[cur].size() == 1) {
                out.add_edge(at[v], at[cur], weight(v, u), 0);
            } else {
                out.add_edge(at[v], at[cur], weight(v, u), weight(cur, prev));
                done.insert({cur, prev});
            }
        }
    }
    return out;
}

SpliceDerivation derive_splice(const GeneralizedPlumbing& g) {
    SpliceDerivation out;
    out.det = g.determinant();
    if (out.det == 0) throw InputError("det(-A) = 0: not a rational homology sphere");
    const std::size_t n = g.size();
    std::vector<std::size_t> nodes;
    for (std::size_t i = 0; i < n; ++i)
        if (g.valence(i) >= 3) nodes.push_back(i);
    if (nodes.empty()) return out;

    std::vector<std::size_t> at(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (g.valence(i) >= 3) {
            at[i] = out.unnormalized.add_node(g.id(i));
            out.normalized.add_node(g.id(i));
        } else if (g.valence(i) == 1) {
            at[i] = out.unnormalized.add_leaf(g.id(i));
            out.normalized.add_leaf(g.id(i));
        }
    }
    std::set<std::pair<std::size_t, std::size_t>> done;
    for (std::size_t v : nodes) {
        for (std::size_t u : g.neighbors(v)) {
            if (done.count({v, u})) continue;
            StringWalk w = g.walk_string(v, u);
            Integer wv = g.piece_determinant(g.component_beyond(v, u));
            std::size_t back = w.interior.empty() ? v : w.interior.back();
            Integer wb = 0;
            if (g.valence(w.end) >= 3) {
                wb = g.piece_determinant(g.component_beyond(w.end, back));
                done.insert({w.end, back});
            }
            out.unnormalized.add_edge(at[v], at[w.end], wv, wb);
            out.normalized.add_edge(at[v], at[w.end], abs(wv), abs(wb));
            std::vector<std::string> interior;
            for (std::size_t i : w.interior) interior.push_back(g.id(i));
            out.interiors.push_back(std::move(interior));
            out.first_step_a.push_back(g.id(u));
            out.first_step_b.push_back(g.id(back));
        }
    }
    const int ds = sign(out.det);
    for (std::size_t v : out.normalized.nodes()) {
        int s = ds;
        for (std::size_t k : out.unnormalized.incident(v)) s *= sign_or_plus(out.unnormalized.weight_at(v, k));
        out.normalized.set_sign(v, s);
    }
    return out;
}

SpliceDerivation splice_from_plumbing(const PlumbingDiagram& d) {
    auto nf = validate_normal_form(d);
    if (!nf.ok) throw InputError("plumbing is not in normal form: " + nf.violations.front());
    GeneralizedPlumbing g(d);
    SpliceDerivation out = derive_splice(g);
    MaximalSpliceDiagram m;
    for (const auto& v : d.vertices()) m.ids.push_back(v.id);
    for (auto [a, b] : d.edges())
        m.edges.push_back({a, b, g.piece_determinant(g.component_beyond(a, b)),
                           g.piece_determinant(g.component_beyond(b, a))});
    out.maximal = std::move(m);
    return out;
}

namespace {

void require_node_edge(const SpliceTree& g, std::size_t k) {
    if (k >= g.edges().size()) throw InputError("edge index out of range");
    if (!g.is_node_edge(k)) throw InputError("edge determinant needs an edge between two nodes");
}

}  // namespace

Integer edge_determinant(const SpliceDiagram& g, std::size_t k) {
    require_node_edge(g, k);
    const auto& e = g.edge(k);
    return e.wa * e.wb - g.sign(e.a) * g.sign(e.b) * g.other_weights(e.a, k) * g.other_weights(e.b, k);
}

Integer edge_determinant(const UnnormalizedSpliceDiagram& g, std::size_t k) {
    require_node_edge(g, k);
    const auto& e = g.edge(k);
    return e.wa * e.wb - g.other_weights(e.a, k) * g.other_weights(e.b, k);
}

SpliceValidation validate_splice(const SpliceDiagram& g, bool allow_zero_leaf) {
    SpliceValidation r;
    auto flag = [&](std::string m) {
        r.ok = false;
        r.violations.push_back(std::move(m));
    };
    if (g.size() == 0) return r;
    if (g.edges().size() + 1 != g.size()) flag("splice diagram is not a tree");
    if (r.ok) {
        std::size_t reached = 1;
        for (std::size_t k : g.incident(0)) reached += g.beyond(0, k).size();
        if (reached != g.size()) flag("splice diagram is not connected");
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto& id = g.vertex(i).id;
        std::size_t val = g.incident(i).size();
        if (g.is_leaf(i) && val != 1) flag("leaf " + id + " has valence " + std::to_string(val));
        if (g.is_node(i) && val < 3) flag("node " + id + " has valence " + std::to_string(val));
        if (!g.is_node(i)) continue;
        if (g.sign(i) != 1 && g.sign(i) != -1) flag("node " + id + " has no sign");
        int zeros = 0;
        for (std::size_t k : g.incident(i)) {
            const Integer& w = g.weight_at(i, k);
            std::string where = "weight at " + id + " toward " + g.vertex(g.other_end(k, i)).id;
            if (w < 0) flag(where + " is negative");
            if (w == 0) {
                ++zeros;
                if (g.is_leaf(g.other_end(k, i)) && !allow_zero_leaf) flag(where + " is a zero leaf weight");
            }
        }
        if (zeros > 1) flag("node " + id + " has " + std::to_string(zeros) + " zero weights");
    }
    return r;
}

SpliceValidation validate_decoration(const SpliceDiagram& g, const OrbifoldDecoration& deco) {
    SpliceValidation r;
    for (const auto& [id, degree] : deco) {
        auto i = g.find(id);
        if (!i || !g.is_leaf(*i)) {
            r.ok = false;
            r.violations.push_back("decoration names '" + id + "', which is not a leaf");
            continue;
        }
        if (degree < 1) {
            r.ok = false;
            r.violations.push_back("leaf " + id + " has orbifold degree " + degree.get_str() + " < 1");
        }
        std::size_t k = g.incident(*i).front();
        if (degree > 1 && g.weight_at(g.other_end(k, *i), k) == 0) {
            r.ok = false;
            r.violations.push_back("zero-weight leaf " + id + " carries orbifold degree " + degree.get_str());
        }
    }
    return r;
}

bool sees(const SpliceTree& g, std::size_t v, std::size_t k, std::size_t leaf) {
    auto part = g.beyond(v, k);
    return std::binary_search(part.begin(), part.end(), leaf);
}

Integer linking_product(const SpliceTree& g, std::size_t v, std::size_t w) {
    if (v == w) return product(g.weights_at(v));
    auto p = g.path(v, w);
    Integer prod = 1;
    for (std::size_t i = 0; i < p.size(); ++i) {
        std::size_t x = p[i];
        if (!g.is_node(x)) continue;
        for (std::size_t k : g.incident(x)) {
            std::size_t y = g.other_end(k, x);
            bool on_path = (i > 0 && y == p[i - 1]) || (i + 1 < p.size() && y == p[i + 1]);
            if (!on_path) prod *= g.weight_at(x, k);
        }
    }
    return prod;
}

bool pairwise_coprime_at_nodes(const SpliceTree& g) {
    for (std::size_t v : g.nodes()) {
        auto ws = g.weights_at(v);
        for (std::size_t i = 0; i < ws.size(); ++i)
            for (std::size_t j = i + 1; j < ws.size(); ++j)
                if (gcd(ws[i], ws[j]) != 1) return false;
    }
    return true;
}

OrbifoldAdjustment orbifold_adjust(const SpliceDiagram& g, const OrbifoldDecoration& deco) {
    auto check = validate_decoration(g, deco);
    if (!check.ok) throw InputError(check.violations.front());
    OrbifoldAdjustment out{g, 1};
    for (const auto& [id, degree] : deco) {
        std::size_t leaf = g.index_of(id);
        out.degree_product *= degree;
        for (std::size_t v : g.nodes())
            for (std::size_t k : g.incident(v))
                if (sees(g, v, k, leaf)) out.diagram.set_weight_at(v, k, out.diagram.weight_at(v, k) * degree);
    }
    return out;
}

SpliceDiagram sample_three_node_diagram() {
    SpliceDiagram g;
    std::size_t a = g.add_node("A", 1);
    std::size_t b = g.add_node("B", -1);
    std::size_t c = g.add_node("C", 1);
    std::size_t a1 = g.add_leaf("a1"), a2 = g.add_leaf("a2");
    std::size_t b1 = g.add_leaf("b1");
    std::size_t c1 = g.add_leaf("c1"), c2 = g.add_leaf("c2");
    g.add_edge(a, a1, 3);
    g.add_edge(a, a2, 5);
    g.add_edge(a, b, 22, 10);
    g.add_edge(b, b1, 7);
    g.add_edge(b, c, 2, 6);
    g.add_edge(c, c1, 3);
    g.add_edge(c, c2, 2);
    return g;
}

}  // namespace gmtk
