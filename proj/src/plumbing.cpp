#include "gmtk/plumbing.hpp"

#include "gmtk/error.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace gmtk {

std::size_t PlumbingDiagram::add_vertex(std::string id, Integer weight) {
    if (id.empty()) throw InputError("empty vertex id");
    if (index_.count(id)) throw InputError("duplicate vertex id '" + id + "'");
    std::size_t i = vertices_.size();
    index_.emplace(id, i);
    vertices_.push_back({std::move(id), std::move(weight)});
    adjacency_.emplace_back();
    return i;
}

void PlumbingDiagram::add_edge(std::string_view a, std::string_view b) {
    add_edge(index_of(a), index_of(b));
}

void PlumbingDiagram::add_edge(std::size_t a, std::size_t b) {
    edges_.emplace_back(a, b);
    adjacency_[a].push_back(b);
    if (a != b) adjacency_[b].push_back(a);
}

std::optional<std::size_t> PlumbingDiagram::find(std::string_view id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t PlumbingDiagram::index_of(std::string_view id) const {
    auto i = find(id);
    if (!i) throw InputError("unknown vertex id '" + std::string(id) + "'");
    return *i;
}

bool PlumbingDiagram::adjacent(std::size_t a, std::size_t b) const {
    const auto& n = adjacency_[a];
    return std::find(n.begin(), n.end(), b) != n.end();
}

bool PlumbingDiagram::operator==(const PlumbingDiagram& o) const {
    if (size() != o.size() || edges_.size() != o.edges_.size()) return false;
    for (std::size_t i = 0; i < size(); ++i)
        if (vertices_[i].id != o.vertices_[i].id || vertices_[i].weight != o.vertices_[i].weight) return false;
    auto canon = [](std::vector<std::pair<std::size_t, std::size_t>> es) {
        for (auto& e : es)
            if (e.first > e.second) std::swap(e.first, e.second);
        std::sort(es.begin(), es.end());
        return es;
    };
    return canon(edges_) == canon(o.edges_);
}

NormalFormReport validate_normal_form(const PlumbingDiagram& d) {
    NormalFormReport r;
    auto flag = [&](std::string msg) {
        r.ok = false;
        r.violations.push_back(std::move(msg));
    };
    const std::size_t n = d.size();
    if (n == 0) {
        flag("empty diagram");
        return r;
    }
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (auto [a, b] : d.edges()) {
        const std::string name = d.vertex(a).id + "-" + d.vertex(b).id;
        if (a == b) {
            flag("edge " + name + " is a loop");
            continue;
        }
        auto key = std::minmax(a, b);
        if (!seen.insert(key).second) flag("edge " + name + " is repeated and closes a cycle");
    }
    // Union-find over edges to detect cycles and connectivity.
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::set<std::pair<std::size_t, std::size_t>> distinct;
    for (auto [a, b] : d.edges()) {
        if (a == b || !distinct.insert(std::minmax(a, b)).second) continue;
        std::size_t ra = root(a), rb = root(b);
        if (ra == rb)
            flag("edge " + d.vertex(a).id + "-" + d.vertex(b).id + " closes a cycle");
        else
            parent[ra] = rb;
    }
    for (std::size_t i = 1; i < n; ++i)
        if (root(i) != root(0)) {
            flag("vertex " + d.vertex(i).id + " is not connected to " + d.vertex(0).id);
            break;
        }
    for (std::size_t i = 0; i < n; ++i) {
        if (d.valence(i) <= 2 && d.vertex(i).weight > -2)
            flag("vertex " + d.vertex(i).id + " has valence " + std::to_string(d.valence(i)) + " and weight " +
                 to_string(d.vertex(i).weight) + " > -2");
    }
    return r;
}

PlumbingDiagram dumbbell48() {
    PlumbingDiagram d;
    d.add_vertex("l1", -2);
    d.add_vertex("l2", -2);
    d.add_vertex("u", -3);
    d.add_vertex("w", -3);
    d.add_vertex("r1", -2);
    d.add_vertex("r2", -2);
    d.add_edge("l1", "u");
    d.add_edge("l2", "u");
    d.add_edge("u", "w");
    d.add_edge("w", "r1");
    d.add_edge("w", "r2");
    return d;
}

PlumbingDiagram star(const Integer& centre, const std::vector<std::size_t>& arm_lengths) {
    PlumbingDiagram d;
    d.add_vertex("c", centre);
    for (std::size_t a = 0; a < arm_lengths.size(); ++a) {
        std::string prev = "c";
        for (std::size_t k = 0; k < arm_lengths[a]; ++k) {
            std::string id = "a" + std::to_string(a + 1) + "_" + std::to_string(k + 1);
            d.add_vertex(id, -2);
            d.add_edge(prev, id);
            prev = id;
        }
    }
    return d;
}

PlumbingDiagram e8() { return star(-2, {1, 2, 4}); }

IntMatrix intersection_matrix(const PlumbingDiagram& d) {
    IntMatrix a(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) a(i, i) = d.vertex(i).weight;
    for (auto [x, y] : d.edges()) {
        if (x == y) continue;
        a(x, y) = 1;
        a(y, x) = 1;
    }
    return a;
}

Integer det_plumbing(const PlumbingDiagram& d) { return determinant(-intersection_matrix(d)); }

Integer h1_order(const PlumbingDiagram& d) { return abs(det_plumbing(d)); }

namespace {

std::vector<std::size_t> component_from(const std::vector<std::vector<std::size_t>>& adj, std::size_t v,
                                        std::size_t u) {
    std::vector<bool> mark(adj.size(), false);
    mark[v] = true;
    mark[u] = true;
    std::vector<std::size_t> stack{u};
    while (!stack.empty()) {
        std::size_t x = stack.back();
        stack.pop_back();
        for (std::size_t y : adj[x])
            if (!mark[y]) {
                mark[y] = true;
                stack.push_back(y);
            }
    }
    mark[v] = false;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < adj.size(); ++i)
        if (mark[i]) out.push_back(i);
    return out;
}

std::vector<std::vector<std::size_t>> adjacency_of(const PlumbingDiagram& d) {
    std::vector<std::vector<std::size_t>> adj(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) adj[i] = d.neighbors(i);
    return adj;
}

StringWalk walk(const std::vector<std::vector<std::size_t>>& adj, std::size_t v, std::size_t u) {
    StringWalk w;
    std::size_t prev = v, cur = u;
    while (adj[cur].size() == 2) {
        w.interior.push_back(cur);
        std::size_t next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
        prev = cur;
        cur = next;
        if (cur == v) throw InputError("diagram is not a tree");
    }
    w.end = cur;
    return w;
}

std::vector<Integer> negated_weights(const PlumbingDiagram& d, const std::vector<std::size_t>& vs) {
    std::vector<Integer> out;
    out.reserve(vs.size());
    for (std::size_t i : vs) out.push_back(-d.vertex(i).weight);
    return out;
}

}  // namespace

std::vector<std::size_t> component_beyond(const PlumbingDiagram& d, std::size_t v, std::size_t u) {
    if (!d.adjacent(v, u))
        throw InputError("no edge " + d.vertex(v).id + "-" + d.vertex(u).id + " at " + d.vertex(v).id);
    return component_from(adjacency_of(d), v, u);
}

PlumbingDiagram cut_after(const PlumbingDiagram& d, std::string_view v, std::string_view u) {
    auto part = component_beyond(d, d.index_of(v), d.index_of(u));
    std::vector<bool> keep(d.size(), false);
    for (std::size_t i : part) keep[i] = true;
    PlumbingDiagram out;
    for (std::size_t i : part) out.add_vertex(d.vertex(i).id, d.vertex(i).weight);
    for (auto [a, b] : d.edges())
        if (keep[a] && keep[b]) out.add_edge(d.vertex(a).id, d.vertex(b).id);
    return out;
}

StringWalk walk_string(const PlumbingDiagram& d, std::size_t v, std::size_t u) {
    if (!d.adjacent(v, u))
        throw InputError("no edge " + d.vertex(v).id + "-" + d.vertex(u).id + " at " + d.vertex(v).id);
    return walk(adjacency_of(d), v, u);
}

SeifertData seifert_data(const PlumbingDiagram& d, std::string_view centre) {
    std::size_t c = d.index_of(centre);
    SeifertData s;
    Rational e = d.vertex(c).weight;
    for (std::size_t u : d.neighbors(c)) {
        StringWalk w = walk_string(d, c, u);
        if (d.valence(w.end) != 1)
            throw InputError("not star-shaped around " + std::string(centre) + ": vertex " + d.vertex(w.end).id +
                             " has valence " + std::to_string(d.valence(w.end)));
        std::vector<std::size_t> arm = w.interior;
        arm.push_back(w.end);
        auto terms = negated_weights(d, arm);
        ContinuedFraction full = cf_eval(terms);
        ContinuedFraction tail = cf_eval(std::vector<Integer>(terms.begin() + 1, terms.end()));
        SeifertPair p{full.numerator(), tail.empty() ? Integer(1) : tail.numerator()};
        if (p.alpha == 0) throw InputError("arm at " + d.vertex(u).id + " has zero determinant");
        e += make_rational(p.beta, p.alpha);
        s.arms.push_back(p);
    }
    s.euler = e;
    return s;
}

Rational node_euler_from_plumbing(const PlumbingDiagram& d, std::string_view vid) {
    std::size_t v = d.index_of(vid);
    if (d.valence(v) < 3) {
        for (std::size_t i = 0; i < d.size(); ++i)
            if (i != v && d.valence(i) >= 3)
                throw InputError("vertex " + std::string(vid) + " is not a node");
    }
    Rational e = d.vertex(v).weight;
    for (std::size_t u : d.neighbors(v)) {
        StringWalk w = walk_string(d, v, u);
        std::vector<std::size_t> terms_at = w.interior;
        if (d.valence(w.end) == 1) terms_at.push_back(w.end);
        e += cf_eval(negated_weights(d, terms_at)).reciprocal();
    }
    return e;
}

Integer string_determinant(const PlumbingDiagram& d, std::string_view vid, std::string_view wid) {
    std::size_t v = d.index_of(vid);
    std::size_t w = d.index_of(wid);
    for (std::size_t u : d.neighbors(v)) {
        StringWalk s = walk_string(d, v, u);
        if (s.end != w) continue;
        return determinant(-intersection_matrix(d).principal(s.interior));
    }
    throw InputError("no string joins " + std::string(vid) + " and " + std::string(wid));
}

namespace {

// SplitMix64, fixed so that seeds reproduce across standard libraries.
class SeedStream {
public:
    explicit SeedStream(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    long uniform(long lo, long hi) {
        auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<long>(next() % span);
    }

private:
    std::uint64_t state_;
};

}  // namespace

PlumbingDiagram random_normal_form(std::uint64_t seed, const GeneratorBounds& bounds) {
    if (bounds.min_vertices < 1 || bounds.min_vertices > bounds.max_vertices)
        throw InputError("generator bounds: need 1 <= min_vertices <= max_vertices");
    if (bounds.string_weight_max > -2 || bounds.string_weight_min > bounds.string_weight_max ||
        bounds.node_weight_min > bounds.node_weight_max)
        throw InputError("generator bounds: invalid weight ranges");
    SeedStream rng(seed);
    const auto n = static_cast<std::size_t>(
        rng.uniform(static_cast<long>(bounds.min_vertices), static_cast<long>(bounds.max_vertices)));
    std::vector<std::size_t> parent(n, 0);
    for (std::size_t i = 1; i < n; ++i) parent[i] = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(i) - 1));
    std::vector<std::size_t> valence(n, 0);
    for (std::size_t i = 1; i < n; ++i) {
        ++valence[i];
        ++valence[parent[i]];
    }
    const int width = n > 10 ? 2 : 1;
    auto name = [&](std::size_t i) {
        std::string s = std::to_string(i);
        while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
        return "v" + s;
    };
    for (;;) {
        PlumbingDiagram d;
        for (std::size_t i = 0; i < n; ++i) {
            long w = valence[i] <= 2 ? rng.uniform(bounds.string_weight_min, bounds.string_weight_max)
                                     : rng.uniform(bounds.node_weight_min, bounds.node_weight_max);
            d.add_vertex(name(i), w);
        }
        for (std::size_t i = 1; i < n; ++i) d.add_edge(parent[i], i);
        if (det_plumbing(d) != 0) return d;
    }
}

GeneralizedPlumbing::GeneralizedPlumbing(const PlumbingDiagram& d)
    : adjacency_(adjacency_of(d)), relations_(intersection_matrix(d)) {
    for (const auto& v : d.vertices()) ids_.push_back(v.id);
}

GeneralizedPlumbing::GeneralizedPlumbing(std::vector<std::string> ids, std::vector<std::vector<std::size_t>> adjacency,
                                         IntMatrix relations)
    : ids_(std::move(ids)), adjacency_(std::move(adjacency)), relations_(std::move(relations)) {
    if (adjacency_.size() != ids_.size() || relations_.rows() != ids_.size() || relations_.cols() != ids_.size())
        throw InputError("generalized plumbing: inconsistent sizes");
}

std::optional<std::size_t> GeneralizedPlumbing::find(std::string_view id) const {
    for (std::size_t i = 0; i < ids_.size(); ++i)
        if (ids_[i] == id) return i;
    return std::nullopt;
}

std::size_t GeneralizedPlumbing::index_of(std::string_view id) const {
    auto i = find(id);
    if (!i) throw InputError("unknown vertex id '" + std::string(id) + "'");
    return *i;
}

std::vector<std::size_t> GeneralizedPlumbing::component_beyond(std::size_t v, std::size_t u) const {
    return component_from(adjacency_, v, u);
}

StringWalk GeneralizedPlumbing::walk_string(std::size_t v, std::size_t u) const { return walk(adjacency_, v, u); }

Integer GeneralizedPlumbing::piece_determinant(const std::vector<std::size_t>& vertices) const {
    return gmtk::determinant(-relations_.principal(vertices));
}

Integer GeneralizedPlumbing::determinant() const { return gmtk::determinant(-relations_); }

Integer GeneralizedPlumbing::row_content(std::size_t i) const {
    Integer g = 0;
    for (std::size_t j = 0; j < size(); ++j) g = gcd(g, relations_(i, j));
    return g;
}

void GeneralizedPlumbing::scale_row(std::size_t i, const Integer& factor) {
    for (std::size_t j = 0; j < size(); ++j) relations_(i, j) *= factor;
}

}  // namespace gmtk
