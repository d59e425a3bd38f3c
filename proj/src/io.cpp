#include "gmtk/io.hpp"

#include <cstdint>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>
#include <vector>

namespace gmtk {

namespace {

bool is_integer_literal(const std::string& s) {
    std::size_t i = (s.size() > 1 && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

std::vector<std::string> tokens_of(std::string_view line) {
    std::string s(line.substr(0, line.find('#')));
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

PlumbingDiagram parse_plumbing(std::string_view text) {
    struct PendingEdge {
        std::size_t line;
        std::string a, b;
    };
    PlumbingDiagram d;
    std::vector<PendingEdge> edges;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        start = end + 1;
        auto t = tokens_of(line);
        if (t.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (t[0] == "v") {
            if (t.size() != 3) throw ParseError(line_no, "expected 'v <id> <weight>'");
            if (!is_integer_literal(t[2])) throw ParseError(line_no, "weight '" + t[2] + "' is not an integer");
            if (d.find(t[1])) throw ParseError(line_no, "duplicate vertex id '" + t[1] + "'");
            Integer w(t[2][0] == '+' ? t[2].substr(1) : t[2], 10);
            d.add_vertex(t[1], w);
        } else if (t[0] == "e") {
            if (t.size() != 3) throw ParseError(line_no, "expected 'e <id> <id>'");
            edges.push_back({line_no, t[1], t[2]});
        } else {
            throw ParseError(line_no, "unrecognised record '" + t[0] + "'");
        }
        if (end == text.size()) break;
    }
    for (const auto& e : edges) {
        for (const auto& id : {e.a, e.b})
            if (!d.find(id)) throw ParseError(e.line, "edge endpoint '" + id + "' is not a declared vertex");
        d.add_edge(e.a, e.b);
    }
    return d;
}

std::string serialize_plumbing(const PlumbingDiagram& d) {
    std::string out;
    for (const auto& v : d.vertices()) out += "v " + v.id + " " + v.weight.get_str() + "\n";
    for (auto [a, b] : d.edges()) out += "e " + d.vertex(a).id + " " + d.vertex(b).id + "\n";
    return out;
}

std::string plumbing_digest(const PlumbingDiagram& d) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : serialize_plumbing(d)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json integer_json(const Integer& x) {
    if (mpz_sizeinbase(x.get_mpz_t(), 2) < 63) return json(static_cast<std::int64_t>(x.get_si()));
    return json(x.get_str());
}

Integer integer_from_json(const json& j) {
    if (j.is_number_integer()) return Integer(std::to_string(j.get<std::int64_t>()), 10);
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (!is_integer_literal(s)) throw InputError("'" + s + "' is not an integer");
        return Integer(s[0] == '+' ? s.substr(1) : s, 10);
    }
    throw InputError("expected an integer, got " + j.dump());
}

json rational_json(const Rational& q) {
    return json{{"num", integer_json(q.get_num())}, {"den", integer_json(q.get_den())}};
}

Rational rational_from_json(const json& j) {
    if (j.is_object()) {
        Integer den = integer_from_json(j.at("den"));
        if (den == 0) throw InputError("zero denominator");
        return make_rational(integer_from_json(j.at("num")), den);
    }
    return Rational(integer_from_json(j));
}

namespace {

json splice_json_common(const SpliceTree& g, const std::vector<int>* signs, const OrbifoldDecoration& deco) {
    json nodes = json::array(), leaves = json::array(), edges = json::array();
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.is_node(i)) {
            json n{{"id", g.vertex(i).id}};
            if (signs) n["sign"] = (*signs)[i] > 0 ? "+" : "-";
            nodes.push_back(n);
        } else {
            leaves.push_back(g.vertex(i).id);
        }
    }
    for (const auto& e : g.edges()) {
        json je{{"a", g.vertex(e.a).id}, {"b", g.vertex(e.b).id}};
        if (g.is_node(e.a)) je["wa"] = integer_json(e.wa);
        if (g.is_node(e.b)) je["wb"] = integer_json(e.wb);
        edges.push_back(je);
    }
    json out{{"atomic", g.is_atomic()}, {"nodes", nodes}, {"leaves", leaves}, {"edges", edges}};
    if (!deco.empty()) {
        json o = json::object();
        for (const auto& [id, deg] : deco) o[id] = integer_json(deg);
        out["orbifold"] = o;
    }
    return out;
}

}  // namespace

json splice_json(const SpliceDiagram& g, const OrbifoldDecoration& deco) {
    std::vector<int> signs;
    for (std::size_t i = 0; i < g.size(); ++i) signs.push_back(g.is_node(i) ? g.sign(i) : 1);
    return splice_json_common(g, &signs, deco);
}

json splice_json(const UnnormalizedSpliceDiagram& g) { return splice_json_common(g, nullptr, {}); }

SpliceDiagram splice_from_json(const json& j, OrbifoldDecoration* deco) {
    try {
        SpliceDiagram g;
        for (const auto& n : j.at("nodes")) {
            int s = 1;
            if (n.contains("sign")) {
                const auto& js = n.at("sign");
                if (js.is_string())
                    s = js.get<std::string>() == "-" ? -1 : (js.get<std::string>() == "+" ? 1 : 0);
                else
                    s = js.get<int>();
            }
            if (s != 1 && s != -1) throw InputError("node sign must be '+' or '-'");
            g.add_node(n.at("id").get<std::string>(), s);
        }
        for (const auto& l : j.at("leaves")) g.add_leaf(l.get<std::string>());
        for (const auto& e : j.at("edges")) {
            std::size_t a = g.index_of(e.at("a").get<std::string>());
            std::size_t b = g.index_of(e.at("b").get<std::string>());
            Integer wa = 0, wb = 0;
            if (g.is_node(a)) wa = integer_from_json(e.at("wa"));
            if (g.is_node(b)) wb = integer_from_json(e.at("wb"));
            if (g.is_leaf(a) && e.contains("wa")) throw InputError("leaf end of an edge carries a weight");
            if (g.is_leaf(b) && e.contains("wb")) throw InputError("leaf end of an edge carries a weight");
            g.add_edge(a, b, wa, wb);
        }
        if (deco) {
            deco->clear();
            if (j.contains("orbifold"))
                for (const auto& [id, deg] : j.at("orbifold").items()) (*deco)[id] = integer_from_json(deg);
        }
        return g;
    } catch (const json::exception& e) {
        throw InputError(std::string("splice JSON: ") + e.what());
    }
}

json decomposition_json(const DecompositionGraph& g) {
    json nodes = json::array(), edges = json::array(), matrix = json::array();
    for (const auto& n : g.nodes)
        nodes.push_back({{"id", n.id}, {"euler", rational_json(n.euler)}, {"chi", rational_json(n.orbifold_euler_char)}});
    for (const auto& e : g.edges)
        edges.push_back({{"a", g.nodes[e.a].id}, {"b", g.nodes[e.b].id}, {"pairing", rational_json(e.pairing)}});
    RatMatrix m = g.reduced_matrix();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(rational_json(m(i, k)));
        matrix.push_back(row);
    }
    return json{{"nodes", nodes}, {"edges", edges}, {"reduced_matrix", matrix}};
}

DecompositionGraph decomposition_from_json(const json& j) {
    DecompositionGraph g;
    for (const auto& n : j.at("nodes"))
        g.nodes.push_back({n.at("id").get<std::string>(), rational_from_json(n.at("euler")),
                           rational_from_json(n.at("chi"))});
    auto index = [&](const std::string& id) {
        for (std::size_t i = 0; i < g.nodes.size(); ++i)
            if (g.nodes[i].id == id) return i;
        throw InputError("decomposition edge names unknown node " + id);
    };
    for (const auto& e : j.at("edges"))
        g.edges.push_back({index(e.at("a").get<std::string>()), index(e.at("b").get<std::string>()),
                           rational_from_json(e.at("pairing"))});
    return g;
}

namespace {

json optional_rational(const std::optional<Rational>& q) { return q ? rational_json(*q) : json(nullptr); }

std::optional<Rational> optional_rational_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    return rational_from_json(j);
}

}  // namespace

json certificate_json(const Certificate& c) {
    if (std::holds_alternative<NegativeNode>(c)) return json{{"kind", "negative_node"}, {"node", std::get<NegativeNode>(c).node}};
    if (std::holds_alternative<NonPositiveEdge>(c)) {
        const auto& e = std::get<NonPositiveEdge>(c);
        return json{{"kind", "non_positive_edge"}, {"a", e.a}, {"b", e.b}, {"determinant", integer_json(e.determinant)}};
    }
    if (std::holds_alternative<DefinitenessWitness>(c)) {
        const auto& w = std::get<DefinitenessWitness>(c);
        json steps = json::array();
        for (const auto& s : w.reduction.steps) {
            steps.push_back({{"node", s.node},
                             {"neighbor", s.neighbor ? json(*s.neighbor) : json(nullptr)},
                             {"pivot", rational_json(s.pivot)},
                             {"neighbor_before", optional_rational(s.neighbor_before)},
                             {"neighbor_after", optional_rational(s.neighbor_after)},
                             {"closed_form_checked", s.closed_form_checked}});
        }
        return json{{"kind", "definiteness"},
                    {"minor_signs", w.minor_signs},
                    {"reduction", {{"negative_definite", w.reduction.negative_definite}, {"steps", steps}}}};
    }
    return nullptr;
}

Certificate certificate_from_json(const json& j) {
    if (j.is_null()) return std::monostate{};
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "negative_node") return NegativeNode{j.at("node").get<std::string>()};
    if (kind == "non_positive_edge")
        return NonPositiveEdge{j.at("a").get<std::string>(), j.at("b").get<std::string>(),
                               integer_from_json(j.at("determinant"))};
    if (kind == "definiteness") {
        DefinitenessWitness w;
        w.minor_signs = j.at("minor_signs").get<std::vector<int>>();
        w.reduction.negative_definite = j.at("reduction").at("negative_definite").get<bool>();
        for (const auto& s : j.at("reduction").at("steps")) {
            EliminationStep st;
            st.node = s.at("node").get<std::string>();
            if (!s.at("neighbor").is_null()) st.neighbor = s.at("neighbor").get<std::string>();
            st.pivot = rational_from_json(s.at("pivot"));
            st.neighbor_before = optional_rational_from(s.at("neighbor_before"));
            st.neighbor_after = optional_rational_from(s.at("neighbor_after"));
            st.closed_form_checked = s.at("closed_form_checked").get<bool>();
            w.reduction.steps.push_back(st);
        }
        return w;
    }
    throw InputError("unknown certificate kind '" + kind + "'");
}

json verdict_json(const SingularityVerdict& v) {
    return json{{"verdict", v.verdict}, {"certificate", certificate_json(v.certificate)}};
}

json verdict_json(const LinkVerdict& v) {
    return json{{"verdict", v.verdict},
                {"route_agreement", v.route_agreement},
                {"routes",
                 {{"splice_condition", v.splice_route},
                  {"reduced_minors", v.reduced_route},
                  {"end_node_reduction", v.reduction_route},
                  {"plumbing_minors", v.plumbing_route}}},
                {"certificate", certificate_json(v.certificate)}};
}

LinkVerdict link_verdict_from_json(const json& j) {
    LinkVerdict v;
    v.verdict = j.at("verdict").get<bool>();
    v.route_agreement = j.at("route_agreement").get<bool>();
    const auto& r = j.at("routes");
    v.splice_route = r.at("splice_condition").get<bool>();
    v.reduced_route = r.at("reduced_minors").get<bool>();
    v.reduction_route = r.at("end_node_reduction").get<bool>();
    v.plumbing_route = r.at("plumbing_minors").get<bool>();
    v.certificate = certificate_from_json(j.at("certificate"));
    return v;
}

json piece_data_json(const CoverPieceData& p) {
    return json{{"node", p.node},
                {"lambda", integer_json(p.lambda)},
                {"fiber_degree", integer_json(p.fiber_degree)},
                {"base_degree", integer_json(p.base_degree)},
                {"euler", optional_rational(p.euler)},
                {"lifted_euler", optional_rational(p.lifted_euler)}};
}

json cover_split_json(const CoverSplit& s) {
    auto pair = [](const std::pair<Integer, Integer>& p) { return json::array({integer_json(p.first), integer_json(p.second)}); };
    auto piece = [](const CoverPiece& p) {
        return json{{"order", integer_json(p.order)}, {"splice", splice_json(p.diagram(), p.decoration)}};
    };
    return json{{"nodes", {s.node0, s.node1}},
                {"torus_edge", {s.torus_a, s.torus_b}},
                {"r0", integer_json(s.r0)},
                {"r1", integer_json(s.r1)},
                {"d0", integer_json(s.d0)},
                {"d1", integer_json(s.d1)},
                {"kernel0", pair(s.kernel0)},
                {"kernel1", pair(s.kernel1)},
                {"p_glue0", integer_json(s.p_glue0)},
                {"p_glue1", integer_json(s.p_glue1)},
                {"components0", integer_json(s.components0)},
                {"components1", integer_json(s.components1)},
                {"gluing", {{"kind", "complete_bipartite"}, {"tori", integer_json(s.tori)}}},
                {"pieces", {piece(s.piece0), piece(s.piece1)}}};
}

json uac_json(const UacPlan& p) {
    auto ints = [](const std::vector<Integer>& xs) {
        json a = json::array();
        for (const auto& x : xs) a.push_back(integer_json(x));
        return a;
    };
    switch (p.kind) {
        case UacKind::Brieskorn:
            return json{{"type", "brieskorn"},
                        {"node", p.node},
                        {"exponents", ints(p.exponents)},
                        {"orientation", p.orientation < 0 ? "standard" : "reversed"},
                        {"euler", optional_rational(p.euler)},
                        {"degree", integer_json(p.degree)},
                        {"splice", splice_json(p.diagram, p.decoration)}};
        case UacKind::ConnectedSum:
            return json{{"type", "connected_sum"},
                        {"node", p.node},
                        {"summands", ints(p.exponents)},
                        {"zero_leaf_degree", integer_json(p.zero_leaf_degree)},
                        {"degree_steps", ints(p.degree_steps)},
                        {"degree", integer_json(p.degree)},
                        {"splice", splice_json(p.diagram, p.decoration)}};
        case UacKind::Split: {
            json children = json::array();
            for (const auto& c : p.children) children.push_back(uac_json(c));
            json split = cover_split_json(*p.split);
            split.erase("pieces");
            return json{{"type", "split"},
                        {"degree", integer_json(p.degree)},
                        {"splice", splice_json(p.diagram, p.decoration)},
                        {"split", split},
                        {"piece_data", {piece_data_json(*p.data0), piece_data_json(*p.data1)}},
                        {"children", children}};
        }
    }
    return nullptr;
}

bool Report::operator==(const Report& o) const { return report_json(*this) == report_json(o); }

Report make_report(const PlumbingDiagram& d, bool with_cover) {
    Report r;
    r.digest = plumbing_digest(d);
    CoverPiece piece = piece_from_plumbing(d);
    r.h1_order = piece.order;
    r.diagram = piece.diagram();
    if (r.diagram.is_atomic()) return r;
    for (std::size_t k : r.diagram.node_edges()) {
        const auto& e = r.diagram.edge(k);
        r.edges.push_back({r.diagram.vertex(e.a).id, r.diagram.vertex(e.b).id, edge_determinant(r.diagram, k),
                           fiber_pairing(piece.splice, k)});
    }
    r.decomposition = decomposition_graph(r.diagram, r.h1_order);
    r.verdict = is_singularity_link(d);
    if (with_cover) r.cover = uac_json(uac_plan(piece));
    return r;
}

json report_json(const Report& r) {
    json edges = json::array();
    for (const auto& e : r.edges)
        edges.push_back({{"a", e.a}, {"b", e.b}, {"determinant", integer_json(e.determinant)},
                         {"pairing", rational_json(e.pairing)}});
    return json{{"digest", r.digest},
                {"h1_order", integer_json(r.h1_order)},
                {"splice", splice_json(r.diagram)},
                {"edge_determinants", edges},
                {"decomposition", r.decomposition ? decomposition_json(*r.decomposition) : json(nullptr)},
                {"verdict", r.verdict ? verdict_json(*r.verdict) : json(nullptr)},
                {"cover", r.cover ? *r.cover : json(nullptr)}};
}

Report report_from_json(const json& j) {
    try {
        Report r;
        r.digest = j.at("digest").get<std::string>();
        r.h1_order = integer_from_json(j.at("h1_order"));
        r.diagram = splice_from_json(j.at("splice"));
        for (const auto& e : j.at("edge_determinants"))
            r.edges.push_back({e.at("a").get<std::string>(), e.at("b").get<std::string>(),
                               integer_from_json(e.at("determinant")), rational_from_json(e.at("pairing"))});
        if (!j.at("decomposition").is_null()) r.decomposition = decomposition_from_json(j.at("decomposition"));
        if (!j.at("verdict").is_null()) r.verdict = link_verdict_from_json(j.at("verdict"));
        if (!j.at("cover").is_null()) r.cover = j.at("cover");
        return r;
    } catch (const json::exception& e) {
        throw InputError(std::string("report JSON: ") + e.what());
    }
}

std::string to_dot(const SpliceDiagram& g, const OrbifoldDecoration& deco) {
    std::ostringstream out;
    out << "digraph splice {\n  edge [dir=none];\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        const std::string& id = g.vertex(i).id;
        if (g.is_node(i)) {
            out << "  " << dot_quote(id) << " [shape=circle, label=\"" << (g.sign(i) > 0 ? "+" : "-")
                << "\", xlabel=" << dot_quote(id) << "];\n";
        } else {
            std::string label = id;
            auto it = deco.find(id);
            if (it != deco.end() && it->second != 1) label += " (" + it->second.get_str() + ")";
            out << "  " << dot_quote(id) << " [shape=point, xlabel=" << dot_quote(label) << "];\n";
        }
    }
    for (const auto& e : g.edges()) {
        out << "  " << dot_quote(g.vertex(e.a).id) << " -> " << dot_quote(g.vertex(e.b).id) << " [";
        bool first = true;
        if (g.is_node(e.a)) {
            out << "taillabel=\"" << e.wa.get_str() << "\"";
            first = false;
        }
        if (g.is_node(e.b)) out << (first ? "" : ", ") << "headlabel=\"" << e.wb.get_str() << "\"";
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace gmtk
