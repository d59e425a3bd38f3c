#include "gmtk/crosscheck.hpp"

#include "gmtk/error.hpp"
#include "gmtk/invariants.hpp"
#include "gmtk/io.hpp"
#include "gmtk/singularity.hpp"

#include <algorithm>
#include <functional>
#include <future>
#include <set>
#include <tuple>

namespace gmtk {

void CheckResult::expect(bool cond, const std::string& what) {
    ++checks;
    if (!cond) failures.push_back(what);
}

void CheckResult::merge(const CheckResult& o) {
    checks += o.checks;
    failures.insert(failures.end(), o.failures.begin(), o.failures.end());
}

namespace {

CheckResult guarded(const std::function<void(CheckResult&)>& body) {
    CheckResult r;
    try {
        body(r);
    } catch (const std::exception& e) {
        r.failures.push_back(std::string("exception: ") + e.what());
    }
    return r;
}

std::string edge_name(const SpliceTree& g, std::size_t k) {
    return g.vertex(g.edge(k).a).id + "-" + g.vertex(g.edge(k).b).id;
}

// det(-A) = det(-A_left) det(-A_right) - det(-A_left - v) det(-A_right - u)
// for any plumbing edge v-u.
Integer edge_split_determinant(const PlumbingDiagram& d, std::size_t v, std::size_t u) {
    IntMatrix a = -intersection_matrix(d);
    auto left = component_beyond(d, u, v);
    auto right = component_beyond(d, v, u);
    auto without = [](std::vector<std::size_t> xs, std::size_t x) {
        xs.erase(std::find(xs.begin(), xs.end(), x));
        return xs;
    };
    auto det_of = [&](const std::vector<std::size_t>& xs) -> Integer {
        return xs.empty() ? Integer(1) : determinant(a.principal(xs));
    };
    return det_of(left) * det_of(right) - det_of(without(left, v)) * det_of(without(right, u));
}

}  // namespace

CheckResult check_identities(const PlumbingDiagram& d) {
    return guarded([&](CheckResult& r) {
        const Integer det = det_plumbing(d);
        for (auto [a, b] : d.edges())
            r.expect(edge_split_determinant(d, a, b) == det,
                     "edge-split determinant at " + d.vertex(a).id + "-" + d.vertex(b).id);

        SpliceDerivation s = splice_from_plumbing(d);
        const SpliceDiagram& g = s.normalized;
        const UnnormalizedSpliceDiagram& u = s.unnormalized;
        r.expect(s.det == det, "derivation determinant");
        r.expect(s.maximal && s.maximal->erase() == u, "erasing the maximal diagram gives the unnormalized one");
        r.expect(validate_splice(g).ok, "derived splice diagram is valid");
        if (g.is_atomic()) {
            r.expect(u.is_atomic(), "atomic on both routes");
            return;
        }

        for (std::size_t v : g.nodes()) {
            int eps = sign(det);
            bool zero = false;
            for (std::size_t k : g.incident(v)) {
                const Integer& wt = u.weight_at(v, k);
                r.expect(g.weight_at(v, k) == abs(wt), "d = |d~| at " + g.vertex(v).id + " on " + edge_name(g, k));
                if (!g.is_node_edge(k)) r.expect(g.weight_at(v, k) >= 2, "leaf weight >= 2 at " + g.vertex(v).id);
                eps *= sign_or_plus(wt);
                zero = zero || wt == 0;
            }
            r.expect(g.sign(v) == eps, "node sign at " + g.vertex(v).id);
            if (!zero) {
                Rational self = linking_number(d, g.vertex(v).id, g.vertex(v).id);
                r.expect(sign(self) == g.sign(v), "sign of lk(v,v) at " + g.vertex(v).id);
            }
        }

        for (std::size_t k : g.node_edges()) {
            const auto& e = g.edge(k);
            Integer p = string_determinant(d, g.vertex(e.a).id, g.vertex(e.b).id);
            r.expect(det * p == edge_determinant(u, k), "det * string determinant = D~ on " + edge_name(g, k));
            r.expect(abs(edge_determinant(g, k)) == abs(edge_determinant(u, k)), "|D| = |D~| on " + edge_name(g, k));
            r.expect(fiber_pairing(g, det, k) == fiber_pairing(u, det, k), "fiber pairing routes on " + edge_name(g, k));
        }

        for (std::size_t v = 0; v < u.size(); ++v) {
            for (std::size_t w = 0; w < u.size(); ++w) {
                if (v == w && u.is_leaf(v)) continue;
                Rational lk = linking_number(d, u.vertex(v).id, u.vertex(w).id);
                r.expect(lk == make_rational(linking_product(u, v, w), det),
                         "linking number " + u.vertex(v).id + "," + u.vertex(w).id);
            }
        }

        for (std::size_t v : g.nodes()) {
            Rational plumbing_route = node_euler_from_plumbing(d, g.vertex(v).id);
            bool has_zero = false;
            for (const auto& w : g.weights_at(v)) has_zero = has_zero || w == 0;
            r.expect(euler_number(g, det, v) == plumbing_route, "euler number routes at " + g.vertex(v).id);
            if (has_zero) continue;
            for (std::size_t k : g.incident(v)) {
                if (!g.is_node_edge(k)) continue;
                r.expect(euler_number(g, det, v, k) == plumbing_route,
                         "euler number with distinguished edge " + edge_name(g, k));
            }
        }

        if (g.nodes().size() == 1) {
            std::size_t c = g.nodes().front();
            SeifertData sd = seifert_data(d, g.vertex(c).id);
            r.expect(sd.euler == euler_number(g, det, c), "Seifert euler number");
            std::multiset<Integer> alphas, weights;
            for (const auto& p : sd.arms) alphas.insert(p.alpha);
            for (const auto& w : g.weights_at(c)) weights.insert(w);
            r.expect(alphas == weights, "Seifert invariants are the leaf weights");
            Rational chi = 2 - static_cast<long>(sd.arms.size());
            for (const auto& p : sd.arms) chi += make_rational(1, p.alpha);
            r.expect(chi == orbifold_euler_char(g, c), "orbifold Euler characteristic");
            r.expect(Rational(abs(det)) == abs(sd.euler) * Rational(product(g.weights_at(c))), "|H_1| = |e| prod alpha");
        }
    });
}

CheckResult check_theorem1(const PlumbingDiagram& d) {
    return guarded([&](CheckResult& r) {
        if (splice_from_plumbing(d).normalized.is_atomic()) return;
        LinkVerdict v = is_singularity_link(d);
        r.expect(v.splice_route == v.plumbing_route, "splice condition vs definiteness of -A");
        r.expect(v.splice_route == v.reduced_route, "splice condition vs reduced matrix");
        r.expect(v.reduction_route == v.reduced_route, "end-node reduction vs leading minors");
        r.expect(v.route_agreement, "route agreement flag");
    });
}

namespace {

using LeafKey = std::tuple<std::string, int, std::vector<Integer>, Integer>;

void plan_leaves(const UacPlan& p, std::vector<LeafKey>& out) {
    if (p.kind == UacKind::Split) {
        for (const auto& c : p.children) plan_leaves(c, out);
        return;
    }
    out.emplace_back(p.node, static_cast<int>(p.kind), p.exponents, p.degree);
}

void check_plan_degrees(const UacPlan& p, CheckResult& r) {
    if (p.kind != UacKind::Split) {
        if (p.kind == UacKind::ConnectedSum) r.expect(p.zero_leaf_degree * product(p.exponents) == p.degree, "connected sum degree");
        return;
    }
    r.expect(p.children[0].degree * p.split->d1 == p.degree && p.children[1].degree * p.split->d0 == p.degree,
             "plan degree conservation at " + p.split->node0 + "-" + p.split->node1);
    for (const auto& c : p.children) check_plan_degrees(c, r);
}

void check_split(const CoverPiece& piece, std::size_t k, bool lower_first, CheckResult& r) {
    const SpliceDiagram& g = piece.diagram();
    CoverSplit s = split_at_edge(piece, k, lower_first);
    const std::string where = " splitting " + s.node0 + "|" + s.node1;
    std::size_t v0 = g.index_of(s.node0), v1 = g.index_of(s.node1);

    // Weights seeing the cut edge: on side 0 they look toward v1 and are divided by d1.
    auto far1 = g.beyond(v0, k);
    auto far0 = g.beyond(v1, k);
    for (std::size_t x : g.nodes()) {
        bool on0 = !std::binary_search(far1.begin(), far1.end(), x);
        std::size_t target = on0 ? v1 : v0;
        const Integer& div = on0 ? s.d1 : s.d0;
        for (std::size_t j : g.incident(x)) {
            auto part = g.beyond(x, j);
            if (!std::binary_search(part.begin(), part.end(), target)) continue;
            r.expect(g.weight_at(x, j) % div == 0, "ideal generator divides weight at " + g.vertex(x).id + where);
        }
    }
    (void)far0;

    // Constancy along the string realising the cut edge.
    std::vector<std::string> chain{g.vertex(g.edge(k).a).id};
    for (const auto& id : piece.splice.interiors.at(k)) chain.push_back(id);
    chain.push_back(g.vertex(g.edge(k).b).id);
    if (g.vertex(g.edge(k).a).id != s.node0) std::reverse(chain.begin(), chain.end());
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        std::size_t a = piece.model.index_of(chain[i]), b = piece.model.index_of(chain[i + 1]);
        r.expect(ideal_generator(piece.model, a, b) == s.d1, "d1 constant along the string" + where);
        r.expect(ideal_generator(piece.model, b, a) == s.d0, "d0 constant along the string" + where);
    }

    r.expect(s.tori == s.d0 * s.d1, "torus preimages" + where);
    r.expect(s.piece0.order * s.d1 == piece.order && s.piece1.order * s.d0 == piece.order, "piece orders" + where);
    r.expect(s.components0 == s.d1 && s.components1 == s.d0, "component counts" + where);

    for (int side = 0; side < 2; ++side) {
        CoverPieceData pd = cover_piece_data(piece, s, side);
        std::size_t mv = piece.model.index_of(pd.node);
        r.expect(pd.lambda * pd.fiber_degree == piece.order, "lambda f = d at " + pd.node + where);
        r.expect(pd.fiber_degree == meridian_order(piece.model, mv), "f is the meridian order at " + pd.node + where);
        if (pd.euler && pd.lifted_euler)
            r.expect(*pd.lifted_euler * Rational(pd.fiber_degree) == Rational(pd.base_degree) * *pd.euler,
                     "lifted euler number at " + pd.node + where);
    }

    // Edges away from the cut keep their fiber pairing in the pieces.
    for (const CoverPiece* child : {&s.piece0, &s.piece1}) {
        const SpliceDiagram& c = child->diagram();
        for (std::size_t j : c.node_edges()) {
            std::size_t pa = g.index_of(c.vertex(c.edge(j).a).id), pb = g.index_of(c.vertex(c.edge(j).b).id);
            auto pj = g.find_edge(pa, pb);
            if (!pj) {
                r.expect(false, "child edge " + edge_name(c, j) + " missing from parent" + where);
                continue;
            }
            // Pairings are intrinsic to the torus; the piece sees a different d and D.
            Rational parent_p = fiber_pairing(g, piece.order, *pj);
            Rational child_p = fiber_pairing(c, child->order, j);
            r.expect(parent_p == child_p, "fiber pairing on " + edge_name(c, j) + " preserved" + where);
        }
    }
}

}  // namespace

CheckResult check_cover(const PlumbingDiagram& d) {
    return guarded([&](CheckResult& r) {
        CoverPiece piece = piece_from_plumbing(d);
        const SpliceDiagram& g = piece.diagram();
        if (g.nodes().size() < 2) {
            if (g.nodes().size() == 1) {
                UacPlan p = one_node_uac(piece);
                r.expect(p.degree == piece.order, "one-node plan degree");
                check_plan_degrees(p, r);
            }
            return;
        }
        for (std::size_t k : g.node_edges())
            for (bool lower : {true, false}) check_split(piece, k, lower, r);

        auto ks = sorted_node_edges(g);
        std::vector<LeafKey> first;
        for (std::size_t i = 0; i < ks.size(); ++i) {
            UacPlan p = uac_plan(piece, UacOptions{i});
            r.expect(p.degree == piece.order, "plan degree is |H_1|");
            check_plan_degrees(p, r);
            std::vector<LeafKey> leaves;
            plan_leaves(p, leaves);
            std::sort(leaves.begin(), leaves.end());
            r.expect(leaves.size() == g.nodes().size(), "one plan leaf per node");
            if (i == 0)
                first = leaves;
            else
                r.expect(leaves == first, "plan pieces independent of root edge " + edge_name(g, ks[i]));
        }
    });
}

OrbifoldDecoration random_decoration(const SpliceDiagram& g, std::uint64_t seed) {
    OrbifoldDecoration deco;
    std::uint64_t x = seed * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL;
    auto next = [&] {
        x ^= x >> 33;
        x *= 0xFF51AFD7ED558CCDULL;
        x ^= x >> 33;
        return x;
    };
    for (std::size_t l : g.leaves())
        if (next() % 3 == 0) deco[g.vertex(l).id] = Integer(static_cast<long>(2 + next() % 3));
    if (deco.empty() && !g.leaves().empty()) deco[g.vertex(g.leaves().front()).id] = 2;
    return deco;
}

CheckResult check_orbifold(const PlumbingDiagram& d, const OrbifoldDecoration& deco) {
    return guarded([&](CheckResult& r) {
        CoverPiece plain = piece_from_plumbing(d);
        const SpliceDiagram& g = plain.diagram();
        if (g.is_atomic()) return;
        CoverPiece orb = piece_from_plumbing(d, deco);
        OrbifoldAdjustment adj = orbifold_adjust(g, deco);
        Integer big_p = 1;
        for (const auto& [id, deg] : deco) big_p *= deg;
        r.expect(adj.degree_product == big_p, "degree product");
        r.expect(orb.order == big_p * plain.order, "|H_1^orb| = P |H_1|");
        r.expect(adj.diagram.canonical_edges() == orb.diagram().canonical_edges(),
                 "orbifold_adjust matches the homology route");
        for (std::size_t v : g.nodes()) r.expect(orb.diagram().sign(v) == g.sign(v), "signs unchanged");
        for (std::size_t k : g.node_edges()) {
            r.expect(edge_determinant(adj.diagram, k) == big_p * edge_determinant(g, k),
                     "edge determinant scales by P on " + edge_name(g, k));
            r.expect(fiber_pairing(adj.diagram, orb.order, k) == fiber_pairing(g, plain.order, k),
                     "fiber pairing unchanged on " + edge_name(g, k));
        }
        if (g.nodes().size() >= 2) {
            UacPlan p = uac_plan(orb);
            r.expect(p.degree == orb.order, "orbifold plan degree");
            check_plan_degrees(p, r);
        }
    });
}

namespace {

const std::vector<std::string> kSuites{"identities", "theorem1", "cover", "orbifold"};

CheckResult run_suite(const std::string& suite, const PlumbingDiagram& d, std::uint64_t seed) {
    if (suite == "identities") return check_identities(d);
    if (suite == "theorem1") return check_theorem1(d);
    if (suite == "cover") return check_cover(d);
    return guarded([&](CheckResult& r) {
        SpliceDiagram g = splice_from_plumbing(d).normalized;
        r.merge(check_orbifold(d, random_decoration(g, seed)));
    });
}

bool is_leaf_removable(const PlumbingDiagram& d, std::size_t leaf) {
    return d.size() > 1 && d.valence(leaf) == 1;
}

PlumbingDiagram without_vertex(const PlumbingDiagram& d, std::size_t drop) {
    PlumbingDiagram out;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (i != drop) out.add_vertex(d.vertex(i).id, d.vertex(i).weight);
    for (auto [a, b] : d.edges())
        if (a != drop && b != drop) out.add_edge(d.vertex(a).id, d.vertex(b).id);
    return out;
}

}  // namespace

PlumbingDiagram shrink_failure(const PlumbingDiagram& d, const std::string& suite, std::uint64_t seed) {
    PlumbingDiagram cur = d;
    for (bool progress = true; progress;) {
        progress = false;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            if (!is_leaf_removable(cur, i)) continue;
            PlumbingDiagram cand = without_vertex(cur, i);
            if (!validate_normal_form(cand).ok || det_plumbing(cand) == 0) continue;
            if (!run_suite(suite, cand, seed).ok()) {
                cur = std::move(cand);
                progress = true;
                break;
            }
        }
    }
    return cur;
}

SeedReport run_seed(std::uint64_t seed, const GeneratorBounds& bounds) {
    SeedReport rep;
    rep.seed = seed;
    PlumbingDiagram d = random_normal_form(seed, bounds);
    rep.vertices = d.size();
    try {
        SpliceDiagram g = splice_from_plumbing(d).normalized;
        rep.nodes = g.nodes().size();
        rep.zhs = rep.nodes > 0 && zhs_check(g);
        rep.singular = rep.nodes > 0 && is_singularity_link(d).verdict;
    } catch (const std::exception& e) {
        rep.failures["pipeline"].push_back(e.what());
        rep.reproduction = serialize_plumbing(d);
        return rep;
    }
    std::string first_failing;
    for (const auto& suite : kSuites) {
        CheckResult r = run_suite(suite, d, seed);
        rep.checks += r.checks;
        if (!r.ok()) {
            rep.failures[suite] = r.failures;
            if (first_failing.empty()) first_failing = suite;
        }
    }
    if (!first_failing.empty()) rep.reproduction = serialize_plumbing(shrink_failure(d, first_failing, seed));
    return rep;
}

FuzzSummary run_fuzz(const FuzzOptions& options) {
    const unsigned jobs = std::max(1u, options.jobs);
    std::vector<SeedReport> reports(options.seeds);
    auto work = [&](unsigned shard) {
        for (std::size_t i = shard; i < options.seeds; i += jobs) reports[i] = run_seed(options.start + i, options.bounds);
    };
    std::vector<std::future<void>> pending;
    for (unsigned j = 1; j < jobs; ++j) pending.push_back(std::async(std::launch::async, work, j));
    work(0);
    for (auto& f : pending) f.get();

    FuzzSummary s;
    s.seeds = options.seeds;
    for (auto& rep : reports) {
        s.checks += rep.checks;
        if (rep.nodes == 0)
            ++s.atomic;
        else if (rep.nodes == 1)
            ++s.one_node;
        else
            ++s.multi_node;
        if (rep.zhs) ++s.zhs;
        if (rep.singular) ++s.singular;
        for (const auto& [suite, msgs] : rep.failures) ++s.suite_failures[suite];
        if (!rep.failures.empty()) s.failing.push_back(std::move(rep));
    }
    return s;
}

}  // namespace gmtk
