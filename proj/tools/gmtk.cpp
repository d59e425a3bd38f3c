// gmtk: splice diagrams, singularity-link verdicts and cover plans from plumbing files.
//
// Exit codes: 0 ok, 1 input error, 2 internal cross-check disagreement (or a
// failing fuzz seed), 3 false verdict under `check --strict`.

#include "gmtk/crosscheck.hpp"
#include "gmtk/error.hpp"
#include "gmtk/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>

using namespace gmtk;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kConsistency = 2;
constexpr int kStrictFalse = 3;

std::string read_input(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), {}};
}

bool looks_like_json(const std::string& text) {
    auto i = text.find_first_not_of(" \t\r\n");
    return i != std::string::npos && text[i] == '{';
}

struct Input {
    std::optional<PlumbingDiagram> plumbing;
    SpliceDiagram splice;
    OrbifoldDecoration decoration;
};

Input load(const std::string& path) {
    std::string text = read_input(path);
    Input in;
    if (looks_like_json(text)) {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw InputError(path + ": " + e.what());
        }
        in.splice = splice_from_json(j.contains("splice") ? j.at("splice") : j, &in.decoration);
        auto v = validate_splice(in.splice, true);
        if (!v.ok) throw InputError(path + ": " + v.violations.front());
        return in;
    }
    try {
        in.plumbing = parse_plumbing(text);
    } catch (const ParseError& e) {
        throw InputError(path + ": " + e.what());
    }
    in.splice = splice_from_plumbing(*in.plumbing).normalized;
    return in;
}

const PlumbingDiagram& need_plumbing(const Input& in, const std::string& what) {
    if (!in.plumbing) throw InputError(what + " needs a plumbing file, not a splice diagram");
    return *in.plumbing;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

std::size_t edge_between(const SpliceDiagram& g, const std::string& spec) {
    for (std::size_t cut = spec.find('-'); cut != std::string::npos; cut = spec.find('-', cut + 1)) {
        auto a = g.find(spec.substr(0, cut)), b = g.find(spec.substr(cut + 1));
        if (!a || !b) continue;
        if (auto k = g.find_edge(*a, *b); k && g.is_node_edge(*k)) return *k;
    }
    throw InputError("--edge " + spec + " does not name an edge between two nodes");
}

int cmd_derive(const std::string& file, bool with_cover) {
    Input in = load(file);
    Report r = make_report(need_plumbing(in, "derive"), with_cover);
    emit(report_json(r));
    return kOk;
}

int cmd_check(const std::string& file, bool strict) {
    Input in = load(file);
    json out;
    bool verdict = false;
    if (in.plumbing) {
        LinkVerdict v = is_singularity_link(*in.plumbing);
        out = verdict_json(v);
        out["digest"] = plumbing_digest(*in.plumbing);
        verdict = v.verdict;
        if (!v.route_agreement) {
            emit(out);
            std::cerr << "gmtk: singularity-link routes disagree\n";
            return kConsistency;
        }
    } else {
        SingularityVerdict v = splice_condition(in.splice);
        out = verdict_json(v);
        verdict = v.verdict;
    }
    emit(out);
    return strict && !verdict ? kStrictFalse : kOk;
}

int cmd_decomp(const std::string& file, const std::string& order) {
    Input in = load(file);
    Integer d;
    if (in.plumbing) {
        d = h1_order(*in.plumbing);
    } else {
        if (order.empty()) throw InputError("decomp on a splice diagram needs --order");
        d = integer_from_json(json(order));
    }
    emit(decomposition_json(decomposition_graph(in.splice, d)));
    return kOk;
}

int cmd_cover(const std::string& file, const std::string& edge) {
    Input in = load(file);
    CoverPiece piece = piece_from_plumbing(need_plumbing(in, "cover"));
    std::size_t k = edge_between(piece.diagram(), edge);
    const SpliceDiagram& g = piece.diagram();
    const std::string& a = g.vertex(g.edge(k).a).id;
    const std::string& b = g.vertex(g.edge(k).b).id;
    const std::string& named = edge.compare(0, a.size() + 1, a + "-") == 0 ? a : b;
    // Side 0 is the node named first in --edge.
    CoverSplit s = split_at_edge(piece, k, named == std::min(a, b));
    json out = cover_split_json(s);
    out["piece_data"] = {piece_data_json(cover_piece_data(piece, s, 0)), piece_data_json(cover_piece_data(piece, s, 1))};
    emit(out);
    return kOk;
}

int cmd_uac(const std::string& file, std::size_t root_edge) {
    Input in = load(file);
    emit(uac_json(uac_plan(need_plumbing(in, "uac"), UacOptions{root_edge})));
    return kOk;
}

int cmd_render(const std::string& file, bool dot) {
    Input in = load(file);
    if (dot)
        std::cout << to_dot(in.splice, in.decoration);
    else
        emit(splice_json(in.splice, in.decoration));
    return kOk;
}

int cmd_fuzz(const FuzzOptions& opt, const std::string& repro_dir) {
    FuzzSummary s = run_fuzz(opt);
    json failing = json::array();
    for (const auto& rep : s.failing) {
        json f{{"seed", rep.seed}, {"vertices", rep.vertices}, {"nodes", rep.nodes}};
        json suites = json::object();
        for (const auto& [suite, msgs] : rep.failures) suites[suite] = msgs;
        f["failures"] = suites;
        f["reproduction"] = rep.reproduction;
        if (!repro_dir.empty()) {
            std::filesystem::create_directories(repro_dir);
            auto path = std::filesystem::path(repro_dir) / ("seed-" + std::to_string(rep.seed) + ".plumb");
            std::ofstream(path) << "# failing seed " << rep.seed << "\n" << rep.reproduction;
            f["reproduction_file"] = path.string();
        }
        failing.push_back(f);
        std::cerr << "gmtk: seed " << rep.seed << " failed";
        for (const auto& [suite, msgs] : rep.failures) std::cerr << " [" << suite << ": " << msgs.front() << "]";
        std::cerr << "\n" << rep.reproduction;
    }
    json suites = json::object();
    for (const auto& [suite, n] : s.suite_failures) suites[suite] = n;
    emit({{"seeds", s.seeds},
          {"start", opt.start},
          {"max_vertices", opt.bounds.max_vertices},
          {"checks", s.checks},
          {"atomic", s.atomic},
          {"one_node", s.one_node},
          {"multi_node", s.multi_node},
          {"zhs", s.zhs},
          {"singularity_links", s.singular},
          {"failing_seeds", s.failing.size()},
          {"suite_failures", suites},
          {"failing", failing}});
    return s.ok() ? kOk : kConsistency;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Splice diagrams, singularity-link verdicts and cover plans for plumbed 3-manifolds"};
    app.require_subcommand(1);
    std::string file;
    bool json_flag = false;

    auto* derive = app.add_subcommand("derive", "full report: splice diagram, edge data, decomposition, verdict");
    bool with_cover = false;
    derive->add_option("file", file, "plumbing file, '-' for stdin")->required();
    derive->add_flag("--cover", with_cover, "include the universal abelian cover plan");
    derive->add_flag("--json", json_flag, "JSON output (default)");

    auto* check = app.add_subcommand("check", "singularity-link verdict with certificate");
    bool strict = false;
    check->add_option("file", file, "plumbing file or splice JSON")->required();
    check->add_flag("--strict", strict, "exit 3 when the verdict is false");
    check->add_flag("--json", json_flag, "JSON output (default)");

    auto* decomp = app.add_subcommand("decomp", "decomposition graph and reduced plumbing matrix");
    std::string order;
    decomp->add_option("file", file, "plumbing file or splice JSON")->required();
    decomp->add_option("--order", order, "|H_1| for splice-diagram input");
    decomp->add_flag("--json", json_flag, "JSON output (default)");

    auto* cover = app.add_subcommand("cover", "split the cover at one node-edge");
    std::string edge;
    cover->add_option("file", file, "plumbing file")->required();
    cover->add_option("--edge", edge, "nodes A-B; A is side 0")->required();
    cover->add_flag("--json", json_flag, "JSON output (default)");

    auto* uac = app.add_subcommand("uac", "universal abelian cover plan");
    std::size_t root_edge = 0;
    uac->add_option("file", file, "plumbing file")->required();
    uac->add_option("--root-edge", root_edge, "index into the sorted node-edges for the first split");
    uac->add_flag("--json", json_flag, "JSON output (default)");

    auto* fuzz = app.add_subcommand("fuzz", "randomized identity suites");
    FuzzOptions fopt;
    std::string repro_dir;
    fuzz->add_option("--seeds", fopt.seeds, "number of seeds")->default_val(500);
    fuzz->add_option("--max-vertices", fopt.bounds.max_vertices, "largest generated plumbing")->default_val(12);
    fuzz->add_option("--start", fopt.start, "first seed")->default_val(0);
    fuzz->add_option("--jobs", fopt.jobs, "worker threads")->default_val(1);
    fuzz->add_option("--repro-dir", repro_dir, "write one reproduction file per failing seed");

    auto* render = app.add_subcommand("render", "splice diagram as DOT or JSON");
    bool dot = false;
    render->add_option("file", file, "plumbing file or splice JSON")->required();
    render->add_flag("--dot", dot, "Graphviz DOT output");
    render->add_flag("--json", json_flag, "JSON output (default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kInputError;
    }

    try {
        if (*derive) return cmd_derive(file, with_cover);
        if (*check) return cmd_check(file, strict);
        if (*decomp) return cmd_decomp(file, order);
        if (*cover) return cmd_cover(file, edge);
        if (*uac) return cmd_uac(file, root_edge);
        if (*fuzz) {
            if (fopt.bounds.max_vertices < fopt.bounds.min_vertices) throw InputError("--max-vertices must be >= 1");
            return cmd_fuzz(fopt, repro_dir);
        }
        if (*render) return cmd_render(file, dot && !json_flag);
    } catch (const ConsistencyError& e) {
        std::cerr << "gmtk: internal cross-check failed: " << e.what() << "\n";
        return kConsistency;
    } catch (const InputError& e) {
        std::cerr << "gmtk: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "gmtk: " << e.what() << "\n";
        return kConsistency;
    }
    return kInputError;
}
