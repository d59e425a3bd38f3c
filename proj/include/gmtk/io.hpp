#pragma once

#include "gmtk/cover.hpp"
#include "gmtk/error.hpp"
#include "gmtk/invariants.hpp"
#include "gmtk/plumbing.hpp"
#include "gmtk/singularity.hpp"
#include "gmtk/splice.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace gmtk {

class ParseError : public InputError {
public:
    ParseError(std::size_t line, const std::string& what)
        : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Lines: "v <id> <weight>", "e <id> <id>"; '#' starts a comment.
PlumbingDiagram parse_plumbing(std::string_view text);
std::string serialize_plumbing(const PlumbingDiagram& d);

// FNV-1a over the canonical serialization.
std::string plumbing_digest(const PlumbingDiagram& d);

using json = nlohmann::ordered_json;

// Integers that fit in 64 bits are JSON numbers, larger ones decimal strings.
json integer_json(const Integer& x);
Integer integer_from_json(const json& j);
json rational_json(const Rational& q);
Rational rational_from_json(const json& j);

json splice_json(const SpliceDiagram& g, const OrbifoldDecoration& deco = {});
json splice_json(const UnnormalizedSpliceDiagram& g);
SpliceDiagram splice_from_json(const json& j, OrbifoldDecoration* deco = nullptr);

json decomposition_json(const DecompositionGraph& g);
DecompositionGraph decomposition_from_json(const json& j);

json certificate_json(const Certificate& c);
Certificate certificate_from_json(const json& j);
json verdict_json(const SingularityVerdict& v);
json verdict_json(const LinkVerdict& v);
LinkVerdict link_verdict_from_json(const json& j);

json cover_split_json(const CoverSplit& s);
json piece_data_json(const CoverPieceData& p);
json uac_json(const UacPlan& p);

struct EdgeRecord {
    std::string a;
    std::string b;
    Integer determinant;
    Rational pairing;
};

struct Report {
    std::string digest;
    Integer h1_order;
    SpliceDiagram diagram;
    std::vector<EdgeRecord> edges;
    std::optional<DecompositionGraph> decomposition;
    std::optional<LinkVerdict> verdict;
    std::optional<json> cover;

    bool operator==(const Report& o) const;
};

Report make_report(const PlumbingDiagram& d, bool with_cover);
json report_json(const Report& r);
Report report_from_json(const json& j);

std::string to_dot(const SpliceDiagram& g, const OrbifoldDecoration& deco = {});

}  // namespace gmtk
