#pragma once

#include "gmtk/exact.hpp"
#include "gmtk/invariants.hpp"
#include "gmtk/plumbing.hpp"
#include "gmtk/splice.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gmtk {

struct NegativeNode {
    std::string node;
};

struct NonPositiveEdge {
    std::string a;
    std::string b;
    Integer determinant;
};

struct EliminationStep {
    std::string node;
    std::optional<std::string> neighbor;
    Rational pivot;
    std::optional<Rational> neighbor_before;
    std::optional<Rational> neighbor_after;
    // Set when the pivot and update were also matched against the end-node closed form.
    bool closed_form_checked = false;
};

struct EliminationTranscript {
    std::vector<EliminationStep> steps;
    bool negative_definite = true;
};

struct DefinitenessWitness {
    EliminationTranscript reduction;
    std::vector<int> minor_signs;  // leading principal minors of minus the reduced matrix
};

using Certificate = std::variant<std::monostate, NegativeNode, NonPositiveEdge, DefinitenessWitness>;

struct SingularityVerdict {
    bool verdict = false;
    Certificate certificate;
};

// All node signs + and all edge determinants > 0.
SingularityVerdict splice_condition(const SpliceDiagram& g);

// Peel end nodes (lowest id first) off the reduced plumbing matrix.
EliminationTranscript end_node_reduction(const SpliceDiagram& g, const Integer& d);

struct LinkVerdict {
    bool verdict = false;
    bool route_agreement = true;
    bool splice_route = false;
    bool reduced_route = false;     // leading minors of the reduced matrix
    bool reduction_route = false;   // end-node elimination
    bool plumbing_route = false;    // leading minors of -A
    Certificate certificate;
};

// Routes that disagree are reported through route_agreement, never thrown.
LinkVerdict is_singularity_link(const PlumbingDiagram& d);

}  // namespace gmtk
