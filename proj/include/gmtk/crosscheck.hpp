#pragma once

#include "gmtk/cover.hpp"
#include "gmtk/plumbing.hpp"
#include "gmtk/splice.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace gmtk {

// Outcome of one suite on one input. Exceptions thrown by the code under test
// are recorded as failures, not propagated.
struct CheckResult {
    std::size_t checks = 0;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
    void expect(bool cond, const std::string& what);
    void merge(const CheckResult& o);
};

// Determinant and linking identities, normalization, Euler-number routes and
// the edge-split recursion for det(-A).
CheckResult check_identities(const PlumbingDiagram& d);

// All singularity-link routes agree.
CheckResult check_theorem1(const PlumbingDiagram& d);

// Splits at every node-edge in both orientations, piece data, plan invariants.
// No-op for diagrams with fewer than two nodes.
CheckResult check_cover(const PlumbingDiagram& d);

// Orbifold degrees on leaves: homology route against orbifold_adjust.
CheckResult check_orbifold(const PlumbingDiagram& d, const OrbifoldDecoration& deco);

// Degrees 2..4 on a seed-chosen subset of leaves.
OrbifoldDecoration random_decoration(const SpliceDiagram& g, std::uint64_t seed);

struct SeedReport {
    std::uint64_t seed = 0;
    std::size_t vertices = 0;
    std::size_t nodes = 0;
    bool zhs = false;
    bool singular = false;
    std::size_t checks = 0;
    std::map<std::string, std::vector<std::string>> failures;  // suite -> messages
    std::string reproduction;  // shrunk plumbing text, failing seeds only
};

SeedReport run_seed(std::uint64_t seed, const GeneratorBounds& bounds);

// Greedily drops leaves while the named suite keeps failing.
PlumbingDiagram shrink_failure(const PlumbingDiagram& d, const std::string& suite, std::uint64_t seed);

struct FuzzOptions {
    std::uint64_t start = 0;
    std::size_t seeds = 500;
    GeneratorBounds bounds;
    unsigned jobs = 1;
};

struct FuzzSummary {
    std::size_t seeds = 0;
    std::size_t checks = 0;
    std::size_t atomic = 0;
    std::size_t one_node = 0;
    std::size_t multi_node = 0;
    std::size_t zhs = 0;
    std::size_t singular = 0;
    std::map<std::string, std::size_t> suite_failures;
    std::vector<SeedReport> failing;  // seed order

    bool ok() const { return failing.empty(); }
};

FuzzSummary run_fuzz(const FuzzOptions& options);

}  // namespace gmtk
