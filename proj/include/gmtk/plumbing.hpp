#pragma once

#include "gmtk/exact.hpp"
#include "gmtk/linalg.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gmtk {

struct PlumbingVertex {
    std::string id;
    Integer weight;
};

// Genus-zero plumbing graph. Vertex order is insertion order and is preserved by
// every derived diagram.
class PlumbingDiagram {
public:
    std::size_t add_vertex(std::string id, Integer weight);
    void add_edge(std::string_view a, std::string_view b);
    void add_edge(std::size_t a, std::size_t b);

    std::size_t size() const { return vertices_.size(); }
    const PlumbingVertex& vertex(std::size_t i) const { return vertices_[i]; }
    const std::vector<PlumbingVertex>& vertices() const { return vertices_; }
    const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
    const std::vector<std::size_t>& neighbors(std::size_t i) const { return adjacency_[i]; }
    std::size_t valence(std::size_t i) const { return adjacency_[i].size(); }
    std::optional<std::size_t> find(std::string_view id) const;
    std::size_t index_of(std::string_view id) const;  // throws InputError
    bool adjacent(std::size_t a, std::size_t b) const;

    bool operator==(const PlumbingDiagram& o) const;

private:
    std::vector<PlumbingVertex> vertices_;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
    std::vector<std::vector<std::size_t>> adjacency_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

struct NormalFormReport {
    bool ok = true;
    std::vector<std::string> violations;
};

NormalFormReport validate_normal_form(const PlumbingDiagram& d);

PlumbingDiagram dumbbell48();
PlumbingDiagram e8();
// Star with the given centre weight and arms of -2 vertices of the given lengths.
PlumbingDiagram star(const Integer& centre, const std::vector<std::size_t>& arm_lengths);

IntMatrix intersection_matrix(const PlumbingDiagram& d);

// det(-A).
Integer det_plumbing(const PlumbingDiagram& d);
Integer h1_order(const PlumbingDiagram& d);

// Component of d - v containing the neighbour u of v.
PlumbingDiagram cut_after(const PlumbingDiagram& d, std::string_view v, std::string_view u);
std::vector<std::size_t> component_beyond(const PlumbingDiagram& d, std::size_t v, std::size_t u);

struct SeifertPair {
    Integer alpha;
    Integer beta;
};

struct SeifertData {
    std::vector<SeifertPair> arms;
    Rational euler;
};

// Requires every component of d - centre to be a path attached at one end.
SeifertData seifert_data(const PlumbingDiagram& d, std::string_view centre);

// -e_v = -w_v - sum 1/[string], leaf directions use the whole arm and node
// directions the vertices strictly before the next node.
Rational node_euler_from_plumbing(const PlumbingDiagram& d, std::string_view v);

// Vertices strictly between v and the next vertex of valence != 2 in the
// direction of neighbour u, plus that end vertex.
struct StringWalk {
    std::vector<std::size_t> interior;
    std::size_t end;
};
StringWalk walk_string(const PlumbingDiagram& d, std::size_t v, std::size_t u);

// det(-A) on the string strictly between two adjacent nodes; 1 if empty.
Integer string_determinant(const PlumbingDiagram& d, std::string_view v, std::string_view w);

struct GeneratorBounds {
    std::size_t min_vertices = 1;
    std::size_t max_vertices = 12;
    long string_weight_min = -5;
    long string_weight_max = -2;
    long node_weight_min = -5;
    long node_weight_max = -1;
};

// Deterministic in the seed. Output is in normal form with det != 0.
PlumbingDiagram random_normal_form(std::uint64_t seed, const GeneratorBounds& bounds = {});

// Plumbing tree whose vertex relations are arbitrary integer rows supported on
// the vertex and its neighbours. A leaf row x*m_a + y*m_b with |x| != 1 glues a
// solid torus along a non-standard slope; gcd(x, y) > 1 makes its core an
// orbifold curve of that degree. Relations are rows: H_1 = Z^V / rowspan(R).
class GeneralizedPlumbing {
public:
    GeneralizedPlumbing() = default;
    explicit GeneralizedPlumbing(const PlumbingDiagram& d);
    GeneralizedPlumbing(std::vector<std::string> ids, std::vector<std::vector<std::size_t>> adjacency,
                        IntMatrix relations);

    std::size_t size() const { return ids_.size(); }
    const std::string& id(std::size_t i) const { return ids_[i]; }
    const std::vector<std::string>& ids() const { return ids_; }
    const std::vector<std::size_t>& neighbors(std::size_t i) const { return adjacency_[i]; }
    std::size_t valence(std::size_t i) const { return adjacency_[i].size(); }
    const IntMatrix& relations() const { return relations_; }
    std::optional<std::size_t> find(std::string_view id) const;
    std::size_t index_of(std::string_view id) const;

    std::vector<std::size_t> component_beyond(std::size_t v, std::size_t u) const;
    StringWalk walk_string(std::size_t v, std::size_t u) const;
    // det(-R) restricted to the given vertices.
    Integer piece_determinant(const std::vector<std::size_t>& vertices) const;
    Integer determinant() const;
    // Orbifold degree carried by a leaf row (content of the row).
    Integer row_content(std::size_t i) const;
    // Multiply the relation row of a vertex, used for orbifold leaves.
    void scale_row(std::size_t i, const Integer& factor);

private:
    std::vector<std::string> ids_;
    std::vector<std::vector<std::size_t>> adjacency_;
    IntMatrix relations_;
};

}  // namespace gmtk
