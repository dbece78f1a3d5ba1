#pragma once

// Independent reference implementations used only by tests. Each one takes a
// different route than the library: the contour tree oracle sweeps level sets
// and labels contour components slab by slab, the diagram oracle runs
// edge-based Kruskal instead of a vertex sweep, and the distance oracles
// enumerate matchings exhaustively.

#include <utility>
#include <vector>

#include "toposz/contour_tree.hpp"
#include "toposz/field.hpp"
#include "toposz/persistence.hpp"

namespace toposz::oracle {

// Order-insensitive form for exact tree comparison.
struct CanonicalTree {
    std::vector<std::pair<VertexId, int>> nodes;            // (vertex, kind)
    std::vector<std::pair<VertexId, VertexId>> arcs;        // (upper vertex, lower vertex)
    std::vector<std::pair<VertexId, VertexId>> segmentation;  // per vertex: arc key, or (v, v)
    bool operator==(const CanonicalTree &) const = default;
};

CanonicalTree canonical(const ContourTree &tree);

// Brute-force level-set sweep: slab-by-slab contour components via
// connected-component labeling of crossed edges inside shared simplices.
CanonicalTree level_sweep_contour_tree(const ScalarField &field);

// Edge-based Kruskal sweep, both directions plus the essential pair.
PersistenceDiagram kruskal_diagram_0d(const ScalarField &field, bool include_superlevel = true);

// Exhaustive matching over all diagonal-augmented bijections.
double bottleneck_bruteforce(const PersistenceDiagram &a, const PersistenceDiagram &b);
double wasserstein_bruteforce(const PersistenceDiagram &a, const PersistenceDiagram &b, double q);

// Strict local extrema under the tie-break order.
struct Extremum {
    VertexId vertex;
    bool is_max;
};
std::vector<Extremum> scan_local_extrema(const ScalarField &field);

// Structural invariants of a built (or simplified) tree; throws on violation.
// Containment of region values in the arc span is only asserted for
// unsimplified trees.
void check_tree_structure(const ContourTree &tree, const ScalarField &field, bool simplified);

}  // namespace toposz::oracle
