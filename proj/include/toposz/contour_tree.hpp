#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "toposz/field.hpp"

namespace toposz {

// Augmented contour tree of a scalar field under the symbolic-perturbation
// order: nodes are the critical vertices, arcs connect them, and every regular
// grid vertex is assigned to exactly one arc (the segmentation).
struct ContourTree {
    struct Node {
        VertexId vertex;
        double scalar;
        CriticalKind kind;
        std::vector<std::uint32_t> up_arcs;    // arcs whose lower endpoint is this node
        std::vector<std::uint32_t> down_arcs;  // arcs whose upper endpoint is this node
    };
    struct Arc {
        std::uint32_t upper;  // node index, scalar(upper) > scalar(lower)
        std::uint32_t lower;
    };

    static constexpr std::uint32_t npos = ~0u;

    int rank = 2;
    std::array<std::size_t, 3> dims{1, 1, 1};
    std::vector<Node> nodes;
    std::vector<Arc> arcs;
    std::vector<std::uint32_t> vertex_arc;   // per grid vertex; npos for critical vertices
    std::vector<std::uint32_t> vertex_node;  // per grid vertex; npos for regular vertices
    double simplification_threshold = 0.0;

    std::size_t degree(std::uint32_t node) const {
        return nodes[node].up_arcs.size() + nodes[node].down_arcs.size();
    }
};

// Join/split sweep plus merge; deterministic under the tie-break order.
ContourTree build_contour_tree(const ScalarField &field);

// Removes leaf branches of persistence <= eps, smallest first, contracting
// degree-2 saddles and merging their segmentation; the global min-max pair
// always survives. Output records eps.
ContourTree simplify(const ContourTree &tree, double eps);

// One entry per leaf of the tree: the branch's extremum, the saddle where it
// merges (its persistence pair), and the arcs along the extremum-to-saddle
// path. The root (global min-max) branch contributes the last two entries,
// one per global extremum, marked root.
struct Branch {
    std::uint32_t extremum;  // node index
    std::uint32_t saddle;    // node index of the pairing saddle (partner extremum for root)
    double persistence;
    bool root = false;
    std::vector<std::uint32_t> arcs;  // original arc indices on the branch path
};
std::vector<Branch> branch_decomposition(const ContourTree &tree);

// Inverse of the per-vertex arc assignment; index i lists the regular
// vertices of arcs[i].
std::vector<std::vector<VertexId>> segmentation_regions(const ContourTree &tree);

// Line-oriented export for goldens: "node <vertex> <scalar> <kind>" then
// "arc <upperIdx> <lowerIdx>".
void write_tree(std::ostream &os, const ContourTree &tree);

}  // namespace toposz
