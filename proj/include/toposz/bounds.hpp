#pragma once

#include <span>
#include <vector>

#include "toposz/contour_tree.hpp"
#include "toposz/field.hpp"

namespace toposz {

struct FalseCase;  // validate.hpp

// Per-vertex admissible value ranges: lower[v] <= f(v) <= upper[v] always;
// critical vertices of the simplified tree are pinned, lower = upper = f(v).
struct BoundsField {
    std::vector<double> lower;
    std::vector<double> upper;
};

// Arc-region spans per the simplified tree's segmentation: regular vertices of
// arc (a, b) get (f(b), f(a)) widened to contain their own value (regions can
// hold remnants of simplified-away features), critical vertices get pinned.
BoundsField initialize_bounds(const ScalarField &field, const ContourTree &tree);

// Value-rank bucketing of a region: sorted by the tie-break order, split into
// contiguous buckets of near-equal size (larger buckets first), which makes
// max(R_i) <= min(R_{i+1}) hold by construction.
struct MonotonePartition {
    std::vector<std::vector<VertexId>> buckets;
    std::vector<std::pair<double, double>> ranges;  // (min f, max f) per bucket
};
MonotonePartition partition_monotone(const ScalarField &field, std::span<const VertexId> region,
                                     std::size_t parts);

// Iteration-k refinements: build the affected region, split it into k+1
// monotone buckets and tighten each member's bounds to its bucket span.
// Critical vertices of tree_eps stay pinned; bounds never widen.
void refine_for_false_positive(BoundsField &bounds, const ScalarField &field,
                               const ContourTree &tree_eps, const FalseCase &fc, int k);
void refine_for_false_negative_or_type(BoundsField &bounds, const ScalarField &field,
                                       const ContourTree &tree_eps, const FalseCase &fc, int k);

// Chebyshev dilation helper shared by the refinements.
std::vector<VertexId> dilate_region(const ScalarField &field, std::span<const VertexId> region,
                                    int layers);

}  // namespace toposz
