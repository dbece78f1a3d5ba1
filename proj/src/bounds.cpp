#include "toposz/bounds.hpp"

#include <algorithm>

#include "toposz/kernels.hpp"
#include "toposz/validate.hpp"

namespace toposz {

BoundsField initialize_bounds(const ScalarField &field, const ContourTree &tree) {
    const std::size_t n = field.vertex_count();
    if (tree.vertex_arc.size() != n) throw std::invalid_argument("tree does not match field");
    for (std::size_t v = 0; v < n; ++v)
        if (tree.vertex_arc[v] == ContourTree::npos && tree.vertex_node[v] == ContourTree::npos)
            throw std::logic_error("segmentation is not total");

    std::vector<double> arc_lo(tree.arcs.size()), arc_hi(tree.arcs.size());
    for (std::size_t a = 0; a < tree.arcs.size(); ++a) {
        arc_lo[a] = tree.nodes[tree.arcs[a].lower].scalar;
        arc_hi[a] = tree.nodes[tree.arcs[a].upper].scalar;
    }
    BoundsField bounds;
    bounds.lower.resize(n);
    bounds.upper.resize(n);
    kernels::fill_bounds(field.values, tree.vertex_arc, tree.vertex_node, arc_lo, arc_hi,
                         bounds.lower, bounds.upper);
    return bounds;
}

MonotonePartition partition_monotone(const ScalarField &field, std::span<const VertexId> region,
                                     std::size_t parts) {
    if (region.empty()) throw std::invalid_argument("region must be non-empty");
    if (parts < 1) throw std::invalid_argument("parts must be positive");
    std::vector<VertexId> sorted(region.begin(), region.end());
    std::sort(sorted.begin(), sorted.end(),
              [&](VertexId a, VertexId b) { return field.less(a, b); });

    MonotonePartition out;
    const std::size_t n = sorted.size();
    const std::size_t base = n / parts;
    const std::size_t extra = n % parts;  // larger buckets first
    std::size_t at = 0;
    for (std::size_t i = 0; i < parts && at < n; ++i) {
        const std::size_t size = base + (i < extra ? 1 : 0);
        if (size == 0) break;
        std::vector<VertexId> bucket(sorted.begin() + static_cast<std::ptrdiff_t>(at),
                                     sorted.begin() + static_cast<std::ptrdiff_t>(at + size));
        out.ranges.emplace_back(field.values[bucket.front()], field.values[bucket.back()]);
        out.buckets.push_back(std::move(bucket));
        at += size;
    }
    return out;
}

std::vector<VertexId> dilate_region(const ScalarField &field, std::span<const VertexId> region,
                                    int layers) {
    std::vector<std::uint8_t> mask(field.vertex_count(), 0), next;
    for (VertexId v : region) mask[v] = 1;
    for (int i = 0; i < layers; ++i) {
        kernels::dilate_once(field.rank, field.dims, mask, next);
        mask.swap(next);
    }
    std::vector<VertexId> out;
    for (std::size_t v = 0; v < mask.size(); ++v)
        if (mask[v]) out.push_back(v);
    return out;
}

namespace {

// P3/N2 bound update over a monotone partition: members of bucket R_i take
// (min f, max f) over R_i, intersected with the current bounds so refinements
// only ever tighten; critical vertices of the simplified tree stay pinned.
void tighten(BoundsField &bounds, const ScalarField &field, const ContourTree &tree_eps,
             std::span<const VertexId> region, int k) {
    const MonotonePartition part = partition_monotone(field, region, static_cast<std::size_t>(k) + 1);
    for (std::size_t i = 0; i < part.buckets.size(); ++i) {
        const auto [lo, hi] = part.ranges[i];
        for (VertexId v : part.buckets[i]) {
            if (tree_eps.vertex_node[v] != ContourTree::npos) continue;
            bounds.lower[v] = std::max(bounds.lower[v], lo);
            bounds.upper[v] = std::min(bounds.upper[v], hi);
        }
    }
}

}  // namespace

void refine_for_false_positive(BoundsField &bounds, const ScalarField &field,
                               const ContourTree &tree_eps, const FalseCase &fc, int k) {
    if (k < 1) throw std::invalid_argument("iteration index must be >= 1");
    std::vector<VertexId> region = k_layer_neighborhood(field, fc.saddle, k);
    region.insert(region.end(), fc.region.begin(), fc.region.end());
    std::sort(region.begin(), region.end());
    region.erase(std::unique(region.begin(), region.end()), region.end());
    tighten(bounds, field, tree_eps, region, k);
}

void refine_for_false_negative_or_type(BoundsField &bounds, const ScalarField &field,
                                       const ContourTree &tree_eps, const FalseCase &fc, int k) {
    if (k < 1) throw std::invalid_argument("iteration index must be >= 1");
    const std::vector<VertexId> region = dilate_region(field, fc.region, k);
    tighten(bounds, field, tree_eps, region, k);
}

}  // namespace toposz
