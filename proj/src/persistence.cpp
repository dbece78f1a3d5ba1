#include "toposz/persistence.hpp"

#include <algorithm>
#include <numeric>

namespace toposz {

namespace {

// One sweep in the given direction. Components are represented by their
// oldest vertex; a younger component dying at v emits (f(birth), f(v)) when
// ascending and (f(v), f(birth)) when descending.
void sweep(const ScalarField &field, bool ascending, std::vector<std::pair<double, double>> &out) {
    const std::size_t n = field.vertex_count();
    std::vector<std::uint32_t> sorted(n);
    std::iota(sorted.begin(), sorted.end(), 0u);
    std::sort(sorted.begin(), sorted.end(), [&](std::uint32_t a, std::uint32_t b) {
        return ascending ? field.less(a, b) : field.less(b, a);
    });
    std::vector<std::uint32_t> rank_of(n);
    for (std::size_t i = 0; i < n; ++i) rank_of[sorted[i]] = static_cast<std::uint32_t>(i);

    constexpr std::uint32_t none = ~0u;
    std::vector<std::uint32_t> parent(n, none);  // union-find, none = not yet swept
    std::vector<std::uint32_t> birth(n);         // per component root
    const auto find = [&](std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    const auto older = [&](std::uint32_t a, std::uint32_t b) {
        return rank_of[a] < rank_of[b] ? a : b;
    };

    std::vector<VertexId> nbrs;
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::uint32_t v = sorted[i];
        parent[v] = v;
        birth[v] = v;
        simplicial_neighbors(field, v, nbrs);
        for (VertexId un : nbrs) {
            const auto u = static_cast<std::uint32_t>(un);
            if (parent[u] == none) continue;  // not yet swept
            const std::uint32_t ru = find(u), rv = find(v);
            if (ru == rv) continue;
            const std::uint32_t surviving = older(birth[ru], birth[rv]);
            const std::uint32_t dying = surviving == birth[ru] ? birth[rv] : birth[ru];
            if (dying != v) {  // v itself has zero persistence, not a feature
                if (ascending)
                    out.emplace_back(field.values[dying], field.values[v]);
                else
                    out.emplace_back(field.values[v], field.values[dying]);
            }
            parent[ru] = rv;
            birth[rv] = surviving;
        }
    }
}

}  // namespace

PersistenceDiagram persistence_diagram_0d(const ScalarField &field, bool include_superlevel) {
    if (field.values.empty()) throw std::invalid_argument("empty field");
    PersistenceDiagram d;
    sweep(field, /*ascending=*/true, d.pairs);
    if (include_superlevel) sweep(field, /*ascending=*/false, d.pairs);
    const auto [lo, hi] = std::minmax_element(field.values.begin(), field.values.end());
    d.pairs.emplace_back(*lo, *hi);
    std::sort(d.pairs.begin(), d.pairs.end());
    return d;
}

}  // namespace toposz
