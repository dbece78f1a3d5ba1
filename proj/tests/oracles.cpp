#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace toposz::oracle {

CanonicalTree canonical(const ContourTree &tree) {
    CanonicalTree out;
    for (const ContourTree::Node &n : tree.nodes)
        out.nodes.emplace_back(n.vertex, static_cast<int>(n.kind));
    std::sort(out.nodes.begin(), out.nodes.end());
    for (const ContourTree::Arc &a : tree.arcs)
        out.arcs.emplace_back(tree.nodes[a.upper].vertex, tree.nodes[a.lower].vertex);
    std::sort(out.arcs.begin(), out.arcs.end());
    out.segmentation.resize(tree.vertex_arc.size());
    for (std::size_t v = 0; v < tree.vertex_arc.size(); ++v) {
        if (tree.vertex_node[v] != ContourTree::npos) {
            out.segmentation[v] = {v, v};
        } else {
            const ContourTree::Arc &a = tree.arcs[tree.vertex_arc[v]];
            out.segmentation[v] = {tree.nodes[a.upper].vertex, tree.nodes[a.lower].vertex};
        }
    }
    return out;
}

namespace {

// Freudenthal simplices with the diagonal fixed toward increasing coordinates:
// two triangles per square, six path tetrahedra per cube.
std::vector<std::vector<std::uint32_t>> enumerate_simplices(const ScalarField &f) {
    std::vector<std::vector<std::uint32_t>> out;
    const auto at = [&](std::int64_t i, std::int64_t j, std::int64_t k) {
        return static_cast<std::uint32_t>(f.vertex_at({i, j, k}));
    };
    if (f.rank == 2) {
        for (std::int64_t i = 0; i + 1 < static_cast<std::int64_t>(f.dims[0]); ++i)
            for (std::int64_t j = 0; j + 1 < static_cast<std::int64_t>(f.dims[1]); ++j) {
                out.push_back({at(i, j, 0), at(i + 1, j, 0), at(i + 1, j + 1, 0)});
                out.push_back({at(i, j, 0), at(i, j + 1, 0), at(i + 1, j + 1, 0)});
            }
        return out;
    }
    constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (std::int64_t i = 0; i + 1 < static_cast<std::int64_t>(f.dims[0]); ++i)
        for (std::int64_t j = 0; j + 1 < static_cast<std::int64_t>(f.dims[1]); ++j)
            for (std::int64_t k = 0; k + 1 < static_cast<std::int64_t>(f.dims[2]); ++k)
                for (const auto &p : perms) {
                    std::array<std::int64_t, 3> c{i, j, k};
                    std::vector<std::uint32_t> tet{at(c[0], c[1], c[2])};
                    for (int step = 0; step < 3; ++step) {
                        ++c[static_cast<std::size_t>(p[step])];
                        tet.push_back(at(c[0], c[1], c[2]));
                    }
                    out.push_back(std::move(tet));
                }
    return out;
}

struct EdgeSet {
    // Edges stored as (lower rank, higher rank) vertex pairs.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::vector<std::vector<std::uint32_t>> simplex_edges;  // per simplex, edge ids
};

EdgeSet collect_edges(const ScalarField &f, const std::vector<std::uint32_t> &rank_of,
                      const std::vector<std::vector<std::uint32_t>> &simplices) {
    EdgeSet out;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> index;
    out.simplex_edges.resize(simplices.size());
    for (std::size_t s = 0; s < simplices.size(); ++s) {
        const auto &verts = simplices[s];
        for (std::size_t a = 0; a < verts.size(); ++a)
            for (std::size_t b = a + 1; b < verts.size(); ++b) {
                std::uint32_t lo = verts[a], hi = verts[b];
                if (rank_of[lo] > rank_of[hi]) std::swap(lo, hi);
                const auto key = std::make_pair(lo, hi);
                auto it = index.find(key);
                if (it == index.end()) {
                    it = index.emplace(key, static_cast<std::uint32_t>(out.edges.size())).first;
                    out.edges.push_back(key);
                }
                out.simplex_edges[s].push_back(it->second);
            }
    }
    (void)f;
    return out;
}

struct SlabLabels {
    std::vector<std::int32_t> comp;  // per edge, -1 when not crossed
    std::vector<std::uint32_t> roots;
};

// Components of the level set inside slab t (between sorted vertices t and
// t+1): crossed edges are adjacent when they share a simplex.
SlabLabels label_slab(const EdgeSet &es, const std::vector<std::uint32_t> &rank_of, std::int64_t t) {
    SlabLabels out;
    out.comp.assign(es.edges.size(), -1);
    std::vector<std::uint32_t> uf(es.edges.size());
    std::iota(uf.begin(), uf.end(), 0u);
    const auto find = [&](std::uint32_t x) {
        while (uf[x] != x) {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        return x;
    };
    const auto crossed = [&](std::uint32_t e) {
        return static_cast<std::int64_t>(rank_of[es.edges[e].first]) <= t &&
               static_cast<std::int64_t>(rank_of[es.edges[e].second]) >= t + 1;
    };
    for (const auto &se : es.simplex_edges) {
        std::uint32_t prev = ~0u;
        for (std::uint32_t e : se) {
            if (!crossed(e)) continue;
            if (prev != ~0u) uf[find(e)] = find(prev);
            prev = e;
        }
    }
    for (std::uint32_t e = 0; e < es.edges.size(); ++e) {
        if (!crossed(e)) continue;
        const std::uint32_t r = find(e);
        if (out.comp[r] < 0) {
            out.comp[r] = static_cast<std::int32_t>(out.roots.size());
            out.roots.push_back(r);
        }
        out.comp[e] = out.comp[r];
    }
    return out;
}

}  // namespace

CanonicalTree level_sweep_contour_tree(const ScalarField &field) {
    const std::size_t n = field.vertex_count();
    std::vector<std::uint32_t> sorted(n);
    std::iota(sorted.begin(), sorted.end(), 0u);
    std::sort(sorted.begin(), sorted.end(),
              [&](std::uint32_t a, std::uint32_t b) { return field.less(a, b); });
    std::vector<std::uint32_t> rank_of(n);
    for (std::size_t i = 0; i < n; ++i) rank_of[sorted[i]] = static_cast<std::uint32_t>(i);

    CanonicalTree out;
    out.segmentation.assign(n, {0, 0});
    if (n == 1) {
        out.nodes.emplace_back(0, static_cast<int>(CriticalKind::minimum));
        out.segmentation[0] = {0, 0};
        return out;
    }

    const auto simplices = enumerate_simplices(field);
    const EdgeSet es = collect_edges(field, rank_of, simplices);

    struct ArcRec {
        VertexId lower = 0, upper = 0;
        std::vector<VertexId> regulars;
    };
    std::vector<ArcRec> arcs;
    // Per slab component: the open arc riding on it, plus one member edge.
    std::map<std::int32_t, std::pair<std::uint32_t, std::uint32_t>> open_prev;  // comp -> (arc, edge)
    SlabLabels prev;
    prev.comp.assign(es.edges.size(), -1);

    std::vector<std::pair<VertexId, int>> nodes;
    for (std::size_t r = 0; r < n; ++r) {
        const std::uint32_t v = sorted[r];
        SlabLabels cur;
        if (r + 1 < n)
            cur = label_slab(es, rank_of, static_cast<std::int64_t>(r));
        else
            cur.comp.assign(es.edges.size(), -1);

        std::set<std::int32_t> below, above;
        for (std::uint32_t e = 0; e < es.edges.size(); ++e) {
            if (es.edges[e].second == v && prev.comp[e] >= 0) below.insert(prev.comp[e]);
            if (es.edges[e].first == v && cur.comp[e] >= 0) above.insert(cur.comp[e]);
        }

        std::map<std::int32_t, std::pair<std::uint32_t, std::uint32_t>> open_cur;
        // Components that do not touch v persist edge-for-edge.
        for (const auto &[comp, rec] : open_prev) {
            if (below.count(comp)) continue;
            const std::uint32_t e = rec.second;
            if (cur.comp[e] < 0) throw std::logic_error("oracle: pass-through component vanished");
            open_cur.emplace(cur.comp[e], rec);
        }

        const auto open_arc = [&](std::int32_t comp) {
            const auto id = static_cast<std::uint32_t>(arcs.size());
            arcs.push_back({v, 0, {}});
            std::uint32_t member = ~0u;
            for (std::uint32_t e = 0; e < es.edges.size(); ++e)
                if (cur.comp[e] == comp) {
                    member = e;
                    break;
                }
            open_cur.emplace(comp, std::make_pair(id, member));
        };

        if (below.empty() && above.empty()) {
            throw std::logic_error("oracle: disconnected event");
        } else if (below.empty()) {
            nodes.emplace_back(v, static_cast<int>(CriticalKind::minimum));
            out.segmentation[v] = {v, v};
            for (std::int32_t a : above) open_arc(a);
        } else if (above.empty()) {
            if (below.size() != 1) throw std::logic_error("oracle: maximum with several contours");
            nodes.emplace_back(v, static_cast<int>(CriticalKind::maximum));
            out.segmentation[v] = {v, v};
            arcs[open_prev.at(*below.begin()).first].upper = v;
        } else if (below.size() == 1 && above.size() == 1) {
            const auto rec = open_prev.at(*below.begin());
            arcs[rec.first].regulars.push_back(v);
            // Rebind to the component continuing above; keep a live edge.
            std::uint32_t member = ~0u;
            for (std::uint32_t e = 0; e < es.edges.size(); ++e)
                if (cur.comp[e] == *above.begin()) {
                    member = e;
                    break;
                }
            open_cur.emplace(*above.begin(), std::make_pair(rec.first, member));
        } else {
            nodes.emplace_back(v, static_cast<int>(CriticalKind::saddle));
            out.segmentation[v] = {v, v};
            for (std::int32_t b : below) arcs[open_prev.at(b).first].upper = v;
            for (std::int32_t a : above) open_arc(a);
        }
        open_prev = std::move(open_cur);
        prev = std::move(cur);
    }

    std::sort(nodes.begin(), nodes.end());
    out.nodes = std::move(nodes);
    for (const ArcRec &a : arcs) {
        out.arcs.emplace_back(a.upper, a.lower);
        for (VertexId reg : a.regulars) out.segmentation[reg] = {a.upper, a.lower};
    }
    std::sort(out.arcs.begin(), out.arcs.end());
    return out;
}

PersistenceDiagram kruskal_diagram_0d(const ScalarField &field, bool include_superlevel) {
    const std::size_t n = field.vertex_count();
    std::vector<std::uint32_t> sorted(n);
    std::iota(sorted.begin(), sorted.end(), 0u);
    std::sort(sorted.begin(), sorted.end(),
              [&](std::uint32_t a, std::uint32_t b) { return field.less(a, b); });
    std::vector<std::uint32_t> rank_of(n);
    for (std::size_t i = 0; i < n; ++i) rank_of[sorted[i]] = static_cast<std::uint32_t>(i);

    const auto simplices = enumerate_simplices(field);
    const EdgeSet es = collect_edges(field, rank_of, simplices);

    PersistenceDiagram d;
    const auto sweep = [&](bool ascending) {
        std::vector<std::uint32_t> order(es.edges.size());
        std::iota(order.begin(), order.end(), 0u);
        // Filtration weight of an edge: its later endpoint in sweep order.
        const auto weight = [&](std::uint32_t e) {
            return ascending ? rank_of[es.edges[e].second]
                             : static_cast<std::uint32_t>(n - 1) - rank_of[es.edges[e].first];
        };
        std::sort(order.begin(), order.end(),
                  [&](std::uint32_t a, std::uint32_t b) { return weight(a) < weight(b); });
        std::vector<std::uint32_t> uf(n), birth(n);
        std::iota(uf.begin(), uf.end(), 0u);
        std::iota(birth.begin(), birth.end(), 0u);
        const auto find = [&](std::uint32_t x) {
            while (uf[x] != x) {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            return x;
        };
        const auto age = [&](std::uint32_t x) { return ascending ? rank_of[x] : n - 1 - rank_of[x]; };
        for (std::uint32_t e : order) {
            const auto [lo, hi] = es.edges[e];
            const std::uint32_t death_vertex = ascending ? hi : lo;
            const std::uint32_t ra = find(lo), rb = find(hi);
            if (ra == rb) continue;
            const std::uint32_t ba = birth[ra], bb = birth[rb];
            const std::uint32_t survivor = age(ba) < age(bb) ? ba : bb;
            const std::uint32_t dying = survivor == ba ? bb : ba;
            if (dying != death_vertex) {
                if (ascending)
                    d.pairs.emplace_back(field.values[dying], field.values[death_vertex]);
                else
                    d.pairs.emplace_back(field.values[death_vertex], field.values[dying]);
            }
            uf[ra] = rb;
            birth[rb] = survivor;
        }
    };
    sweep(true);
    if (include_superlevel) sweep(false);
    const auto [lo, hi] = std::minmax_element(field.values.begin(), field.values.end());
    d.pairs.emplace_back(*lo, *hi);
    std::sort(d.pairs.begin(), d.pairs.end());
    return d;
}

namespace {

using Point = std::pair<double, double>;

inline double diag_cost(const Point &p) { return (p.second - p.first) / 2.0; }
inline double linf(const Point &p, const Point &q) {
    return std::max(std::abs(p.first - q.first), std::abs(p.second - q.second));
}

// Exhaustive assignment over (point-to-point | point-to-diagonal) choices,
// memoized on (index, used mask).
template <bool Bottleneck>
double match_bruteforce(const std::vector<Point> &P, const std::vector<Point> &Q, double q) {
    const std::size_t n = P.size(), m = Q.size();
    if (m > 20) throw std::logic_error("oracle diagrams too large");
    std::vector<std::vector<double>> memo(n + 1, std::vector<double>(std::size_t{1} << m, -1.0));
    const auto combine = [&](double a, double b) { return Bottleneck ? std::max(a, b) : a + b; };
    const auto cost_pp = [&](std::size_t i, std::size_t j) {
        return Bottleneck ? linf(P[i], Q[j]) : std::pow(linf(P[i], Q[j]), q);
    };
    const auto cost_diag = [&](const Point &p) {
        return Bottleneck ? diag_cost(p) : std::pow(diag_cost(p), q);
    };
    const auto rec = [&](auto &&self, std::size_t i, std::size_t mask) -> double {
        if (i == n) {
            double rest = 0.0;
            for (std::size_t j = 0; j < m; ++j)
                if (!(mask >> j & 1)) rest = combine(rest, cost_diag(Q[j]));
            return rest;
        }
        double &slot = memo[i][mask];
        if (slot >= 0.0) return slot;
        double best = combine(cost_diag(P[i]), self(self, i + 1, mask));
        for (std::size_t j = 0; j < m; ++j) {
            if (mask >> j & 1) continue;
            best = std::min(best, combine(cost_pp(i, j), self(self, i + 1, mask | (std::size_t{1} << j))));
        }
        return slot = best;
    };
    const double total = rec(rec, 0, 0);
    return Bottleneck ? total : std::pow(total, 1.0 / q);
}

}  // namespace

double bottleneck_bruteforce(const PersistenceDiagram &a, const PersistenceDiagram &b) {
    return match_bruteforce<true>(a.pairs, b.pairs, 1.0);
}

double wasserstein_bruteforce(const PersistenceDiagram &a, const PersistenceDiagram &b, double q) {
    return match_bruteforce<false>(a.pairs, b.pairs, q);
}

std::vector<Extremum> scan_local_extrema(const ScalarField &field) {
    std::vector<Extremum> out;
    std::vector<VertexId> nbrs;
    for (VertexId v = 0; v < field.vertex_count(); ++v) {
        simplicial_neighbors(field, v, nbrs);
        bool is_min = true, is_max = true;
        for (VertexId u : nbrs) {
            if (field.less(u, v)) is_min = false;
            if (field.less(v, u)) is_max = false;
        }
        if (is_min) out.push_back({v, false});
        if (is_max) out.push_back({v, true});
    }
    return out;
}

void check_tree_structure(const ContourTree &tree, const ScalarField &field, bool simplified) {
    const auto fail = [](const char *what) { throw std::logic_error(what); };
    if (tree.nodes.empty()) fail("tree has no nodes");
    if (!tree.arcs.empty() && tree.arcs.size() + 1 != tree.nodes.size())
        fail("arc count is not nodes-1");

    // Acyclicity + connectivity via union-find over nodes.
    std::vector<std::uint32_t> uf(tree.nodes.size());
    std::iota(uf.begin(), uf.end(), 0u);
    const auto find = [&](std::uint32_t x) {
        while (uf[x] != x) {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        return x;
    };
    std::size_t leaves = 0, interior = 0;
    for (const ContourTree::Arc &a : tree.arcs) {
        const ContourTree::Node &u = tree.nodes[a.upper], &l = tree.nodes[a.lower];
        if (u.scalar < l.scalar || (u.scalar == l.scalar && u.vertex < l.vertex))
            fail("arc direction violates the tie-break order");
        if (find(a.upper) == find(a.lower)) fail("arcs form a cycle");
        uf[find(a.upper)] = find(a.lower);
    }
    for (std::uint32_t i = 0; i < tree.nodes.size(); ++i) {
        const ContourTree::Node &nd = tree.nodes[i];
        const std::size_t deg = nd.up_arcs.size() + nd.down_arcs.size();
        if (deg == 1)
            ++leaves;
        else if (deg >= 2)
            ++interior;
        if (deg == 2 && !nd.up_arcs.empty() && !nd.down_arcs.empty())
            fail("degree-2 junction was not contracted");
        switch (nd.kind) {
            case CriticalKind::minimum:
                if (!nd.down_arcs.empty() || (tree.nodes.size() > 1 && nd.up_arcs.size() != 1))
                    fail("minimum is not a lower leaf");
                break;
            case CriticalKind::maximum:
                if (!nd.up_arcs.empty() || nd.down_arcs.size() != 1) fail("maximum is not an upper leaf");
                break;
            case CriticalKind::saddle:
                if (nd.up_arcs.empty() || nd.down_arcs.empty()) fail("saddle lacks both directions");
                break;
        }
        for (std::uint32_t a : nd.up_arcs)
            if (tree.arcs[a].lower != i) fail("up arc list out of sync");
        for (std::uint32_t a : nd.down_arcs)
            if (tree.arcs[a].upper != i) fail("down arc list out of sync");
    }
    if (!tree.arcs.empty() && leaves != tree.arcs.size() - interior + 1)
        fail("leaf/arc/interior count mismatch");

    if (tree.vertex_arc.size() != field.vertex_count()) fail("segmentation size mismatch");
    for (std::size_t v = 0; v < tree.vertex_arc.size(); ++v) {
        const bool is_node = tree.vertex_node[v] != ContourTree::npos;
        const bool is_arc = tree.vertex_arc[v] != ContourTree::npos;
        if (is_node == is_arc) fail("vertex is not exactly one of node/arc");
        if (is_node && tree.nodes[tree.vertex_node[v]].vertex != v) fail("vertex_node mismatch");
        if (is_arc && !simplified) {
            const ContourTree::Arc &a = tree.arcs[tree.vertex_arc[v]];
            if (field.values[v] < tree.nodes[a.lower].scalar ||
                field.values[v] > tree.nodes[a.upper].scalar)
                fail("region value outside its arc span");
        }
    }
}

}  // namespace toposz::oracle
