#include "toposz/contour_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <stdexcept>

namespace toposz {

namespace {

constexpr std::uint32_t npos = ContourTree::npos;

struct UnionFind {
    std::vector<std::uint32_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    std::uint32_t unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[b] = a;
        return a;
    }
};

// One monotone sweep: the join tree when descending (components of superlevel
// sets, leaves at maxima), the split tree when ascending. parent[] points in
// the sweep direction; the root (last vertex swept) has parent npos.
struct MergeTree {
    std::vector<std::uint32_t> parent;
    std::vector<std::vector<std::uint32_t>> children;
};

MergeTree build_merge_tree(const ScalarField &field, const std::vector<std::uint32_t> &sorted,
                           const std::vector<std::uint32_t> &rank_of, bool descending) {
    const std::size_t n = field.vertex_count();
    MergeTree t;
    t.parent.assign(n, npos);
    t.children.assign(n, {});
    UnionFind uf(n);
    std::vector<std::uint32_t> front(n, npos);  // most recent vertex of each component
    std::vector<VertexId> nbrs;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t v = descending ? sorted[n - 1 - i] : sorted[i];
        front[v] = v;
        simplicial_neighbors(field, v, nbrs);
        for (VertexId un : nbrs) {
            const auto u = static_cast<std::uint32_t>(un);
            const bool processed = descending ? rank_of[u] > rank_of[v] : rank_of[u] < rank_of[v];
            if (!processed) continue;
            const std::uint32_t ru = uf.find(u);
            if (ru == uf.find(v)) continue;
            const std::uint32_t attach = front[ru];
            t.parent[attach] = v;
            t.children[v].push_back(attach);
            front[uf.unite(ru, uf.find(v))] = v;
        }
    }
    return t;
}

void drop_child(std::vector<std::uint32_t> &children, std::uint32_t x) {
    auto it = std::find(children.begin(), children.end(), x);
    if (it == children.end()) throw std::logic_error("merge tree child list out of sync");
    *it = children.back();
    children.pop_back();
}

}  // namespace

ContourTree build_contour_tree(const ScalarField &field) {
    if (field.rank != 2 && field.rank != 3) throw std::invalid_argument("field rank must be 2 or 3");
    const std::size_t n = field.vertex_count();
    if (n == 0) throw std::invalid_argument("cannot build a contour tree of an empty field");

    ContourTree tree;
    tree.rank = field.rank;
    tree.dims = field.dims;
    tree.vertex_arc.assign(n, npos);
    tree.vertex_node.assign(n, npos);

    if (n == 1) {
        tree.nodes.push_back({0, field.values[0], CriticalKind::minimum, {}, {}});
        tree.vertex_node[0] = 0;
        return tree;
    }

    std::vector<std::uint32_t> sorted(n);
    std::iota(sorted.begin(), sorted.end(), 0u);
    std::sort(sorted.begin(), sorted.end(),
              [&](std::uint32_t a, std::uint32_t b) { return field.less(a, b); });
    std::vector<std::uint32_t> rank_of(n);
    for (std::size_t i = 0; i < n; ++i) rank_of[sorted[i]] = static_cast<std::uint32_t>(i);

    MergeTree jt, st;
#pragma omp parallel sections
    {
#pragma omp section
        jt = build_merge_tree(field, sorted, rank_of, /*descending=*/true);
#pragma omp section
        st = build_merge_tree(field, sorted, rank_of, /*descending=*/false);
    }

    // Carr-Snoeyink-Axen merge: peel vertices that are a leaf in one tree and
    // a pass-through in the other, emitting one contour tree edge each.
    std::vector<std::vector<std::uint32_t>> ct_up(n), ct_down(n);
    std::vector<std::uint8_t> removed(n, 0);
    const auto candidate = [&](std::uint32_t v) {
        return jt.children[v].size() + st.children[v].size() == 1;
    };
    std::queue<std::uint32_t> q;
    for (std::uint32_t v = 0; v < n; ++v)
        if (candidate(v)) q.push(v);

    std::size_t added = 0;
    while (added + 1 < n) {
        if (q.empty()) throw std::logic_error("contour tree merge stalled");
        const std::uint32_t x = q.front();
        q.pop();
        if (removed[x] || !candidate(x)) continue;
        std::uint32_t y;
        if (jt.children[x].empty()) {
            // Upper leaf: arc descends from x to its join-tree parent.
            y = jt.parent[x];
            ct_down[x].push_back(y);
            ct_up[y].push_back(x);
            drop_child(jt.children[y], x);
            const std::uint32_t w = st.children[x][0];
            st.parent[w] = st.parent[x];
            if (st.parent[x] != npos) {
                drop_child(st.children[st.parent[x]], x);
                st.children[st.parent[x]].push_back(w);
            }
        } else {
            y = st.parent[x];
            ct_up[x].push_back(y);
            ct_down[y].push_back(x);
            drop_child(st.children[y], x);
            const std::uint32_t w = jt.children[x][0];
            jt.parent[w] = jt.parent[x];
            if (jt.parent[x] != npos) {
                drop_child(jt.children[jt.parent[x]], x);
                jt.children[jt.parent[x]].push_back(w);
            }
        }
        removed[x] = 1;
        ++added;
        if (!removed[y] && candidate(y)) q.push(y);
    }

    // Contract chains of degree-(1,1) vertices into arcs.
    std::vector<std::uint32_t> node_of(n, npos);
    for (std::uint32_t v = 0; v < n; ++v) {
        const std::size_t du = ct_up[v].size(), dd = ct_down[v].size();
        if (du == 1 && dd == 1) continue;
        CriticalKind kind = CriticalKind::saddle;
        if (du == 0 && dd >= 1) kind = CriticalKind::maximum;
        if (dd == 0 && du >= 1) kind = CriticalKind::minimum;
        node_of[v] = static_cast<std::uint32_t>(tree.nodes.size());
        tree.nodes.push_back({v, field.values[v], kind, {}, {}});
        tree.vertex_node[v] = node_of[v];
    }
    for (const ContourTree::Node &c : tree.nodes) {
        for (std::uint32_t cur : ct_down[static_cast<std::uint32_t>(c.vertex)]) {
            std::vector<VertexId> regulars;
            while (node_of[cur] == npos) {
                regulars.push_back(cur);
                cur = ct_down[cur][0];
            }
            const auto arc = static_cast<std::uint32_t>(tree.arcs.size());
            tree.arcs.push_back({tree.vertex_node[c.vertex], node_of[cur]});
            for (VertexId r : regulars) tree.vertex_arc[r] = arc;
        }
    }
    for (std::uint32_t a = 0; a < tree.arcs.size(); ++a) {
        tree.nodes[tree.arcs[a].upper].down_arcs.push_back(a);
        tree.nodes[tree.arcs[a].lower].up_arcs.push_back(a);
    }
    return tree;
}

namespace {

// Shared pruning engine behind simplify() and branch_decomposition():
// repeatedly removes the smallest-height leaf arc (never at the global
// min/max), contracting saddles that drop to degree 2. Tokens track where the
// original arcs and removed node vertices end up, so the simplified
// segmentation can be reassembled.
struct Pruner {
    const ContourTree &tree;
    struct WArc {
        std::uint32_t upper, lower;
        bool alive = true;
        std::vector<std::uint32_t> tokens;  // arc tokens [0, A), node tokens [A, A + #nodes)
    };
    std::vector<WArc> warcs;
    std::vector<std::vector<std::uint32_t>> incident;  // live arc ids per node (lazily filtered)
    std::vector<std::uint32_t> degree;
    std::vector<std::uint8_t> node_alive;
    std::uint32_t gmin_node = npos, gmax_node = npos;

    using Entry = std::tuple<double, VertexId, std::uint32_t>;  // (height, leaf vertex, arc)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;

    explicit Pruner(const ContourTree &t) : tree(t) {
        const auto na = static_cast<std::uint32_t>(t.arcs.size());
        warcs.reserve(na);
        incident.assign(t.nodes.size(), {});
        degree.assign(t.nodes.size(), 0);
        node_alive.assign(t.nodes.size(), 1);
        for (std::uint32_t a = 0; a < na; ++a) {
            warcs.push_back({t.arcs[a].upper, t.arcs[a].lower, true, {a}});
            incident[t.arcs[a].upper].push_back(a);
            incident[t.arcs[a].lower].push_back(a);
            ++degree[t.arcs[a].upper];
            ++degree[t.arcs[a].lower];
        }
        for (std::uint32_t i = 0; i < t.nodes.size(); ++i) {
            if (gmin_node == npos || node_less(i, gmin_node)) gmin_node = i;
            if (gmax_node == npos || node_less(gmax_node, i)) gmax_node = i;
        }
        for (std::uint32_t a = 0; a < na; ++a) {
            push_leaf(warcs[a].upper, a);
            push_leaf(warcs[a].lower, a);
        }
    }

    bool node_less(std::uint32_t a, std::uint32_t b) const {
        if (tree.nodes[a].scalar != tree.nodes[b].scalar)
            return tree.nodes[a].scalar < tree.nodes[b].scalar;
        return tree.nodes[a].vertex < tree.nodes[b].vertex;
    }

    double height(const WArc &w) const {
        return tree.nodes[w.upper].scalar - tree.nodes[w.lower].scalar;
    }

    void push_leaf(std::uint32_t node, std::uint32_t arc) {
        if (degree[node] != 1 || node == gmin_node || node == gmax_node) return;
        pq.emplace(height(warcs[arc]), tree.nodes[node].vertex, arc);
    }

    std::uint32_t node_token(std::uint32_t node) const {
        return static_cast<std::uint32_t>(tree.arcs.size()) + node;
    }

    void run(double eps) {
        while (!pq.empty()) {
            auto [h, leaf_vertex, a] = pq.top();
            pq.pop();
            if (!warcs[a].alive) continue;
            std::uint32_t leaf;
            if (degree[warcs[a].upper] == 1 && tree.nodes[warcs[a].upper].vertex == leaf_vertex)
                leaf = warcs[a].upper;
            else if (degree[warcs[a].lower] == 1 && tree.nodes[warcs[a].lower].vertex == leaf_vertex)
                leaf = warcs[a].lower;
            else
                continue;  // stale
            if (leaf == gmin_node || leaf == gmax_node) continue;
            const double h_now = height(warcs[a]);
            if (h_now != h) {  // grew through a contraction since it was pushed
                pq.emplace(h_now, leaf_vertex, a);
                continue;
            }
            // Under symbolic perturbation a tied pair has infinitesimal but
            // positive persistence, so eps = 0 removes nothing.
            if (h_now > eps || (h_now == 0.0 && eps == 0.0)) continue;
            // The saddle needs another arc on the leaf's side, otherwise this
            // is not the leaf's persistence pair yet; the arc gets re-pushed
            // when a removal elsewhere contracts the saddle and extends it.
            if (!removable(leaf, a)) continue;
            remove_branch(leaf, a);
        }
    }

    bool removable(std::uint32_t leaf, std::uint32_t a) {
        const bool leaf_is_upper = (warcs[a].upper == leaf);
        const std::uint32_t s = leaf_is_upper ? warcs[a].lower : warcs[a].upper;
        compact(s);
        std::size_t same_side = 0;
        for (std::uint32_t other : incident[s]) {
            if (leaf_is_upper && warcs[other].lower == s) ++same_side;
            if (!leaf_is_upper && warcs[other].upper == s) ++same_side;
        }
        return same_side >= 2;
    }

    void remove_branch(std::uint32_t leaf, std::uint32_t a) {
        const bool leaf_is_upper = (warcs[a].upper == leaf);
        const std::uint32_t s = leaf_is_upper ? warcs[a].lower : warcs[a].upper;
        std::vector<std::uint32_t> pending = std::move(warcs[a].tokens);
        pending.push_back(node_token(leaf));
        warcs[a].alive = false;
        --degree[leaf];
        --degree[s];
        node_alive[leaf] = 0;

        if (degree[s] == 2) {
            contract(s, std::move(pending));
        } else if (degree[s] >= 3) {
            absorb(s, leaf_is_upper, std::move(pending));
        } else {
            throw std::logic_error("branch removal left a degree<2 saddle");
        }
    }

    // Merge the two remaining arcs at s into one; everything removed so far at
    // this site rides along in the tokens.
    void contract(std::uint32_t s, std::vector<std::uint32_t> pending) {
        std::uint32_t a_up = npos, a_dn = npos;
        compact(s);
        for (std::uint32_t a : incident[s]) {
            if (warcs[a].lower == s) a_up = a;
            if (warcs[a].upper == s) a_dn = a;
        }
        if (a_up == npos || a_dn == npos)
            throw std::logic_error("degree-2 node without one up and one down arc");
        const std::uint32_t t = warcs[a_up].upper, b = warcs[a_dn].lower;
        WArc merged;
        merged.upper = t;
        merged.lower = b;
        merged.tokens = std::move(warcs[a_up].tokens);
        merged.tokens.insert(merged.tokens.end(), warcs[a_dn].tokens.begin(),
                             warcs[a_dn].tokens.end());
        merged.tokens.push_back(node_token(s));
        merged.tokens.insert(merged.tokens.end(), pending.begin(), pending.end());
        warcs[a_up].alive = false;
        warcs[a_dn].alive = false;
        node_alive[s] = 0;
        degree[s] = 0;
        const auto id = static_cast<std::uint32_t>(warcs.size());
        warcs.push_back(std::move(merged));
        incident[t].push_back(id);
        incident[b].push_back(id);
        push_leaf(t, id);
        push_leaf(b, id);
    }

    // Multi-saddle: the removed branch's region joins the same-direction arc
    // with the extremal opposite endpoint (tie-break order).
    void absorb(std::uint32_t s, bool removed_was_above, std::vector<std::uint32_t> pending) {
        compact(s);
        std::uint32_t best = npos, best_end = npos;
        for (std::uint32_t a : incident[s]) {
            if (removed_was_above && warcs[a].lower != s) continue;
            if (!removed_was_above && warcs[a].upper != s) continue;
            const std::uint32_t end = removed_was_above ? warcs[a].upper : warcs[a].lower;
            if (best == npos || (removed_was_above ? node_less(best_end, end) : node_less(end, best_end))) {
                best = a;
                best_end = end;
            }
        }
        if (best == npos) throw std::logic_error("saddle lost its last same-direction arc");
        warcs[best].tokens.insert(warcs[best].tokens.end(), pending.begin(), pending.end());
    }

    void compact(std::uint32_t node) {
        auto &inc = incident[node];
        inc.erase(std::remove_if(inc.begin(), inc.end(),
                                 [&](std::uint32_t a) { return !warcs[a].alive; }),
                  inc.end());
    }
};

}  // namespace

ContourTree simplify(const ContourTree &tree, double eps) {
    if (eps < 0.0) throw std::invalid_argument("persistence threshold must be nonnegative");
    ContourTree out;
    out.rank = tree.rank;
    out.dims = tree.dims;
    out.simplification_threshold = eps;
    out.vertex_arc.assign(tree.vertex_arc.size(), npos);
    out.vertex_node.assign(tree.vertex_node.size(), npos);
    if (tree.arcs.empty()) {
        out.nodes = tree.nodes;
        out.vertex_node = tree.vertex_node;
        return out;
    }

    Pruner pruner(tree);
    pruner.run(eps);

    std::vector<std::uint32_t> node_map(tree.nodes.size(), npos);
    for (std::uint32_t i = 0; i < tree.nodes.size(); ++i) {
        if (!pruner.node_alive[i]) continue;
        node_map[i] = static_cast<std::uint32_t>(out.nodes.size());
        out.nodes.push_back({tree.nodes[i].vertex, tree.nodes[i].scalar, tree.nodes[i].kind, {}, {}});
    }

    std::vector<std::uint32_t> live;
    for (std::uint32_t a = 0; a < pruner.warcs.size(); ++a)
        if (pruner.warcs[a].alive) live.push_back(a);
    std::sort(live.begin(), live.end(), [&](std::uint32_t a, std::uint32_t b) {
        const auto ka = std::make_pair(node_map[pruner.warcs[a].upper], node_map[pruner.warcs[a].lower]);
        const auto kb = std::make_pair(node_map[pruner.warcs[b].upper], node_map[pruner.warcs[b].lower]);
        return ka < kb;
    });

    // token -> final arc; tokens enumerate original arcs and absorbed nodes.
    std::vector<std::uint32_t> token_owner(tree.arcs.size() + tree.nodes.size(), npos);
    for (std::uint32_t i = 0; i < live.size(); ++i) {
        const Pruner::WArc &w = pruner.warcs[live[i]];
        out.arcs.push_back({node_map[w.upper], node_map[w.lower]});
        out.nodes[node_map[w.upper]].down_arcs.push_back(i);
        out.nodes[node_map[w.lower]].up_arcs.push_back(i);
        for (std::uint32_t t : w.tokens) token_owner[t] = i;
    }

    // Recompute leaf kinds (interior nodes keep saddle).
    for (std::uint32_t i = 0; i < out.nodes.size(); ++i) {
        ContourTree::Node &nd = out.nodes[i];
        if (nd.up_arcs.size() + nd.down_arcs.size() != 1) {
            if (!nd.up_arcs.empty() && !nd.down_arcs.empty()) nd.kind = CriticalKind::saddle;
            continue;
        }
        nd.kind = nd.up_arcs.empty() ? CriticalKind::maximum : CriticalKind::minimum;
    }

    for (std::size_t v = 0; v < tree.vertex_arc.size(); ++v) {
        if (tree.vertex_node[v] != npos) {
            const std::uint32_t nd = tree.vertex_node[v];
            if (node_map[nd] != npos)
                out.vertex_node[v] = node_map[nd];
            else
                out.vertex_arc[v] = token_owner[pruner.node_token(nd)];
        } else {
            out.vertex_arc[v] = token_owner[tree.vertex_arc[v]];
        }
        if (out.vertex_node[v] == npos && out.vertex_arc[v] == npos)
            throw std::logic_error("simplification dropped a vertex assignment");
    }
    return out;
}

namespace {

// Unique tree path between two nodes, as arc indices.
std::vector<std::uint32_t> tree_path(const ContourTree &tree,
                                     const std::vector<std::uint32_t> &parent_arc,
                                     const std::vector<std::uint32_t> &depth, std::uint32_t a,
                                     std::uint32_t b) {
    std::vector<std::uint32_t> from_a, from_b;
    const auto up = [&](std::uint32_t n) {
        const std::uint32_t arc = parent_arc[n];
        return tree.arcs[arc].upper == n ? tree.arcs[arc].lower : tree.arcs[arc].upper;
    };
    while (depth[a] > depth[b]) {
        from_a.push_back(parent_arc[a]);
        a = up(a);
    }
    while (depth[b] > depth[a]) {
        from_b.push_back(parent_arc[b]);
        b = up(b);
    }
    while (a != b) {
        from_a.push_back(parent_arc[a]);
        from_b.push_back(parent_arc[b]);
        a = up(a);
        b = up(b);
    }
    from_a.insert(from_a.end(), from_b.rbegin(), from_b.rend());
    return from_a;
}

}  // namespace

// Pairing by union-find sweeps over the tree: the ascending sweep pairs each
// non-global minimum with the saddle where its component merges into an older
// one, the descending sweep does the maxima, and the global pair forms the
// root. Branch paths are the (monotone) extremum-to-saddle tree paths.
std::vector<Branch> branch_decomposition(const ContourTree &tree) {
    if (tree.arcs.empty()) return {};
    const auto nn = static_cast<std::uint32_t>(tree.nodes.size());

    const auto less = [&](std::uint32_t a, std::uint32_t b) {
        if (tree.nodes[a].scalar != tree.nodes[b].scalar)
            return tree.nodes[a].scalar < tree.nodes[b].scalar;
        return tree.nodes[a].vertex < tree.nodes[b].vertex;
    };
    std::vector<std::uint32_t> order(nn);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), less);
    std::vector<std::uint32_t> rank_of(nn);
    for (std::uint32_t i = 0; i < nn; ++i) rank_of[order[i]] = i;

    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> adj(nn);  // (other, arc)
    for (std::uint32_t a = 0; a < tree.arcs.size(); ++a) {
        adj[tree.arcs[a].upper].emplace_back(tree.arcs[a].lower, a);
        adj[tree.arcs[a].lower].emplace_back(tree.arcs[a].upper, a);
    }

    // Rooted orientation for path queries.
    std::vector<std::uint32_t> parent_arc(nn, npos), depth(nn, 0);
    {
        std::vector<std::uint32_t> stack{0};
        std::vector<std::uint8_t> seen(nn, 0);
        seen[0] = 1;
        while (!stack.empty()) {
            const std::uint32_t v = stack.back();
            stack.pop_back();
            for (const auto &[other, arc] : adj[v]) {
                if (seen[other]) continue;
                seen[other] = 1;
                parent_arc[other] = arc;
                depth[other] = depth[v] + 1;
                stack.push_back(other);
            }
        }
    }

    std::vector<Branch> out;
    const auto sweep = [&](bool ascending) {
        std::vector<std::uint32_t> uf(nn), birth(nn);
        std::iota(uf.begin(), uf.end(), 0u);
        std::iota(birth.begin(), birth.end(), 0u);
        const auto find = [&](std::uint32_t x) {
            while (uf[x] != x) {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            return x;
        };
        const auto older = [&](std::uint32_t a, std::uint32_t b) {
            const bool a_first = ascending ? rank_of[a] < rank_of[b] : rank_of[a] > rank_of[b];
            return a_first ? a : b;
        };
        for (std::uint32_t i = 0; i < nn; ++i) {
            const std::uint32_t v = ascending ? order[i] : order[nn - 1 - i];
            for (const auto &[other, arc] : adj[v]) {
                (void)arc;
                const bool processed = ascending ? rank_of[other] < rank_of[v]
                                                 : rank_of[other] > rank_of[v];
                if (!processed) continue;
                const std::uint32_t ru = find(other), rv = find(v);
                if (ru == rv) continue;
                const std::uint32_t surviving = older(birth[ru], birth[rv]);
                const std::uint32_t dying = surviving == birth[ru] ? birth[rv] : birth[ru];
                if (dying != v) {
                    Branch b;
                    b.extremum = dying;
                    b.saddle = v;
                    b.persistence = std::abs(tree.nodes[dying].scalar - tree.nodes[v].scalar);
                    b.arcs = tree_path(tree, parent_arc, depth, dying, v);
                    out.push_back(std::move(b));
                }
                uf[ru] = rv;
                birth[rv] = surviving;
            }
        }
    };
    sweep(true);
    sweep(false);

    std::uint32_t gmin = 0, gmax = 0;
    for (std::uint32_t i = 1; i < nn; ++i) {
        if (less(i, gmin)) gmin = i;
        if (less(gmax, i)) gmax = i;
    }
    const double range = tree.nodes[gmax].scalar - tree.nodes[gmin].scalar;
    const auto trunk = tree_path(tree, parent_arc, depth, gmax, gmin);
    out.push_back({gmax, gmin, range, true, trunk});
    out.push_back({gmin, gmax, range, true, trunk});
    return out;
}

std::vector<std::vector<VertexId>> segmentation_regions(const ContourTree &tree) {
    std::vector<std::vector<VertexId>> regions(tree.arcs.size());
    for (std::size_t v = 0; v < tree.vertex_arc.size(); ++v)
        if (tree.vertex_arc[v] != npos) regions[tree.vertex_arc[v]].push_back(v);
    return regions;
}

void write_tree(std::ostream &os, const ContourTree &tree) {
    for (const ContourTree::Node &n : tree.nodes)
        os << "node " << n.vertex << ' ' << n.scalar << ' ' << to_string(n.kind) << '\n';
    for (const ContourTree::Arc &a : tree.arcs) os << "arc " << a.upper << ' ' << a.lower << '\n';
}

}  // namespace toposz
