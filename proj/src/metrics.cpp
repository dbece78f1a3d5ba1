#include "toposz/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <json.hpp>

#include "toposz/kernels.hpp"

namespace toposz {

double mse(const ScalarField &f, const ScalarField &g) {
    if (f.rank != g.rank || f.dims != g.dims) throw std::invalid_argument("field dims mismatch");
    return kernels::sum_squared_diff(f.values, g.values) / static_cast<double>(f.vertex_count());
}

double psnr(const ScalarField &f, const ScalarField &g) {
    const double e = mse(f, g);
    if (e == 0.0) return std::numeric_limits<double>::infinity();
    const double peak = *std::max_element(f.values.begin(), f.values.end());
    return 20.0 * std::log10(peak / std::sqrt(e));
}

double compression_ratio(std::uint64_t original_bytes, std::uint64_t compressed_bytes) {
    if (original_bytes == 0 || compressed_bytes == 0)
        throw std::invalid_argument("sizes must be positive");
    return static_cast<double>(original_bytes) / static_cast<double>(compressed_bytes);
}

namespace {

using Point = std::pair<double, double>;

inline double diag_cost(const Point &p) { return (p.second - p.first) / 2.0; }

inline double linf(const Point &p, const Point &q) {
    return std::max(std::abs(p.first - q.first), std::abs(p.second - q.second));
}

// Feasibility of bottleneck value d: points whose diagonal projection exceeds
// d must all be matched point-to-point at cost <= d; everything else can fall
// to the diagonal. Augmenting paths may therefore end by releasing a
// diagonal-eligible point, which acts like an always-free virtual partner.
struct BottleneckMatcher {
    const std::vector<Point> &P, &Q;
    std::vector<int> match_p, match_q;
    std::vector<char> visited;
    double d = 0.0;

    BottleneckMatcher(const std::vector<Point> &p, const std::vector<Point> &q) : P(p), Q(q) {}

    // Finds a partner for row i, or releases it when diagonal-eligible.
    bool place_row(int i) {
        if (diag_cost(P[static_cast<std::size_t>(i)]) <= d) {
            match_p[static_cast<std::size_t>(i)] = -1;
            return true;
        }
        for (int j = 0; j < static_cast<int>(Q.size()); ++j) {
            if (visited[static_cast<std::size_t>(j)]) continue;
            if (linf(P[static_cast<std::size_t>(i)], Q[static_cast<std::size_t>(j)]) > d) continue;
            visited[static_cast<std::size_t>(j)] = 1;
            const int other = match_q[static_cast<std::size_t>(j)];
            if (other < 0 || place_row(other)) {
                match_p[static_cast<std::size_t>(i)] = j;
                match_q[static_cast<std::size_t>(j)] = i;
                return true;
            }
        }
        return false;
    }

    bool place_col(int j) {
        if (diag_cost(Q[static_cast<std::size_t>(j)]) <= d) {
            match_q[static_cast<std::size_t>(j)] = -1;
            return true;
        }
        for (int i = 0; i < static_cast<int>(P.size()); ++i) {
            if (visited[static_cast<std::size_t>(i)]) continue;
            if (linf(P[static_cast<std::size_t>(i)], Q[static_cast<std::size_t>(j)]) > d) continue;
            visited[static_cast<std::size_t>(i)] = 1;
            const int other = match_p[static_cast<std::size_t>(i)];
            if (other < 0 || place_col(other)) {
                match_q[static_cast<std::size_t>(j)] = i;
                match_p[static_cast<std::size_t>(i)] = j;
                return true;
            }
        }
        return false;
    }

    bool feasible(double dist) {
        d = dist;
        match_p.assign(P.size(), -1);
        match_q.assign(Q.size(), -1);
        for (int i = 0; i < static_cast<int>(P.size()); ++i) {
            if (diag_cost(P[static_cast<std::size_t>(i)]) <= d) continue;
            visited.assign(Q.size(), 0);
            if (!place_row(i)) return false;
        }
        for (int j = 0; j < static_cast<int>(Q.size()); ++j) {
            if (diag_cost(Q[static_cast<std::size_t>(j)]) <= d) continue;
            if (match_q[static_cast<std::size_t>(j)] >= 0) continue;
            visited.assign(P.size(), 0);
            if (!place_col(j)) return false;
        }
        return true;
    }
};

// A valid matching built greedily gives the candidate cutoff, keeping the
// candidate list small when the diagrams are close.
double greedy_upper_bound(const std::vector<Point> &P, const std::vector<Point> &Q) {
    std::vector<int> order(P.size());
    for (std::size_t i = 0; i < P.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return diag_cost(P[static_cast<std::size_t>(a)]) > diag_cost(P[static_cast<std::size_t>(b)]); });
    std::vector<char> used(Q.size(), 0);
    double worst = 0.0;
    for (int i : order) {
        double best = diag_cost(P[static_cast<std::size_t>(i)]);
        int best_j = -1;
        for (std::size_t j = 0; j < Q.size(); ++j) {
            if (used[j]) continue;
            const double c = linf(P[static_cast<std::size_t>(i)], Q[j]);
            if (c < best) {
                best = c;
                best_j = static_cast<int>(j);
            }
        }
        if (best_j >= 0) used[static_cast<std::size_t>(best_j)] = 1;
        worst = std::max(worst, best);
    }
    for (std::size_t j = 0; j < Q.size(); ++j)
        if (!used[j]) worst = std::max(worst, diag_cost(Q[j]));
    return worst;
}

}  // namespace

double bottleneck_distance(const PersistenceDiagram &a, const PersistenceDiagram &b) {
    const std::vector<Point> &P = a.pairs, &Q = b.pairs;
    if (P.empty() && Q.empty()) return 0.0;
    const double hi = greedy_upper_bound(P, Q);
    std::vector<double> candidates{0.0, hi};
    for (const Point &p : P)
        if (diag_cost(p) <= hi) candidates.push_back(diag_cost(p));
    for (const Point &q : Q)
        if (diag_cost(q) <= hi) candidates.push_back(diag_cost(q));
    for (const Point &p : P)
        for (const Point &q : Q) {
            const double c = linf(p, q);
            if (c <= hi) candidates.push_back(c);
        }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    BottleneckMatcher matcher(P, Q);
    std::size_t lo = 0, up = candidates.size() - 1;  // candidates[up] = hi is feasible
    while (lo < up) {
        const std::size_t mid = (lo + up) / 2;
        if (matcher.feasible(candidates[mid]))
            up = mid;
        else
            lo = mid + 1;
    }
    return candidates[lo];
}

namespace {

// Square assignment with implicit costs (shortest augmenting paths with
// potentials).
double hungarian(std::size_t n, const std::function<double(std::size_t, std::size_t)> &cost) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<std::size_t> p(n + 1, n), way(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        minv.assign(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != n);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    double total = 0.0;
    for (std::size_t j = 1; j <= n; ++j)
        if (p[j] != n) total += cost(p[j], j - 1);
    return total;
}

}  // namespace

double wasserstein_distance(const PersistenceDiagram &a, const PersistenceDiagram &b, double q) {
    if (!(q >= 1.0)) throw std::invalid_argument("q must be >= 1");
    const std::vector<Point> &P = a.pairs, &Q = b.pairs;
    const std::size_t n = P.size(), m = Q.size();
    if (n + m == 0) return 0.0;
    // Left side P plus m diagonal slots, right side Q plus n diagonal slots.
    const auto cost = [&](std::size_t i, std::size_t j) -> double {
        if (i < n && j < m) return std::pow(linf(P[i], Q[j]), q);
        if (i < n) return std::pow(diag_cost(P[i]), q);
        if (j < m) return std::pow(diag_cost(Q[j]), q);
        return 0.0;
    };
    const double total = hungarian(n + m, cost);
    return std::pow(std::max(total, 0.0), 1.0 / q);
}

std::string to_json_line(const MetricsReport &r) {
    nlohmann::json j;
    if (std::isinf(r.psnr))
        j["psnr"] = nullptr;
    else
        j["psnr"] = r.psnr;
    j["mse"] = r.mse;
    j["compression_ratio"] = r.compression_ratio;
    j["bottleneck"] = r.bottleneck;
    j["wasserstein2"] = r.wasserstein2;
    j["fp"] = r.fp;
    j["fn"] = r.fn;
    j["ft"] = r.ft;
    return j.dump();
}

}  // namespace toposz
