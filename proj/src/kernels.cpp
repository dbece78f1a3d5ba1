#include "toposz/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace toposz::kernels {

namespace {

inline double mixture_at(int rank, const std::array<std::size_t, 3> &dims,
                         std::span<const GaussianComponent> components, std::size_t v) {
    // Grid index -> unit-cube position; a 1-wide axis sits at 0.
    std::array<double, 3> pos{0.0, 0.0, 0.0};
    std::size_t rest = v;
    for (int a = rank - 1; a >= 0; --a) {
        const std::size_t idx = rest % dims[a];
        rest /= dims[a];
        pos[a] = dims[a] > 1 ? static_cast<double>(idx) / static_cast<double>(dims[a] - 1) : 0.0;
    }
    double sum = 0.0;
    for (const GaussianComponent &c : components) {
        double d2 = 0.0;
        for (int a = 0; a < rank; ++a) {
            const double d = pos[a] - c.center[a];
            d2 += d * d;
        }
        sum += c.amplitude * std::exp(-d2 / (2.0 * c.spread * c.spread));
    }
    return sum;
}

inline void dilate_at(int rank, const std::array<std::size_t, 3> &dims,
                      const std::vector<std::uint8_t> &in, std::vector<std::uint8_t> &out,
                      std::size_t v) {
    if (in[v]) {
        out[v] = 1;
        return;
    }
    std::array<std::int64_t, 3> c{0, 0, 0};
    std::size_t rest = v;
    for (int a = rank - 1; a >= 0; --a) {
        c[a] = static_cast<std::int64_t>(rest % dims[a]);
        rest /= dims[a];
    }
    const std::int64_t k2 = rank >= 3 ? 1 : 0;
    for (std::int64_t di = -1; di <= 1; ++di) {
        const std::int64_t i = c[0] + di;
        if (i < 0 || i >= static_cast<std::int64_t>(dims[0])) continue;
        for (std::int64_t dj = -1; dj <= 1; ++dj) {
            const std::int64_t j = c[1] + dj;
            if (j < 0 || j >= static_cast<std::int64_t>(dims[1])) continue;
            for (std::int64_t dk = -k2; dk <= k2; ++dk) {
                const std::int64_t k = c[2] + dk;
                if (k < 0 || k >= static_cast<std::int64_t>(dims[2])) continue;
                const std::size_t u =
                    (static_cast<std::size_t>(i) * dims[1] + static_cast<std::size_t>(j)) * dims[2] +
                    static_cast<std::size_t>(k);
                if (in[u]) {
                    out[v] = 1;
                    return;
                }
            }
        }
    }
    out[v] = 0;
}

inline void fill_bounds_at(std::span<const double> values, std::span<const std::uint32_t> vertex_arc,
                           std::span<const std::uint32_t> vertex_node, std::span<const double> arc_lo,
                           std::span<const double> arc_hi, std::span<double> lower,
                           std::span<double> upper, std::size_t v) {
    constexpr std::uint32_t npos = ~0u;
    if (vertex_node[v] != npos) {
        lower[v] = values[v];
        upper[v] = values[v];
        return;
    }
    const std::uint32_t a = vertex_arc[v];
    lower[v] = std::min(arc_lo[a], values[v]);
    upper[v] = std::max(arc_hi[a], values[v]);
}

}  // namespace

namespace serial {

void evaluate_mixture(int rank, const std::array<std::size_t, 3> &dims,
                      std::span<const GaussianComponent> components, std::span<double> out) {
    for (std::size_t v = 0; v < out.size(); ++v) out[v] = mixture_at(rank, dims, components, v);
}

std::pair<double, double> min_max(std::span<const double> values) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double x : values) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    return {lo, hi};
}

void normalize_values(std::span<const double> in, double lo, double hi, std::span<double> out) {
    const double range = hi - lo;
    if (range <= 0.0) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    for (std::size_t v = 0; v < in.size(); ++v)
        out[v] = static_cast<double>(static_cast<float>((in[v] - lo) / range));
}

double sum_squared_diff(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    const std::size_t chunks = (n + reduction_chunk - 1) / reduction_chunk;
    double total = 0.0;
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t end = std::min(n, (c + 1) * reduction_chunk);
        double part = 0.0;
        for (std::size_t v = c * reduction_chunk; v < end; ++v) {
            const double d = a[v] - b[v];
            part += d * d;
        }
        total += part;
    }
    return total;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t v = 0; v < a.size(); ++v) m = std::max(m, std::abs(a[v] - b[v]));
    return m;
}

void dilate_once(int rank, const std::array<std::size_t, 3> &dims,
                 const std::vector<std::uint8_t> &in, std::vector<std::uint8_t> &out) {
    out.resize(in.size());
    for (std::size_t v = 0; v < in.size(); ++v) dilate_at(rank, dims, in, out, v);
}

void fill_bounds(std::span<const double> values, std::span<const std::uint32_t> vertex_arc,
                 std::span<const std::uint32_t> vertex_node, std::span<const double> arc_lo,
                 std::span<const double> arc_hi, std::span<double> lower, std::span<double> upper) {
    for (std::size_t v = 0; v < values.size(); ++v)
        fill_bounds_at(values, vertex_arc, vertex_node, arc_lo, arc_hi, lower, upper, v);
}

}  // namespace serial

void evaluate_mixture(int rank, const std::array<std::size_t, 3> &dims,
                      std::span<const GaussianComponent> components, std::span<double> out) {
    const std::int64_t n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t v = 0; v < n; ++v)
        out[static_cast<std::size_t>(v)] =
            mixture_at(rank, dims, components, static_cast<std::size_t>(v));
}

std::pair<double, double> min_max(std::span<const double> values) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    const std::int64_t n = static_cast<std::int64_t>(values.size());
#pragma omp parallel for schedule(static) reduction(min : lo) reduction(max : hi)
    for (std::int64_t v = 0; v < n; ++v) {
        const double x = values[static_cast<std::size_t>(v)];
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    return {lo, hi};
}

void normalize_values(std::span<const double> in, double lo, double hi, std::span<double> out) {
    const double range = hi - lo;
    const std::int64_t n = static_cast<std::int64_t>(in.size());
    if (range <= 0.0) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
#pragma omp parallel for schedule(static)
    for (std::int64_t v = 0; v < n; ++v)
        out[static_cast<std::size_t>(v)] =
            static_cast<double>(static_cast<float>((in[static_cast<std::size_t>(v)] - lo) / range));
}

double sum_squared_diff(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    const std::int64_t chunks = static_cast<std::int64_t>((n + reduction_chunk - 1) / reduction_chunk);
    std::vector<double> partial(static_cast<std::size_t>(chunks), 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < chunks; ++c) {
        const std::size_t begin = static_cast<std::size_t>(c) * reduction_chunk;
        const std::size_t end = std::min(n, begin + reduction_chunk);
        double part = 0.0;
        for (std::size_t v = begin; v < end; ++v) {
            const double d = a[v] - b[v];
            part += d * d;
        }
        partial[static_cast<std::size_t>(c)] = part;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    const std::int64_t n = static_cast<std::int64_t>(a.size());
#pragma omp parallel for schedule(static) reduction(max : m)
    for (std::int64_t v = 0; v < n; ++v)
        m = std::max(m, std::abs(a[static_cast<std::size_t>(v)] - b[static_cast<std::size_t>(v)]));
    return m;
}

void dilate_once(int rank, const std::array<std::size_t, 3> &dims,
                 const std::vector<std::uint8_t> &in, std::vector<std::uint8_t> &out) {
    out.resize(in.size());
    const std::int64_t n = static_cast<std::int64_t>(in.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t v = 0; v < n; ++v) dilate_at(rank, dims, in, out, static_cast<std::size_t>(v));
}

void fill_bounds(std::span<const double> values, std::span<const std::uint32_t> vertex_arc,
                 std::span<const std::uint32_t> vertex_node, std::span<const double> arc_lo,
                 std::span<const double> arc_hi, std::span<double> lower, std::span<double> upper) {
    const std::int64_t n = static_cast<std::int64_t>(values.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t v = 0; v < n; ++v)
        fill_bounds_at(values, vertex_arc, vertex_node, arc_lo, arc_hi, lower, upper,
                       static_cast<std::size_t>(v));
}

}  // namespace toposz::kernels
