#include "toposz/field.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>

#include "toposz/kernels.hpp"

namespace toposz {

const char *to_string(CriticalKind k) {
    switch (k) {
        case CriticalKind::minimum: return "minimum";
        case CriticalKind::maximum: return "maximum";
        case CriticalKind::saddle: return "saddle";
    }
    return "?";
}

ScalarField make_field(int rank, const std::array<std::size_t, 3> &dims, std::vector<double> values) {
    if (rank != 2 && rank != 3) throw std::invalid_argument("field rank must be 2 or 3");
    ScalarField f;
    f.rank = rank;
    f.dims = dims;
    for (int a = rank; a < 3; ++a) f.dims[a] = 1;
    std::size_t n = 1;
    for (int a = 0; a < rank; ++a) {
        if (f.dims[a] == 0) throw std::invalid_argument("field extents must be positive");
        n *= f.dims[a];
    }
    if (values.size() != n) throw std::invalid_argument("value count does not match dims");
    f.values = std::move(values);
    return f;
}

ScalarField normalize(const ScalarField &field, bool *degenerate) {
    if (field.values.empty()) throw std::invalid_argument("cannot normalize an empty field");
    ScalarField out = field;
    const auto [lo, hi] = kernels::min_max(field.values);
    out.orig_min = lo;
    out.orig_max = hi;
    out.normalized = true;
    if (degenerate) *degenerate = (hi == lo);
    if (hi == lo) {
        std::fprintf(stderr, "toposz: warning: constant field, normalizing to all zeros\n");
        std::fill(out.values.begin(), out.values.end(), 0.0);
        return out;
    }
    kernels::normalize_values(field.values, lo, hi, out.values);
    return out;
}

ScalarField denormalize(const ScalarField &field) {
    ScalarField out = field;
    out.normalized = false;
    const double range = field.orig_max - field.orig_min;
    for (double &v : out.values) v = v * range + field.orig_min;
    return out;
}

std::vector<VertexId> k_layer_neighborhood(const ScalarField &field, VertexId v, int k) {
    if (v >= field.vertex_count()) throw std::out_of_range("vertex id out of range");
    if (k < 0) throw std::invalid_argument("k must be nonnegative");
    const auto c = field.coords(v);
    std::array<std::int64_t, 3> lo = c, hi = c;
    for (int a = 0; a < field.rank; ++a) {
        lo[a] = std::max<std::int64_t>(0, c[a] - k);
        hi[a] = std::min<std::int64_t>(static_cast<std::int64_t>(field.dims[a]) - 1, c[a] + k);
    }
    std::vector<VertexId> out;
    std::array<std::int64_t, 3> p = lo;
    const std::int64_t k_lo = field.rank >= 3 ? lo[2] : 0;
    const std::int64_t k_hi = field.rank >= 3 ? hi[2] : 0;
    for (p[0] = lo[0]; p[0] <= hi[0]; ++p[0])
        for (p[1] = lo[1]; p[1] <= hi[1]; ++p[1])
            for (p[2] = k_lo; p[2] <= k_hi; ++p[2]) out.push_back(field.vertex_at(p));
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Freudenthal edge offsets: axis steps plus the diagonals of the fixed
// (toward-increasing-coordinates) subdivision, and their negatives.
constexpr std::array<std::array<std::int64_t, 3>, 6> offsets2d{{
    {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {-1, 0, 0}, {0, -1, 0}, {-1, -1, 0},
}};
constexpr std::array<std::array<std::int64_t, 3>, 14> offsets3d{{
    {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1},
    {-1, 0, 0}, {0, -1, 0}, {0, 0, -1}, {-1, -1, 0}, {-1, 0, -1}, {0, -1, -1}, {-1, -1, -1},
}};

}  // namespace

void simplicial_neighbors(const ScalarField &field, VertexId v, std::vector<VertexId> &out) {
    out.clear();
    const auto c = field.coords(v);
    const auto add = [&](const std::array<std::int64_t, 3> &off) {
        std::array<std::int64_t, 3> p{c[0] + off[0], c[1] + off[1], c[2] + off[2]};
        if (field.in_grid(p)) out.push_back(field.vertex_at(p));
    };
    if (field.rank == 2)
        for (const auto &off : offsets2d) add(off);
    else
        for (const auto &off : offsets3d) add(off);
}

std::vector<VertexId> simplicial_neighbors(const ScalarField &field, VertexId v) {
    std::vector<VertexId> out;
    simplicial_neighbors(field, v, out);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Explicit 53-bit uniform in [0,1); uniform_real_distribution is not
// bit-stable across standard libraries.
inline double uniform01(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

ScalarField generate_gaussian_mixture(int rank, const std::array<std::size_t, 3> &dims,
                                      const std::vector<GaussianComponent> &components,
                                      std::uint64_t seed, double noise_amplitude) {
    if (components.empty()) throw std::invalid_argument("mixture needs at least one component");
    ScalarField f = make_field(rank, dims, std::vector<double>(
                                               [&] {
                                                   std::size_t n = 1;
                                                   for (int a = 0; a < rank; ++a) n *= dims[a];
                                                   return n;
                                               }(),
                                               0.0));
    kernels::evaluate_mixture(rank, f.dims, components, f.values);
    if (noise_amplitude > 0.0) {
        std::mt19937_64 rng(seed);
        for (double &v : f.values) v += noise_amplitude * uniform01(rng);
    }
    return normalize(f);
}

std::vector<GaussianComponent> random_components(int rank, int count, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("component count must be positive");
    std::mt19937_64 rng(seed ^ 0x746f706f737aULL);
    std::vector<GaussianComponent> comps(static_cast<std::size_t>(count));
    for (GaussianComponent &c : comps) {
        for (int a = 0; a < rank; ++a) c.center[a] = 0.15 + 0.70 * uniform01(rng);
        c.amplitude = 0.5 + 0.5 * uniform01(rng);
        if (uniform01(rng) < 0.25) c.amplitude = -c.amplitude;
        c.spread = 0.08 + 0.12 * uniform01(rng);
    }
    return comps;
}

ScalarField load_raw(const std::string &path, int rank, const std::array<std::size_t, 3> &dims) {
    std::size_t n = 1;
    for (int a = 0; a < rank; ++a) n *= dims[a];
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw FieldIOError("cannot open " + path);
    const std::uint64_t actual = static_cast<std::uint64_t>(in.tellg());
    const std::uint64_t expected = static_cast<std::uint64_t>(n) * 4;
    if (actual != expected)
        throw FieldIOError(path + ": expected " + std::to_string(expected) + " bytes for dims, got " +
                           std::to_string(actual));
    in.seekg(0);
    std::vector<float> raw(n);
    in.read(reinterpret_cast<char *>(raw.data()), static_cast<std::streamsize>(expected));
    if (!in) throw FieldIOError("short read from " + path);
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = static_cast<double>(raw[i]);
    return make_field(rank, dims, std::move(values));
}

void save_raw(const ScalarField &field, const std::string &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FieldIOError("cannot open " + path + " for writing");
    std::vector<float> raw(field.vertex_count());
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = static_cast<float>(field.values[i]);
    out.write(reinterpret_cast<const char *>(raw.data()),
              static_cast<std::streamsize>(raw.size() * 4));
    if (!out) throw FieldIOError("short write to " + path);
}

}  // namespace toposz
