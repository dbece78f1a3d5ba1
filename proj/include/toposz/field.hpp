#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace toposz {

using VertexId = std::uint64_t;

enum class CriticalKind : std::uint8_t { minimum = 0, maximum = 1, saddle = 2 };

const char *to_string(CriticalKind k);

// Regular-grid scalar field, row-major (last axis fastest). Values are kept in
// 64-bit for all internal arithmetic; normalized fields hold values that are
// exactly representable in 32-bit (the persisted sample width), so storing a
// sample as f32 is lossless.
struct ScalarField {
    int rank = 2;
    std::array<std::size_t, 3> dims{1, 1, 1};  // dims[i] == 1 for i >= rank
    std::vector<double> values;
    bool normalized = false;
    double orig_min = 0.0;  // pre-normalization range, for denormalization
    double orig_max = 1.0;

    std::size_t vertex_count() const { return values.size(); }

    std::array<std::int64_t, 3> coords(VertexId v) const {
        std::array<std::int64_t, 3> c{0, 0, 0};
        auto rest = static_cast<std::size_t>(v);
        for (int a = rank - 1; a >= 0; --a) {
            c[a] = static_cast<std::int64_t>(rest % dims[a]);
            rest /= dims[a];
        }
        return c;
    }

    VertexId vertex_at(const std::array<std::int64_t, 3> &c) const {
        std::size_t v = 0;
        for (int a = 0; a < rank; ++a) v = v * dims[a] + static_cast<std::size_t>(c[a]);
        return v;
    }

    bool in_grid(const std::array<std::int64_t, 3> &c) const {
        for (int a = 0; a < rank; ++a)
            if (c[a] < 0 || c[a] >= static_cast<std::int64_t>(dims[a])) return false;
        return true;
    }

    // Symbolic-perturbation order: ties in value are broken by vertex id, so
    // every field behaves like a Morse function.
    bool less(VertexId a, VertexId b) const {
        if (values[a] != values[b]) return values[a] < values[b];
        return a < b;
    }
};

struct FieldIOError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ScalarField make_field(int rank, const std::array<std::size_t, 3> &dims, std::vector<double> values);

// Affine map to [0,1] with values rounded to f32; records the original range.
// A constant field maps to all zeros; *degenerate (if given) is set and a
// warning is printed once.
ScalarField normalize(const ScalarField &field, bool *degenerate = nullptr);

// Undo normalize() using the recorded range; plain f64 arithmetic.
ScalarField denormalize(const ScalarField &field);

// All vertices within Chebyshev distance <= k (Moore neighborhood clipped to
// the grid); k = 0 gives {v}. Sorted by vertex id.
std::vector<VertexId> k_layer_neighborhood(const ScalarField &field, VertexId v, int k);

// Neighbors in the Freudenthal triangulation with the diagonal fixed toward
// increasing coordinates: 6-connectivity in 2D, 14-connectivity in 3D.
void simplicial_neighbors(const ScalarField &field, VertexId v, std::vector<VertexId> &out);
std::vector<VertexId> simplicial_neighbors(const ScalarField &field, VertexId v);

struct GaussianComponent {
    std::array<double, 3> center{0.5, 0.5, 0.5};  // in unit-cube coordinates
    double amplitude = 1.0;
    double spread = 0.15;
};

// Sum of isotropic Gaussians sampled at grid vertices (grid mapped to the unit
// cube), plus optional seeded uniform noise, then normalized. Bit-deterministic
// for fixed arguments.
ScalarField generate_gaussian_mixture(int rank, const std::array<std::size_t, 3> &dims,
                                      const std::vector<GaussianComponent> &components,
                                      std::uint64_t seed, double noise_amplitude = 0.0);

// Draws component parameters from a seeded generator; used by cmd_synth and
// the test harness to derive a field from (dims, seed) alone.
std::vector<GaussianComponent> random_components(int rank, int count, std::uint64_t seed);

// Headerless little-endian f32 raw volumes, row-major; dims come out-of-band.
ScalarField load_raw(const std::string &path, int rank, const std::array<std::size_t, 3> &dims);
void save_raw(const ScalarField &field, const std::string &path);

}  // namespace toposz
