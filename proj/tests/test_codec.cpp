#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "toposz/codec.hpp"
#include "toposz/contour_tree.hpp"

using namespace toposz;

namespace {

BoundsField loose_bounds(std::size_t n) {
    BoundsField b;
    b.lower.assign(n, 0.0);
    b.upper.assign(n, 1.0);
    return b;
}

ScalarField smooth_random_field(std::size_t nx, std::size_t ny, std::uint64_t seed) {
    return generate_gaussian_mixture(2, {nx, ny, 1}, random_components(2, 6, seed), seed);
}

}  // namespace

TEST_CASE("lorenzo prediction uses inclusion-exclusion over decoded neighbors") {
    const std::array<std::size_t, 3> dims{2, 2, 1};
    const std::vector<double> decoded{0.2, 0.4, 0.5, 0.0};  // (0,0) (0,1) (1,0) (1,1)
    CHECK(lorenzo_predict(2, dims, decoded, 3) == doctest::Approx(0.5 + 0.4 - 0.2));
    CHECK(lorenzo_predict(2, dims, decoded, 0) == 0.0);

    const std::array<std::size_t, 3> d3{2, 2, 2};
    std::vector<double> dec3(8, 0.0);
    dec3[0b100] = 0.3;  // (1,0,0)
    CHECK(lorenzo_predict(3, d3, dec3, 0b101) == doctest::Approx(0.3));  // (1,0,1)
}

TEST_CASE("round trip stays within xi when the predictor is exact") {
    // f(i,j) = (i + j) * c is reproduced exactly by the Lorenzo predictor away
    // from the seeding row and column.
    std::vector<double> values;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) values.push_back((i + j) / 14.0);
    const ScalarField f = normalize(make_field(2, {8, 8, 1}, std::move(values)));
    const QuantizationConfig cfg{0.004, 16};
    const ScalarField dec = decode_field(encode_field(f, loose_bounds(64), cfg, 0.0));
    for (std::size_t v = 0; v < 64; ++v) CHECK(std::abs(dec.values[v] - f.values[v]) <= cfg.xi);
}

TEST_CASE("narrow code widths still round-trip within xi") {
    const ScalarField f = smooth_random_field(16, 16, 5);
    const QuantizationConfig cfg{0.02, 2};  // alphabet {0,1,2,3}
    const ScalarField dec = decode_field(encode_field(f, loose_bounds(256), cfg, 0.0));
    for (std::size_t v = 0; v < 256; ++v) CHECK(std::abs(dec.values[v] - f.values[v]) <= cfg.xi);
}

TEST_CASE("round trip respects the error bound and the per-vertex bounds") {
    for (const std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const ScalarField f = smooth_random_field(32, 32, seed);
        const std::size_t n = f.vertex_count();
        const ContourTree tree = build_contour_tree(f);
        BoundsField bounds;
        bounds.lower.resize(n);
        bounds.upper.resize(n);
        for (std::size_t v = 0; v < n; ++v) {
            if (tree.vertex_node[v] != ContourTree::npos) {
                bounds.lower[v] = bounds.upper[v] = f.values[v];
            } else {
                const ContourTree::Arc &a = tree.arcs[tree.vertex_arc[v]];
                bounds.lower[v] = tree.nodes[a.lower].scalar;
                bounds.upper[v] = tree.nodes[a.upper].scalar;
            }
        }
        const QuantizationConfig cfg{0.008, 16};
        const ScalarField dec = decode_field(encode_field(f, bounds, cfg, 0.0));
        REQUIRE(dec.values.size() == n);
        for (std::size_t v = 0; v < n; ++v) {
            CHECK(std::abs(dec.values[v] - f.values[v]) <= cfg.xi);
            CHECK(dec.values[v] >= bounds.lower[v]);
            CHECK(dec.values[v] <= bounds.upper[v]);
        }
    }
}

TEST_CASE("pinned vertices decode to their exact 32-bit value") {
    const ScalarField f = smooth_random_field(24, 24, 9);
    const std::size_t n = f.vertex_count();
    BoundsField bounds = loose_bounds(n);
    for (std::size_t v = 0; v < n; v += 7) bounds.lower[v] = bounds.upper[v] = f.values[v];
    const ScalarField dec = decode_field(encode_field(f, bounds, {0.01, 16}, 0.0));
    for (std::size_t v = 0; v < n; v += 7) CHECK(dec.values[v] == f.values[v]);
}

TEST_CASE("streams are byte-deterministic and re-encoding decoded data is stable") {
    const ScalarField f = smooth_random_field(20, 20, 4);
    const BoundsField bounds = loose_bounds(f.vertex_count());
    const CompressedStream a = encode_field(f, bounds, {0.004, 16}, 0.12);
    const CompressedStream b = encode_field(f, bounds, {0.004, 16}, 0.12);
    CHECK(a.bytes == b.bytes);
    const ScalarField da = decode_field(a);
    const ScalarField db = decode_field(a);
    CHECK(da.values == db.values);
    // A decoded field re-encodes to the same bytes twice in a row.
    const CompressedStream c = encode_field(da, bounds, {0.004, 16}, 0.12);
    const CompressedStream d = encode_field(db, bounds, {0.004, 16}, 0.12);
    CHECK(c.bytes == d.bytes);
}

TEST_CASE("single-vertex unpredictable value decodes exactly") {
    // 1/3 is not reachable from the candidate grid p + o*xi, so the vertex is
    // stored as an exact f32 through the code-0 path.
    const double value = 1.0 / 3.0;
    ScalarField f = make_field(2, {1, 1, 1}, {value});
    f.normalized = true;
    BoundsField bounds;
    bounds.lower = {value};
    bounds.upper = {value};
    const ScalarField dec = decode_field(encode_field(f, bounds, {0.01, 16}, 0.0));
    CHECK(dec.values[0] == static_cast<double>(static_cast<float>(value)));
}

TEST_CASE("header carries the grid layout and denormalization range") {
    std::vector<double> v(16);
    for (int i = 0; i < 16; ++i) v[static_cast<std::size_t>(i)] = 5.0 + i;
    const ScalarField f = normalize(make_field(2, {4, 4, 1}, std::move(v)));
    const CompressedStream stream = encode_field(f, loose_bounds(16), {0.01, 16}, 0.25);
    const StreamHeader h = parse_header(stream);
    CHECK(h.orig_min == 5.0f);
    CHECK(h.orig_max == 20.0f);
    CHECK(h.rank == 2);
    CHECK(h.dims[0] == 4);
    CHECK(h.dims[1] == 4);
    CHECK(h.xi == 0.01);
    CHECK(h.eps == 0.25);
    CHECK(h.m == 16);
    CHECK(h.backend == Backend::deflate);
}

TEST_CASE("malformed streams raise distinct errors") {
    const ScalarField f = smooth_random_field(8, 8, 2);
    const CompressedStream stream = encode_field(f, loose_bounds(64), {0.01, 16}, 0.0);

    CompressedStream bad_magic = stream;
    bad_magic.bytes[0] = 'X';
    try {
        decode_field(bad_magic);
        CHECK(false);
    } catch (const StreamError &e) {
        CHECK(e.code == StreamErrorCode::bad_magic);
    }

    CompressedStream truncated = stream;
    truncated.bytes.resize(truncated.bytes.size() - 3);
    try {
        decode_field(truncated);
        CHECK(false);
    } catch (const StreamError &e) {
        CHECK(e.code == StreamErrorCode::truncated);
    }

    CompressedStream bad_version = stream;
    bad_version.bytes[4] = 9;
    try {
        decode_field(bad_version);
        CHECK(false);
    } catch (const StreamError &e) {
        CHECK(e.code == StreamErrorCode::bad_version);
    }

    CompressedStream bad_backend = stream;
    const StreamHeader h = parse_header(stream);
    bad_backend.bytes[h.header_size - 9] = 17;  // back-end id sits before the payload length
    try {
        decode_field(bad_backend);
        CHECK(false);
    } catch (const StreamError &e) {
        CHECK(e.code == StreamErrorCode::bad_backend);
    }
}

TEST_CASE("non-finite samples are rejected before encoding") {
    ScalarField f = smooth_random_field(4, 4, 1);
    f.values[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(encode_field(f, loose_bounds(16), {0.01, 16}, 0.0), std::invalid_argument);
}

TEST_CASE("compression beats raw storage on smooth fields") {
    const ScalarField f = smooth_random_field(64, 64, 8);
    const CompressedStream stream =
        encode_field(f, loose_bounds(f.vertex_count()), {0.004, 16}, 0.0);
    CHECK(stream.bytes.size() < f.vertex_count() * 4);
}

TEST_CASE("store back-end round-trips like deflate") {
    const ScalarField f = smooth_random_field(12, 12, 3);
    const BoundsField bounds = loose_bounds(f.vertex_count());
    const ScalarField via_store =
        decode_field(encode_field(f, bounds, {0.01, 16}, 0.0, Backend::store));
    const ScalarField via_deflate =
        decode_field(encode_field(f, bounds, {0.01, 16}, 0.0, Backend::deflate));
    CHECK(via_store.values == via_deflate.values);
}
