#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "toposz/bounds.hpp"
#include "toposz/field.hpp"
#include "toposz/lossless.hpp"

namespace toposz {

// Quantizer setup: 2^m - 1 usable codes spaced xi apart around the prediction,
// code 0 reserved for unpredictable points stored exactly.
struct QuantizationConfig {
    double xi = 0.01;
    int m = 16;
};

// A complete .tsz stream (header + back-end-compressed payload), bit-exact.
struct CompressedStream {
    std::vector<std::uint8_t> bytes;
};

enum class StreamErrorCode : std::uint8_t {
    bad_magic,
    bad_version,
    truncated,
    bad_table,
    bad_backend,
    bad_layout,
};

struct StreamError : std::runtime_error {
    StreamErrorCode code;
    StreamError(StreamErrorCode c, const std::string &what) : std::runtime_error(what), code(c) {}
};

struct StreamHeader {
    std::uint8_t version;
    int rank;
    std::array<std::size_t, 3> dims;
    double xi;
    double eps;
    int m;
    float orig_min;
    float orig_max;
    Backend backend;
    std::uint64_t payload_len;
    std::size_t header_size;
};

StreamHeader parse_header(const CompressedStream &stream);

// First-phase prediction from already-decoded lexicographic predecessors:
// inclusion-exclusion over the preceding unit-cube corners, out-of-domain
// terms contribute 0.
double lorenzo_predict(int rank, const std::array<std::size_t, 3> &dims,
                       const std::vector<double> &decoded, VertexId v);

// Row-major scan; per vertex the nearest candidate p + (c - 2^{m-1}) * xi and
// then the next-nearest on the opposite side are tested against both the
// global bound and [l, u]; failing both, the vertex is coded 0 and stored as
// an exact f32. Requires a normalized field and containing bounds.
CompressedStream encode_field(const ScalarField &field, const BoundsField &bounds,
                              const QuantizationConfig &cfg, double eps,
                              Backend backend = Backend::deflate);

// Inverse scan; needs no bounds. Output is the normalized field with the
// original range in orig_min/orig_max.
ScalarField decode_field(const CompressedStream &stream);

}  // namespace toposz
