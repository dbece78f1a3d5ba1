#include "toposz/lossless.hpp"

#include <zlib.h>

namespace toposz {

namespace {

// Raw DEFLATE (RFC 1951): negative window bits strips the zlib wrapper.
constexpr int window_bits = -15;

std::vector<std::uint8_t> deflate_bytes(const std::vector<std::uint8_t> &data) {
    z_stream zs{};
    if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, window_bits, 8, Z_DEFAULT_STRATEGY) != Z_OK)
        throw LosslessError("deflate init failed");
    std::vector<std::uint8_t> out(deflateBound(&zs, static_cast<uLong>(data.size())));
    zs.next_in = const_cast<Bytef *>(data.data());
    zs.avail_in = static_cast<uInt>(data.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = deflate(&zs, Z_FINISH);
    deflateEnd(&zs);
    if (rc != Z_STREAM_END) throw LosslessError("deflate failed");
    out.resize(out.size() - zs.avail_out);
    return out;
}

std::vector<std::uint8_t> inflate_bytes(const std::vector<std::uint8_t> &data) {
    z_stream zs{};
    if (inflateInit2(&zs, window_bits) != Z_OK) throw LosslessError("inflate init failed");
    std::vector<std::uint8_t> out;
    std::vector<std::uint8_t> chunk(1 << 16);
    zs.next_in = const_cast<Bytef *>(data.data());
    zs.avail_in = static_cast<uInt>(data.size());
    int rc = Z_OK;
    do {
        zs.next_out = chunk.data();
        zs.avail_out = static_cast<uInt>(chunk.size());
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw LosslessError("inflate failed: corrupt payload");
        }
        out.insert(out.end(), chunk.data(), chunk.data() + (chunk.size() - zs.avail_out));
    } while (rc != Z_STREAM_END);
    inflateEnd(&zs);
    return out;
}

}  // namespace

std::vector<std::uint8_t> backend_compress(const std::vector<std::uint8_t> &data, Backend backend) {
    switch (backend) {
        case Backend::store: return data;
        case Backend::deflate: return deflate_bytes(data);
    }
    throw LosslessError("unknown back-end id");
}

std::vector<std::uint8_t> backend_decompress(const std::vector<std::uint8_t> &data, Backend backend) {
    switch (backend) {
        case Backend::store: return data;
        case Backend::deflate: return inflate_bytes(data);
    }
    throw LosslessError("unknown back-end id");
}

}  // namespace toposz
