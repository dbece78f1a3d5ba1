#include "toposz/codec.hpp"

#include <cmath>
#include <cstring>

#include "toposz/huffman.hpp"

namespace toposz {

namespace {

constexpr char magic[4] = {'T', 'S', 'Z', '1'};
constexpr std::uint8_t stream_version = 1;

struct Writer {
    std::vector<std::uint8_t> &out;
    void bytes(const void *p, std::size_t n) {
        const auto *b = static_cast<const std::uint8_t *>(p);
        out.insert(out.end(), b, b + n);
    }
    void u8(std::uint8_t x) { out.push_back(x); }
    void u64(std::uint64_t x) {
        for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
    }
    void f64(double x) {
        std::uint64_t bits;
        std::memcpy(&bits, &x, 8);
        u64(bits);
    }
    void f32(float x) {
        std::uint32_t bits;
        std::memcpy(&bits, &x, 4);
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
    }
};

struct Reader {
    const std::uint8_t *data;
    std::size_t size;
    std::size_t at = 0;
    void need(std::size_t n) const {
        if (at + n > size) throw StreamError(StreamErrorCode::truncated, "truncated stream");
    }
    void bytes(void *p, std::size_t n) {
        need(n);
        std::memcpy(p, data + at, n);
        at += n;
    }
    std::uint8_t u8() {
        need(1);
        return data[at++];
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t x = 0;
        for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(data[at + i]) << (8 * i);
        at += 8;
        return x;
    }
    double f64() {
        const std::uint64_t bits = u64();
        double x;
        std::memcpy(&x, &bits, 8);
        return x;
    }
    float f32() {
        need(4);
        std::uint32_t bits = 0;
        for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(data[at + i]) << (8 * i);
        at += 4;
        float x;
        std::memcpy(&x, &bits, 4);
        return x;
    }
};

}  // namespace

double lorenzo_predict(int rank, const std::array<std::size_t, 3> &dims,
                       const std::vector<double> &decoded, VertexId v) {
    std::array<std::int64_t, 3> c{0, 0, 0};
    std::size_t rest = v;
    for (int a = rank - 1; a >= 0; --a) {
        c[a] = static_cast<std::int64_t>(rest % dims[a]);
        rest /= dims[a];
    }
    const auto term = [&](std::int64_t di, std::int64_t dj, std::int64_t dk) -> double {
        const std::int64_t i = c[0] - di, j = c[1] - dj, k = c[2] - dk;
        if (i < 0 || j < 0 || k < 0) return 0.0;
        return decoded[(static_cast<std::size_t>(i) * dims[1] + static_cast<std::size_t>(j)) * dims[2] +
                       static_cast<std::size_t>(k)];
    };
    if (rank == 2) return term(1, 0, 0) + term(0, 1, 0) - term(1, 1, 0);
    return term(1, 0, 0) + term(0, 1, 0) + term(0, 0, 1) - term(1, 1, 0) - term(1, 0, 1) -
           term(0, 1, 1) + term(1, 1, 1);
}

CompressedStream encode_field(const ScalarField &field, const BoundsField &bounds,
                              const QuantizationConfig &cfg, double eps, Backend backend) {
    const std::size_t n = field.vertex_count();
    if (!field.normalized) throw std::invalid_argument("encode_field expects a normalized field");
    if (!(cfg.xi > 0.0)) throw std::invalid_argument("xi must be positive");
    if (cfg.m < 2 || cfg.m > 16) throw std::invalid_argument("m must be in [2,16]");
    if (bounds.lower.size() != n || bounds.upper.size() != n)
        throw std::invalid_argument("bounds size mismatch");
    for (double x : field.values)
        if (!std::isfinite(x)) throw std::invalid_argument("field contains non-finite samples");

    const std::int64_t mid = std::int64_t{1} << (cfg.m - 1);
    const std::int64_t top = (std::int64_t{1} << cfg.m) - 1;
    std::vector<std::uint32_t> codes(n);
    std::vector<float> exact;
    std::vector<double> decoded(n, 0.0);

    for (std::size_t v = 0; v < n; ++v) {
        const double f = field.values[v];
        const double p = lorenzo_predict(field.rank, field.dims, decoded, v);
        const double t = (f - p) / cfg.xi;
        bool done = false;
        if (std::abs(t) < 1e15) {  // sane prediction, candidate offsets fit integers
            const double o1 = std::ceil(t - 0.5);
            const double o2 = t > o1 ? o1 + 1.0 : o1 - 1.0;
            for (const double o : {o1, o2}) {
                const std::int64_t c = mid + static_cast<std::int64_t>(o);
                if (c < 1 || c > top) continue;
                const double r = p + o * cfg.xi;
                if (std::abs(r - f) > cfg.xi) continue;
                // Pinned vertices need an exact hit. Elsewhere the bounds are
                // taken as open: a reconstruction that lands exactly on a
                // bound would tie a pinned critical value and could displace
                // the extremum under the tie-break order.
                const double l = bounds.lower[v], u = bounds.upper[v];
                if (l == u ? r != l : (r <= l || r >= u)) continue;
                codes[v] = static_cast<std::uint32_t>(c);
                decoded[v] = r;
                done = true;
                break;
            }
        }
        if (!done) {
            codes[v] = 0;
            const auto e = static_cast<float>(f);
            exact.push_back(e);
            decoded[v] = static_cast<double>(e);
        }
    }

    // Payload: Huffman table, coded symbols, exact-value section.
    const auto alphabet = static_cast<std::uint32_t>(std::uint64_t{1} << cfg.m);
    const HuffmanTable table = build_huffman_table(codes, alphabet);
    const HuffmanBits bits = huffman_encode(codes, table);
    std::vector<std::uint8_t> payload;
    Writer pw{payload};
    {
        const auto tbl = serialize_lengths(table);
        pw.bytes(tbl.data(), tbl.size());
    }
    pw.u64(n);
    pw.u64(bits.bit_count);
    pw.bytes(bits.bytes.data(), bits.bytes.size());
    pw.u64(exact.size());
    for (float e : exact) pw.f32(e);
    const std::vector<std::uint8_t> packed = backend_compress(payload, backend);

    CompressedStream stream;
    Writer w{stream.bytes};
    w.bytes(magic, 4);
    w.u8(stream_version);
    w.u8(static_cast<std::uint8_t>(field.rank));
    for (int a = 0; a < field.rank; ++a) w.u64(field.dims[a]);
    w.f64(cfg.xi);
    w.f64(eps);
    w.u8(static_cast<std::uint8_t>(cfg.m));
    w.f32(static_cast<float>(field.orig_min));
    w.f32(static_cast<float>(field.orig_max));
    w.u8(static_cast<std::uint8_t>(backend));
    w.u64(packed.size());
    w.bytes(packed.data(), packed.size());
    return stream;
}

StreamHeader parse_header(const CompressedStream &stream) {
    Reader r{stream.bytes.data(), stream.bytes.size()};
    char m4[4];
    r.bytes(m4, 4);
    if (std::memcmp(m4, magic, 4) != 0) throw StreamError(StreamErrorCode::bad_magic, "bad magic");
    StreamHeader h{};
    h.version = r.u8();
    if (h.version != stream_version)
        throw StreamError(StreamErrorCode::bad_version, "unsupported stream version");
    h.rank = r.u8();
    if (h.rank != 2 && h.rank != 3) throw StreamError(StreamErrorCode::bad_layout, "bad rank");
    h.dims = {1, 1, 1};
    for (int a = 0; a < h.rank; ++a) {
        h.dims[static_cast<std::size_t>(a)] = r.u64();
        if (h.dims[static_cast<std::size_t>(a)] == 0)
            throw StreamError(StreamErrorCode::bad_layout, "zero extent");
    }
    h.xi = r.f64();
    h.eps = r.f64();
    h.m = r.u8();
    if (h.m < 2 || h.m > 16) throw StreamError(StreamErrorCode::bad_layout, "bad code width");
    h.orig_min = r.f32();
    h.orig_max = r.f32();
    const std::uint8_t be = r.u8();
    if (be > static_cast<std::uint8_t>(Backend::deflate))
        throw StreamError(StreamErrorCode::bad_backend, "unknown back-end id");
    h.backend = static_cast<Backend>(be);
    h.payload_len = r.u64();
    h.header_size = r.at;
    if (h.header_size + h.payload_len != stream.bytes.size())
        throw StreamError(StreamErrorCode::truncated, "payload length does not match stream size");
    return h;
}

ScalarField decode_field(const CompressedStream &stream) {
    const StreamHeader h = parse_header(stream);
    std::size_t n = 1;
    for (int a = 0; a < h.rank; ++a) n *= h.dims[static_cast<std::size_t>(a)];

    std::vector<std::uint8_t> payload;
    try {
        payload = backend_decompress(
            std::vector<std::uint8_t>(stream.bytes.begin() + static_cast<std::ptrdiff_t>(h.header_size),
                                      stream.bytes.end()),
            h.backend);
    } catch (const LosslessError &e) {
        throw StreamError(StreamErrorCode::truncated, e.what());
    }

    Reader r{payload.data(), payload.size()};
    const auto alphabet = static_cast<std::uint32_t>(std::uint64_t{1} << h.m);
    HuffmanTable table;
    try {
        std::size_t consumed = 0;
        table = deserialize_lengths(payload.data(), payload.size(), alphabet, &consumed);
        r.at = consumed;
    } catch (const HuffmanError &e) {
        throw StreamError(StreamErrorCode::bad_table, e.what());
    }
    const std::uint64_t symbol_count = r.u64();
    if (symbol_count != n)
        throw StreamError(StreamErrorCode::bad_layout, "symbol count does not match dims");
    const std::uint64_t bit_count = r.u64();
    if (bit_count > payload.size() * 8ull)
        throw StreamError(StreamErrorCode::truncated, "code stream exceeds payload");
    const std::uint64_t bit_bytes = (bit_count + 7) / 8;
    r.need(bit_bytes);
    std::vector<std::uint8_t> bits(payload.begin() + static_cast<std::ptrdiff_t>(r.at),
                                   payload.begin() + static_cast<std::ptrdiff_t>(r.at + bit_bytes));
    r.at += bit_bytes;
    std::vector<std::uint32_t> codes;
    try {
        codes = huffman_decode(bits, bit_count, table, symbol_count);
    } catch (const HuffmanError &e) {
        throw StreamError(StreamErrorCode::bad_table, e.what());
    }
    const std::uint64_t n_exact = r.u64();
    if (n_exact > payload.size() / 4)
        throw StreamError(StreamErrorCode::truncated, "exact-value section exceeds payload");
    r.need(n_exact * 4);
    std::vector<float> exact(n_exact);
    for (auto &e : exact) e = r.f32();

    const std::int64_t mid = std::int64_t{1} << (h.m - 1);
    std::vector<double> decoded(n, 0.0);
    std::size_t next_exact = 0;
    for (std::size_t v = 0; v < n; ++v) {
        if (codes[v] == 0) {
            if (next_exact >= exact.size())
                throw StreamError(StreamErrorCode::bad_layout, "exact-value section exhausted");
            decoded[v] = static_cast<double>(exact[next_exact++]);
        } else {
            const double p = lorenzo_predict(h.rank, h.dims, decoded, v);
            decoded[v] = p + static_cast<double>(static_cast<std::int64_t>(codes[v]) - mid) * h.xi;
        }
    }
    if (next_exact != exact.size())
        throw StreamError(StreamErrorCode::bad_layout, "unused exact values");

    ScalarField f = make_field(h.rank, h.dims, std::move(decoded));
    f.normalized = true;
    f.orig_min = static_cast<double>(h.orig_min);
    f.orig_max = static_cast<double>(h.orig_max);
    return f;
}

}  // namespace toposz
