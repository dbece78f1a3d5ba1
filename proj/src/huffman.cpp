#include "toposz/huffman.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <utility>

namespace toposz {

namespace {

constexpr int max_code_length = 57;  // fits the 64-bit accumulator with slack

struct CanonicalCodes {
    std::vector<std::uint64_t> code;  // per symbol
    std::array<std::uint64_t, max_code_length + 1> first_code{};
    std::array<std::uint32_t, max_code_length + 1> count{};
    std::array<std::uint32_t, max_code_length + 1> first_index{};
    std::vector<std::uint32_t> ordered;  // symbols sorted by (length, symbol)
    int max_len = 0;
};

CanonicalCodes assign_codes(const HuffmanTable &table) {
    CanonicalCodes c;
    c.code.assign(table.lengths.size(), 0);
    for (std::uint32_t s = 0; s < table.lengths.size(); ++s) {
        const int len = table.lengths[s];
        if (!len) continue;
        if (len > max_code_length) throw HuffmanError("code length out of range");
        c.ordered.push_back(s);
        ++c.count[static_cast<std::size_t>(len)];
        c.max_len = std::max(c.max_len, len);
    }
    std::sort(c.ordered.begin(), c.ordered.end(), [&](std::uint32_t a, std::uint32_t b) {
        return std::make_pair(table.lengths[a], a) < std::make_pair(table.lengths[b], b);
    });
    std::uint64_t code = 0;
    std::uint32_t index = 0;
    for (int len = 1; len <= c.max_len; ++len) {
        code <<= 1;
        c.first_code[static_cast<std::size_t>(len)] = code;
        c.first_index[static_cast<std::size_t>(len)] = index;
        code += c.count[static_cast<std::size_t>(len)];
        index += c.count[static_cast<std::size_t>(len)];
        if (code > (1ull << len)) throw HuffmanError("code lengths violate Kraft");  // integer-exact
    }
    std::array<std::uint64_t, max_code_length + 1> next = c.first_code;
    for (std::uint32_t s : c.ordered) c.code[s] = next[table.lengths[s]]++;
    return c;
}

}  // namespace

HuffmanTable build_huffman_table(const std::vector<std::uint32_t> &symbols,
                                 std::uint32_t alphabet_size) {
    std::vector<std::uint64_t> counts(alphabet_size, 0);
    for (std::uint32_t s : symbols) {
        if (s >= alphabet_size) throw HuffmanError("symbol out of alphabet");
        ++counts[s];
    }
    HuffmanTable table;
    table.lengths.assign(alphabet_size, 0);

    struct NodeRef {
        std::uint64_t count;
        std::uint32_t order;  // creation order, deterministic tie-break
        std::uint32_t node;
    };
    const auto cmp = [](const NodeRef &a, const NodeRef &b) {
        return std::make_pair(a.count, a.order) > std::make_pair(b.count, b.order);
    };
    std::priority_queue<NodeRef, std::vector<NodeRef>, decltype(cmp)> pq(cmp);
    struct Node {
        std::int64_t symbol;  // -1 internal
        std::uint32_t left, right;
    };
    std::vector<Node> nodes;
    std::uint32_t order = 0;
    for (std::uint32_t s = 0; s < alphabet_size; ++s) {
        if (!counts[s]) continue;
        pq.push({counts[s], order++, static_cast<std::uint32_t>(nodes.size())});
        nodes.push_back({static_cast<std::int64_t>(s), 0, 0});
    }
    if (nodes.empty()) return table;
    if (nodes.size() == 1) {
        table.lengths[static_cast<std::size_t>(nodes[0].symbol)] = 1;
        return table;
    }
    while (pq.size() > 1) {
        const NodeRef a = pq.top();
        pq.pop();
        const NodeRef b = pq.top();
        pq.pop();
        pq.push({a.count + b.count, order++, static_cast<std::uint32_t>(nodes.size())});
        nodes.push_back({-1, a.node, b.node});
    }
    std::vector<std::pair<std::uint32_t, std::uint8_t>> stack{{pq.top().node, 0}};
    while (!stack.empty()) {
        const auto [id, depth] = stack.back();
        stack.pop_back();
        if (nodes[id].symbol >= 0) {
            table.lengths[static_cast<std::size_t>(nodes[id].symbol)] = depth;
        } else {
            if (depth >= max_code_length) throw HuffmanError("degenerate symbol distribution");
            stack.emplace_back(nodes[id].left, static_cast<std::uint8_t>(depth + 1));
            stack.emplace_back(nodes[id].right, static_cast<std::uint8_t>(depth + 1));
        }
    }
    return table;
}

HuffmanBits huffman_encode(const std::vector<std::uint32_t> &symbols, const HuffmanTable &table) {
    const CanonicalCodes codes = assign_codes(table);
    HuffmanBits out;
    std::uint64_t acc = 0;
    int filled = 0;
    for (std::uint32_t s : symbols) {
        const int len = table.lengths[s];
        if (!len) throw HuffmanError("symbol has no code");
        acc = (acc << len) | codes.code[s];
        filled += len;
        out.bit_count += static_cast<std::uint64_t>(len);
        while (filled >= 8) {
            filled -= 8;
            out.bytes.push_back(static_cast<std::uint8_t>(acc >> filled));
        }
    }
    if (filled) out.bytes.push_back(static_cast<std::uint8_t>(acc << (8 - filled)));
    return out;
}

std::vector<std::uint32_t> huffman_decode(const std::vector<std::uint8_t> &bytes,
                                          std::uint64_t bit_count, const HuffmanTable &table,
                                          std::uint64_t symbol_count) {
    const CanonicalCodes codes = assign_codes(table);
    if (symbol_count > 0 && codes.ordered.empty()) throw HuffmanError("empty table");
    if (bit_count > bytes.size() * 8ull) throw HuffmanError("bit count exceeds payload");
    std::vector<std::uint32_t> out;
    out.reserve(symbol_count);
    std::uint64_t pos = 0;
    for (std::uint64_t i = 0; i < symbol_count; ++i) {
        std::uint64_t code = 0;
        int len = 0;
        while (true) {
            if (pos >= bit_count) throw HuffmanError("truncated code stream");
            code = (code << 1) | ((bytes[pos >> 3] >> (7 - (pos & 7))) & 1u);
            ++pos;
            ++len;
            const auto l = static_cast<std::size_t>(len);
            if (codes.count[l] && code >= codes.first_code[l] &&
                code < codes.first_code[l] + codes.count[l]) {
                out.push_back(codes.ordered[codes.first_index[l] + (code - codes.first_code[l])]);
                break;
            }
            if (len >= codes.max_len) throw HuffmanError("corrupt code stream");
        }
    }
    return out;
}

std::vector<std::uint8_t> serialize_lengths(const HuffmanTable &table) {
    std::vector<std::pair<std::uint8_t, std::uint32_t>> runs;
    for (std::uint8_t len : table.lengths) {
        if (!runs.empty() && runs.back().first == len)
            ++runs.back().second;
        else
            runs.emplace_back(len, 1u);
    }
    std::vector<std::uint8_t> out;
    const auto put32 = [&](std::uint32_t x) {
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
    };
    put32(static_cast<std::uint32_t>(runs.size()));
    for (const auto &[len, count] : runs) {
        out.push_back(len);
        put32(count);
    }
    return out;
}

HuffmanTable deserialize_lengths(const std::uint8_t *data, std::size_t size,
                                 std::uint32_t alphabet_size, std::size_t *consumed) {
    const auto get32 = [&](std::size_t at) -> std::uint32_t {
        std::uint32_t x = 0;
        for (int i = 0; i < 4; ++i) x |= static_cast<std::uint32_t>(data[at + i]) << (8 * i);
        return x;
    };
    if (size < 4) throw HuffmanError("truncated table");
    const std::uint32_t n_runs = get32(0);
    std::size_t at = 4;
    HuffmanTable table;
    table.lengths.reserve(alphabet_size);
    for (std::uint32_t r = 0; r < n_runs; ++r) {
        if (at + 5 > size) throw HuffmanError("truncated table");
        const std::uint8_t len = data[at];
        const std::uint32_t count = get32(at + 1);
        at += 5;
        if (table.lengths.size() + count > alphabet_size) throw HuffmanError("table overruns alphabet");
        table.lengths.insert(table.lengths.end(), count, len);
    }
    if (table.lengths.size() != alphabet_size) throw HuffmanError("table does not cover alphabet");
    if (consumed) *consumed = at;
    return table;
}

}  // namespace toposz
