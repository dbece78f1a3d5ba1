#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace toposz {

struct HuffmanError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Canonical Huffman over a dense alphabet [0, alphabet_size). Lengths are the
// wire form: codes are reassigned canonically (sorted by length then symbol),
// so a table round-trips without tie ambiguity.
struct HuffmanTable {
    std::vector<std::uint8_t> lengths;  // one per symbol, 0 = unused
};

HuffmanTable build_huffman_table(const std::vector<std::uint32_t> &symbols,
                                 std::uint32_t alphabet_size);

struct HuffmanBits {
    std::vector<std::uint8_t> bytes;
    std::uint64_t bit_count = 0;
};

HuffmanBits huffman_encode(const std::vector<std::uint32_t> &symbols, const HuffmanTable &table);

std::vector<std::uint32_t> huffman_decode(const std::vector<std::uint8_t> &bytes,
                                          std::uint64_t bit_count, const HuffmanTable &table,
                                          std::uint64_t symbol_count);

// Run-length form of the per-symbol length list: (length u8, run u32) pairs.
std::vector<std::uint8_t> serialize_lengths(const HuffmanTable &table);
HuffmanTable deserialize_lengths(const std::uint8_t *data, std::size_t size,
                                 std::uint32_t alphabet_size, std::size_t *consumed);

}  // namespace toposz
