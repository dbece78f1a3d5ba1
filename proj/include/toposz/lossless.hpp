#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace toposz {

// Final lossless stage of the stream. The id byte is part of the format so
// alternatives can be added without breaking old streams.
enum class Backend : std::uint8_t { store = 0, deflate = 1 };

struct LosslessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> backend_compress(const std::vector<std::uint8_t> &data, Backend backend);
std::vector<std::uint8_t> backend_decompress(const std::vector<std::uint8_t> &data, Backend backend);

}  // namespace toposz
