#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include "tfc/error.hpp"

namespace tfc {

// Shortest decimal form that round-trips to the same double. Every double we
// persist (CSV, model files, dataset containers) goes through this so that
// re-running a command yields byte-identical files.
inline std::string dtos(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

// Strict parse: the whole string must be consumed.
inline double parse_double(std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw Error(ErrorCategory::data, "not a number: '" + std::string(s) + "'");
    }
    return v;
}

inline long long parse_int(std::string_view s) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw Error(ErrorCategory::data, "not an integer: '" + std::string(s) + "'");
    }
    return v;
}

// FNV-1a, 64 bit. Used for vocabulary fingerprints and file content hashes.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xCBF29CE484222325ull) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x00000100000001B3ull;
    }
    return h;
}

inline std::string to_hex(std::uint64_t v) {
    static const char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

}  // namespace tfc
