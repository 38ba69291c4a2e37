/*
 * Copyright 2026 The SemGloVe Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Private helpers shared by the file format implementations.

#ifndef SEMGLOVE_SRC_IO_UTIL_HPP
#define SEMGLOVE_SRC_IO_UTIL_HPP

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>

#include "semglove/error.hpp"

namespace semglove::detail {

inline std::ifstream open_in(const std::filesystem::path& path, bool binary = false) {
    std::ifstream in(path, binary ? std::ios::in | std::ios::binary : std::ios::in);
    if (!in) {
        throw IoError("cannot open " + path.string() + " for reading");
    }
    return in;
}

inline std::ofstream open_out(const std::filesystem::path& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::out | std::ios::binary | std::ios::trunc
                                   : std::ios::out | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    return out;
}

inline void check_written(const std::ostream& out, const std::filesystem::path& path) {
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

// Little-endian encoding, independent of host byte order.

inline void put_u32(char* dst, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) {
        dst[b] = static_cast<char>((v >> (8 * b)) & 0xFFu);
    }
}

inline void put_u64(char* dst, std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
        dst[b] = static_cast<char>((v >> (8 * b)) & 0xFFu);
    }
}

inline std::uint32_t get_u32(const char* src) {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) {
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(src[b])) << (8 * b);
    }
    return v;
}

inline std::uint64_t get_u64(const char* src) {
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) {
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(src[b])) << (8 * b);
    }
    return v;
}

inline void put_f32(char* dst, float v) { put_u32(dst, std::bit_cast<std::uint32_t>(v)); }
inline void put_f64(char* dst, double v) { put_u64(dst, std::bit_cast<std::uint64_t>(v)); }
inline float get_f32(const char* src) { return std::bit_cast<float>(get_u32(src)); }
inline double get_f64(const char* src) { return std::bit_cast<double>(get_u64(src)); }

inline void write_u32(std::ostream& out, std::uint32_t v) {
    char buf[4];
    put_u32(buf, v);
    out.write(buf, 4);
}

inline void write_f32(std::ostream& out, float v) {
    char buf[4];
    put_f32(buf, v);
    out.write(buf, 4);
}

/// Reads exactly n bytes. Returns false on clean EOF before the first byte;
/// throws FormatError when the stream ends part-way.
inline bool read_exact(std::istream& in, char* dst, std::size_t n, const char* what) {
    in.read(dst, static_cast<std::streamsize>(n));
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got == n) {
        return true;
    }
    if (got == 0 && in.eof()) {
        return false;
    }
    throw FormatError(std::string("truncated ") + what + ": expected " + std::to_string(n) +
                      " bytes, got " + std::to_string(got));
}

inline void read_required(std::istream& in, char* dst, std::size_t n, const char* what) {
    if (!read_exact(in, dst, n, what)) {
        throw FormatError(std::string("truncated ") + what + ": unexpected end of file");
    }
}

inline std::uint32_t read_u32(std::istream& in, const char* what) {
    char buf[4];
    read_required(in, buf, 4, what);
    return get_u32(buf);
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

/// Shortest decimal that round-trips to the same double.
inline void append_double(std::string& out, double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    out.append(buf.data(), ptr);
}

inline std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    return line;
}

}  // namespace semglove::detail

#endif  // SEMGLOVE_SRC_IO_UTIL_HPP
