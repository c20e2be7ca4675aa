// Copyright 2026 The vqtn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VQTN_DATAKIT_IDX_HPP
#define VQTN_DATAKIT_IDX_HPP

#include <openssl/evp.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "vqtn/errors.hpp"

namespace vqtn::datakit {

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;
/// Largest element count accepted from a header.
inline constexpr std::uint64_t kIdxMaxElements = std::uint64_t{1} << 32;

/// Unsigned-byte IDX array: big-endian dimension sizes, row-major data.
struct IdxArray {
    std::vector<std::uint32_t> dims;
    std::vector<std::uint8_t> data;

    std::uint32_t magic() const {
        return 0x00000800u | static_cast<std::uint32_t>(dims.size());
    }
    std::size_t items() const {
        return dims.empty() ? 0 : dims.front();
    }
    std::size_t item_size() const {
        std::size_t s = 1;
        for (std::size_t k = 1; k < dims.size(); k++) s *= dims[k];
        return s;
    }
};

namespace detail {

inline std::uint32_t read_be32(std::istream &in, const char *what) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char *>(b), 4)) throw DataError(std::string("idx: truncated file while reading ") + what);
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

inline void write_be32(std::ostream &out, std::uint32_t v) {
    const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8), static_cast<char>(v)};
    out.write(b, 4);
}

}  // namespace detail

/// Reads an IDX stream. Only the two unsigned-byte layouts are accepted: images (3 dims) and labels (1 dim).
inline IdxArray read_idx(std::istream &in) {
    const std::uint32_t magic = detail::read_be32(in, "magic number");
    if (magic != kIdxImagesMagic && magic != kIdxLabelsMagic) {
        std::ostringstream msg;
        msg << "idx: bad magic number 0x" << std::hex << magic << " (expected 0x803 or 0x801)";
        throw DataError(msg.str());
    }
    IdxArray a;
    const std::size_t nd = magic & 0xff;
    std::uint64_t total = 1;
    for (std::size_t k = 0; k < nd; k++) {
        a.dims.push_back(detail::read_be32(in, "dimension sizes"));
        total *= a.dims.back();
        if (total > kIdxMaxElements) throw DataError("idx: dimension sizes overflow the element limit");
    }
    a.data.resize(static_cast<std::size_t>(total));
    if (total > 0 && !in.read(reinterpret_cast<char *>(a.data.data()), static_cast<std::streamsize>(total))) {
        throw DataError("idx: truncated file, expected " + std::to_string(total) + " data bytes");
    }
    return a;
}

inline IdxArray read_idx(const std::filesystem::path &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("idx: cannot open " + path.string());
    return read_idx(f);
}

inline void write_idx(std::ostream &out, const IdxArray &a) {
    if (a.dims.size() != 1 && a.dims.size() != 3) throw DataError("idx: only 1-D labels and 3-D images are written");
    std::uint64_t total = 1;
    for (auto d : a.dims) total *= d;
    if (total != a.data.size()) throw DataError("idx: data length does not match dimensions");
    detail::write_be32(out, a.magic());
    for (auto d : a.dims) detail::write_be32(out, d);
    out.write(reinterpret_cast<const char *>(a.data.data()), static_cast<std::streamsize>(a.data.size()));
}

inline void write_idx(const std::filesystem::path &path, const IdxArray &a) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("idx: cannot write " + path.string());
    write_idx(f, a);
}

/// Lower-case hex SHA-256 of a file.
inline std::string sha256_file(const std::filesystem::path &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("sha256: cannot open " + path.string());
    EVP_MD_CTX *ctx = EVP_MD_CTX_new();
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw DataError("sha256: digest initialisation failed");
    }
    std::vector<char> buf(1 << 16);
    while (f) {
        f.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (f.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(f.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; i++) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return hex.str();
}

/// Checks user-supplied dataset files against expected digests. Nothing is downloaded; a missing
/// file or a digest mismatch raises DataError naming the file.
inline void verify_checksums(const std::vector<std::pair<std::filesystem::path, std::string>> &files) {
    for (const auto &[path, expected] : files) {
        if (!std::filesystem::exists(path)) {
            throw DataError("dataset file " + path.string() + " not found; place the IDX files there manually");
        }
        const std::string got = sha256_file(path);
        if (got != expected) throw DataError("checksum mismatch for " + path.string() + ": " + got);
    }
}

/// Synthetic stand-in for the fashion-MNIST image file: `count` 28x28 images drawn from ten
/// smooth class templates with pixel noise, plus the matching label file.
inline std::pair<IdxArray, IdxArray> synthetic_fashion_idx(std::size_t count, std::uint64_t seed) {
    constexpr std::uint32_t side = 28;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 18.0);
    std::uniform_int_distribution<int> cls(0, 9);
    std::uniform_real_distribution<double> jitter(-1.5, 1.5), gain(0.7, 1.3);
    IdxArray img{{static_cast<std::uint32_t>(count), side, side}, {}};
    IdxArray lab{{static_cast<std::uint32_t>(count)}, {}};
    img.data.resize(count * side * side);
    lab.data.resize(count);
    for (std::size_t i = 0; i < count; i++) {
        const int c = cls(rng);
        const double cx = 13.5 + jitter(rng), cy = 13.5 + jitter(rng), g = gain(rng);
        // Each class is an ellipse-like blob with a class-specific aspect ratio, orientation and stripe.
        const double ax = 4.0 + (c % 5) * 1.8, ay = 5.0 + (c / 5) * 4.0 + (c % 3);
        const double ang = 0.3 * c;
        for (std::uint32_t r = 0; r < side; r++)
            for (std::uint32_t q = 0; q < side; q++) {
                const double dx = q - cx, dy = r - cy;
                const double u = std::cos(ang) * dx + std::sin(ang) * dy, v = -std::sin(ang) * dx + std::cos(ang) * dy;
                const double e = (u * u) / (ax * ax) + (v * v) / (ay * ay);
                double p = 220.0 * g * std::exp(-e * e);
                p *= 0.75 + 0.25 * std::cos(2.0 * std::numbers::pi * (c + 1) * r / side);
                p += noise(rng);
                img.data[(i * side + r) * side + q] = static_cast<std::uint8_t>(std::clamp(p, 0.0, 255.0));
            }
        lab.data[i] = static_cast<std::uint8_t>(c);
    }
    return {img, lab};
}

}  // namespace vqtn::datakit

#endif
