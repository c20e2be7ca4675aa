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

#ifndef VQTN_COEFFS_CONTAINER_HPP
#define VQTN_COEFFS_CONTAINER_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "vqtn/coeffs/coefficient_mps.hpp"

namespace vqtn::coeffs {

// Binary layout, all integers and floats little-endian:
//   "VQTNCMPS" | u32 version | u64 N | N x u64 physical dims | (N+1) x u64 bond dims
//   | u64 header length | header JSON (origin, source norm) | cores as f64, row-major (l, p, r).

inline constexpr std::array<char, 8> kContainerMagic{'V', 'Q', 'T', 'N', 'C', 'M', 'P', 'S'};
inline constexpr std::uint32_t kContainerVersion = 1;

namespace detail {

template <typename T>
T to_little(T v) {
    if constexpr (std::endian::native == std::endian::big) {
        auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
        std::reverse(bytes.begin(), bytes.end());
        return std::bit_cast<T>(bytes);
    }
    return v;
}

template <typename T>
void put(std::ostream &out, T v) {
    v = to_little(v);
    out.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <typename T>
T get(std::istream &in) {
    T v{};
    in.read(reinterpret_cast<char *>(&v), sizeof(T));
    if (!in) throw DataError("coefficient container: unexpected end of data");
    return to_little(v);
}

}  // namespace detail

inline void write_coefficient_mps(std::ostream &out, const CoefficientMps &c) {
    const Mps &m = c.mps();
    if (m.max_abs_imag() != 0.0) {
        throw NumericalError("write_coefficient_mps: cores must be real");
    }
    out.write(kContainerMagic.data(), kContainerMagic.size());
    detail::put<std::uint32_t>(out, kContainerVersion);
    detail::put<std::uint64_t>(out, m.size());
    for (auto d : m.physical_dims()) detail::put<std::uint64_t>(out, d);
    for (auto b : m.bond_dims()) detail::put<std::uint64_t>(out, b);
    nlohmann::json header{{"origin", to_string(c.origin().kind)}, {"detail", c.origin().detail}};
    if (c.source_norm()) header["source_norm"] = *c.source_norm();
    const std::string h = header.dump();
    detail::put<std::uint64_t>(out, h.size());
    out.write(h.data(), static_cast<std::streamsize>(h.size()));
    for (const auto &core : m.cores()) {
        for (const auto &v : core.data()) detail::put<double>(out, v.real());
    }
    if (!out) throw DataError("write_coefficient_mps: stream error");
}

inline CoefficientMps read_coefficient_mps(std::istream &in) {
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kContainerMagic) throw DataError("coefficient container: bad magic");
    const auto version = detail::get<std::uint32_t>(in);
    if (version != kContainerVersion) throw DataError("coefficient container: unsupported version " + std::to_string(version));
    const auto n = detail::get<std::uint64_t>(in);
    if (n == 0 || n > 4096) throw DataError("coefficient container: implausible length");
    std::vector<std::size_t> phys(n), bonds(n + 1);
    for (auto &d : phys) d = detail::get<std::uint64_t>(in);
    for (auto &b : bonds) b = detail::get<std::uint64_t>(in);
    const auto hlen = detail::get<std::uint64_t>(in);
    if (hlen > (1u << 26)) throw DataError("coefficient container: header too large");
    std::string h(hlen, '\0');
    in.read(h.data(), static_cast<std::streamsize>(hlen));
    if (!in) throw DataError("coefficient container: truncated header");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(h);
    } catch (const nlohmann::json::exception &e) {
        throw DataError(std::string("coefficient container: bad header: ") + e.what());
    }
    std::vector<DenseTensor> cores;
    for (std::size_t k = 0; k < n; k++) {
        if (bonds[k] == 0 || phys[k] == 0 || bonds[k + 1] == 0 || bonds[k] > (1u << 20) || bonds[k + 1] > (1u << 20))
            throw DataError("coefficient container: bad dimensions");
        DenseTensor c({bonds[k], phys[k], bonds[k + 1]});
        for (auto &v : c.data()) v = cplx(detail::get<double>(in), 0.0);
        cores.push_back(std::move(c));
    }
    Origin origin{origin_from_string(header.value("origin", std::string("variational"))),
                  header.value("detail", nlohmann::json::object())};
    std::optional<double> norm;
    if (header.contains("source_norm")) norm = header["source_norm"].get<double>();
    return CoefficientMps(Mps(std::move(cores)), std::move(origin), norm);
}

inline void save_coefficient_mps(const std::string &path, const CoefficientMps &c) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path + " for writing");
    write_coefficient_mps(out, c);
}

inline CoefficientMps load_coefficient_mps(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    return read_coefficient_mps(in);
}

}  // namespace vqtn::coeffs

#endif
