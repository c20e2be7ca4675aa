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

#ifndef VQTN_ANALYSIS_ENTROPY_HPP
#define VQTN_ANALYSIS_ENTROPY_HPP

#include <cmath>

#include "vqtn/coeffs/coefficient_mps.hpp"

namespace vqtn::analysis {

/// Schmidt-value threshold used for counting bonds, relative to the largest value of a cut.
inline constexpr double kBondThreshold = 1e-10;

struct EntropyProfile {
    std::vector<double> s2;  // cut k (between sites k and k+1), k = 0..N-2
    double s2_max = 0.0;
    std::string normalization = "per_cut";
};

/// -log2 of the purity of a spectrum after normalizing it to unit weight.
inline double renyi2(const std::vector<double> &schmidt) {
    double w = 0.0;
    for (double s : schmidt) w += s * s;
    if (!(w > 0.0)) throw NumericalError("renyi2: empty spectrum");
    double purity = 0.0;
    for (double s : schmidt) {
        const double p = s * s / w;
        purity += p * p;
    }
    return std::max(0.0, -std::log2(purity));
}

inline EntropyProfile renyi2_profile(const SingularSpectrum &spec) {
    EntropyProfile out;
    for (const auto &cut : spec.cuts) {
        out.s2.push_back(renyi2(cut));
        out.s2_max = std::max(out.s2_max, out.s2.back());
    }
    return out;
}

inline EntropyProfile renyi2_profile(const coeffs::CoefficientMps &c) {
    if (!(c.norm() > 0.0)) throw NumericalError("renyi2_profile: zero coefficient vector");
    return renyi2_profile(mps_singular_spectrum(c.mps()));
}

/// Per-cut count of Schmidt values above `rel` times the largest one.
inline std::vector<std::size_t> effective_bond_dims(const SingularSpectrum &spec, double rel = kBondThreshold) {
    std::vector<std::size_t> out;
    for (const auto &cut : spec.cuts) {
        std::size_t k = 0;
        while (k < cut.size() && cut[k] > rel * cut.front()) k++;
        out.push_back(std::max<std::size_t>(k, 1));
    }
    return out;
}

inline std::size_t effective_max_bond(const coeffs::CoefficientMps &c, double rel = kBondThreshold) {
    const auto dims = effective_bond_dims(mps_singular_spectrum(c.mps()), rel);
    return dims.empty() ? 1 : *std::max_element(dims.begin(), dims.end());
}

/// -log2 of the Haar-averaged purity of a (d^k) x (d^(N-k)) bipartition:
/// E[Tr rho_A^2] = (dA + dB) / (dA dB + 1).
inline double page_reference(std::size_t n, std::size_t k, double local_dim = 3.0) {
    if (k < 1 || k >= n) throw std::invalid_argument("page_reference: cut must lie in [1, N-1]");
    // Work in logs; 3^N overflows nothing here, but keep it exact for large N as well.
    const double la = static_cast<double>(k) * std::log(local_dim);
    const double lb = static_cast<double>(n - k) * std::log(local_dim);
    const double lnum = std::max(la, lb) + std::log1p(std::exp(-std::abs(la - lb)));
    const double lden = la + lb + std::log1p(std::exp(-(la + lb)));
    return (lden - lnum) / std::log(2.0);
}

/// Sum over cuts of the squared Schmidt values beyond the first D, for each D.
inline std::vector<double> truncation_error_curve(const SingularSpectrum &spec, const std::vector<std::size_t> &ds) {
    std::vector<double> out;
    for (std::size_t d : ds) {
        double e = 0.0;
        for (const auto &cut : spec.cuts)
            for (std::size_t i = d; i < cut.size(); i++) e += cut[i] * cut[i];
        out.push_back(e);
    }
    return out;
}

inline std::vector<double> truncation_error_curve(const coeffs::CoefficientMps &c, const std::vector<std::size_t> &ds) {
    return truncation_error_curve(mps_singular_spectrum(c.mps()), ds);
}

}  // namespace vqtn::analysis

#endif
