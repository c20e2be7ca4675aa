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

#ifndef VQTN_LEARN_FEATURE_MAP_HPP
#define VQTN_LEARN_FEATURE_MAP_HPP

#include <array>

#include "vqtn/circuits/encoding.hpp"
#include "vqtn/coeffs/coefficient_mps.hpp"

namespace vqtn::learn {

/// Product feature vector T(x) with site vectors (1, cos phi_alpha(x), sin phi_alpha(x)).
struct FeatureMapState {
    std::vector<std::array<double, 3>> sites;

    std::size_t size() const {
        return sites.size();
    }

    Mps to_mps() const {
        std::vector<std::vector<cplx>> v;
        for (const auto &s : sites) v.push_back({s[0], s[1], s[2]});
        return Mps::product(v);
    }

    /// Dense vector of length 3^N, site 0 most significant.
    std::vector<double> to_dense() const {
        std::vector<double> out{1.0};
        for (const auto &s : sites) {
            std::vector<double> next;
            next.reserve(out.size() * 3);
            for (double v : out)
                for (double t : s) next.push_back(v * t);
            out = std::move(next);
        }
        return out;
    }
};

inline FeatureMapState feature_map(const circuits::EncodingMap &enc, std::span<const double> x) {
    FeatureMapState f;
    f.sites.reserve(enc.size());
    for (std::size_t a = 0; a < enc.size(); a++) {
        const double phi = enc(a, x);
        f.sites.push_back({1.0, std::cos(phi), std::sin(phi)});
    }
    return f;
}

inline FeatureMapState feature_map(const circuits::EncodingMap &enc, double x) {
    return feature_map(enc, std::span<const double>(&x, 1));
}

/// C . T(x), contracted left to right.
inline double evaluate(const coeffs::CoefficientMps &c, const FeatureMapState &t) {
    const Mps &m = c.mps();
    if (m.size() != t.size()) {
        throw std::invalid_argument("evaluate: coefficient and feature lengths differ");
    }
    Eigen::RowVectorXd v = Eigen::RowVectorXd::Ones(1);
    for (std::size_t k = 0; k < m.size(); k++) {
        const auto &core = m.core(k);
        const std::size_t l = core.dim(0), r = core.dim(2);
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(r));
        const auto &s = t.sites[k];
        const cplx *d = core.data().data();
        for (std::size_t i = 0; i < l; i++)
            for (std::size_t p = 0; p < 3; p++)
                for (std::size_t j = 0; j < r; j++) a(i, j) += d[(i * 3 + p) * r + j].real() * s[p];
        v = v * a;
    }
    return v(0);
}

}  // namespace vqtn::learn

#endif
