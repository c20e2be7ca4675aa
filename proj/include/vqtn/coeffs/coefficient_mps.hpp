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

#ifndef VQTN_COEFFS_COEFFICIENT_MPS_HPP
#define VQTN_COEFFS_COEFFICIENT_MPS_HPP

#include <sstream>

#include "json.hpp"
#include "vqtn/errors.hpp"
#include "vqtn/tensor.hpp"

namespace vqtn::coeffs {

enum class OriginKind { FromCircuit, Variational, SparsePauli };

inline std::string to_string(OriginKind k) {
    switch (k) {
        case OriginKind::FromCircuit:
            return "from_circuit";
        case OriginKind::Variational:
            return "variational";
        case OriginKind::SparsePauli:
            return "sparse_pauli";
    }
    return "variational";
}

inline OriginKind origin_from_string(const std::string &s) {
    if (s == "from_circuit") return OriginKind::FromCircuit;
    if (s == "variational") return OriginKind::Variational;
    if (s == "sparse_pauli") return OriginKind::SparsePauli;
    throw ConfigError("unknown coefficient origin '" + s + "'");
}

struct Origin {
    OriginKind kind = OriginKind::Variational;
    nlohmann::json detail = nlohmann::json::object();
};

/// Real coefficient vector over the trigonometric basis {1, cos, sin}^N, stored as an MPS
/// with physical dimension 3 on every site.
class CoefficientMps {
   public:
    CoefficientMps() = default;

    CoefficientMps(Mps mps, Origin origin, std::optional<double> source_norm = std::nullopt)
        : mps_(std::move(mps)), origin_(std::move(origin)), source_norm_(source_norm) {
        for (std::size_t k = 0; k < mps_.size(); k++) {
            if (mps_.physical_dim(k) != 3) {
                throw std::invalid_argument("CoefficientMps: physical dimension must be 3");
            }
        }
    }

    const Mps &mps() const {
        return mps_;
    }
    const Origin &origin() const {
        return origin_;
    }
    /// Norm before normalization, when this vector was normalized.
    std::optional<double> source_norm() const {
        return source_norm_;
    }
    std::size_t size() const {
        return mps_.size();
    }
    std::vector<std::size_t> bond_dims() const {
        return mps_.bond_dims();
    }
    std::size_t max_bond() const {
        return mps_.max_bond();
    }

    double norm() const {
        return mps_norm(mps_);
    }

    CoefficientMps normalized() const {
        const double n = norm();
        if (!(n > 0.0)) {
            throw NumericalError("CoefficientMps::normalized: zero vector");
        }
        return CoefficientMps(mps_.scaled(1.0 / n), origin_, source_norm_.value_or(1.0) * n);
    }

    /// Entry at a multi-index in {0, 1, 2}^N.
    double entry(std::span<const int> index) const {
        if (index.size() != mps_.size()) {
            throw std::invalid_argument("CoefficientMps::entry: index length mismatch");
        }
        RowMatrixXcd v = RowMatrixXcd::Ones(1, 1);
        for (std::size_t k = 0; k < mps_.size(); k++) {
            const auto &c = mps_.core(k);
            const std::size_t l = c.dim(0), r = c.dim(2);
            if (index[k] < 0 || index[k] > 2) {
                throw std::out_of_range("CoefficientMps::entry: index entries must be 0, 1 or 2");
            }
            Eigen::Map<const RowMatrixXcd, 0, Eigen::OuterStride<>> slice(
                c.data().data() + static_cast<std::size_t>(index[k]) * r, static_cast<Eigen::Index>(l),
                static_cast<Eigen::Index>(r), Eigen::OuterStride<>(static_cast<Eigen::Index>(3 * r)));
            v = v * slice;
        }
        return v(0, 0).real();
    }

    std::vector<double> to_dense() const {
        auto d = mps_.to_dense();
        std::vector<double> out(d.size());
        for (std::size_t k = 0; k < d.size(); k++) out[k] = d[k].real();
        return out;
    }

   private:
    Mps mps_;
    Origin origin_;
    std::optional<double> source_norm_;
};

/// Real and imaginary parts of a complex MPS as MPS with real-valued cores.
/// Uses the embedding a + ib -> [[a, -b], [b, a]], so bonds double.
inline std::pair<Mps, Mps> split_real_imag(const Mps &m) {
    const std::size_t n = m.size();
    auto build = [&](bool imag_part) {
        std::vector<DenseTensor> cores;
        for (std::size_t k = 0; k < n; k++) {
            const auto &c = m.core(k);
            const std::size_t l = c.dim(0), d = c.dim(1), r = c.dim(2);
            const std::size_t nl = (k == 0) ? 1 : 2 * l;
            const std::size_t nr = (k == n - 1) ? 1 : 2 * r;
            DenseTensor out({nl, d, nr});
            for (std::size_t a = 0; a < l; a++)
                for (std::size_t p = 0; p < d; p++)
                    for (std::size_t b = 0; b < r; b++) {
                        const double re = c({a, p, b}).real(), im = c({a, p, b}).imag();
                        // Block (row block i, column block j) of the embedding.
                        const double blk[2][2] = {{re, -im}, {im, re}};
                        for (std::size_t i = 0; i < 2; i++) {
                            if (k == 0 && i != (imag_part ? 1u : 0u)) continue;
                            for (std::size_t j = 0; j < 2; j++) {
                                if (k == n - 1 && j != 0) continue;
                                const std::size_t row = (k == 0) ? 0 : i * l + a;
                                const std::size_t col = (k == n - 1) ? b : j * r + b;
                                out({row, p, col}) = blk[i][j];
                            }
                        }
                    }
            cores.push_back(std::move(out));
        }
        return Mps(std::move(cores));
    };
    if (n == 1) {
        DenseTensor re({1, m.physical_dim(0), 1}), im({1, m.physical_dim(0), 1});
        for (std::size_t p = 0; p < m.physical_dim(0); p++) {
            re({0, p, 0}) = m.core(0)({0, p, 0}).real();
            im({0, p, 0}) = m.core(0)({0, p, 0}).imag();
        }
        return {Mps({re}), Mps({im})};
    }
    return {build(false), build(true)};
}

/// Real MPS with real-valued cores representing a complex MPS whose contraction is real.
/// Throws when the imaginary part exceeds rel_tol relative to max(|Re|, 1).
inline Mps realify(const Mps &m, double rel_tol = 1e-10, const SvdOptions &opts = SvdOptions::exact()) {
    auto [re, im] = split_real_imag(m);
    // Norms from the canonical center core; an inner product would cancel badly for small |Im|.
    const double nre = mps_canonicalize(re, 0).core(0).norm();
    const double nim = mps_canonicalize(im, 0).core(0).norm();
    if (nim > rel_tol * std::max(nre, 1.0)) {
        std::ostringstream msg;
        msg << "coefficient tensor is not real: |Im| = " << std::scientific << nim << ", |Re| = " << nre;
        throw NumericalError(msg.str());
    }
    return mps_compress(re, opts).mps;
}

}  // namespace vqtn::coeffs

#endif
