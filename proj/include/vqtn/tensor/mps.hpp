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

#ifndef VQTN_TENSOR_MPS_HPP
#define VQTN_TENSOR_MPS_HPP

#include <optional>

#include "vqtn/tensor/linalg.hpp"

namespace vqtn {

/// Open-boundary matrix product state. Core k has shape (left bond, physical, right bond).
class Mps {
   public:
    Mps() = default;

    explicit Mps(std::vector<DenseTensor> cores, std::optional<std::size_t> center = std::nullopt)
        : cores_(std::move(cores)), center_(center) {
        if (cores_.empty()) {
            throw std::invalid_argument("Mps: at least one core is required");
        }
        for (std::size_t k = 0; k < cores_.size(); k++) {
            if (cores_[k].rank() != 3) {
                throw std::invalid_argument("Mps: core " + std::to_string(k) + " is not rank 3");
            }
            if (k > 0 && cores_[k - 1].dim(2) != cores_[k].dim(0)) {
                throw std::invalid_argument("Mps: bond mismatch between cores " + std::to_string(k - 1) + " and " +
                                            std::to_string(k));
            }
        }
        if (cores_.front().dim(0) != 1 || cores_.back().dim(2) != 1) {
            throw std::invalid_argument("Mps: boundary bonds must be 1");
        }
        if (center_ && *center_ >= cores_.size()) {
            throw std::invalid_argument("Mps: canonical center out of range");
        }
    }

    /// Bond-1 state with the given per-site vectors.
    static Mps product(const std::vector<std::vector<cplx>> &sites) {
        std::vector<DenseTensor> cores;
        cores.reserve(sites.size());
        for (const auto &v : sites) {
            cores.emplace_back(Shape{1, v.size(), 1}, v);
        }
        return Mps(std::move(cores));
    }

    /// Sequential SVD decomposition of a dense vector with the given physical dimensions.
    static Mps from_dense(std::span<const cplx> vec, const std::vector<std::size_t> &phys,
                          const SvdOptions &opts = SvdOptions::exact()) {
        if (phys.empty() || shape_volume(phys) != vec.size()) {
            throw std::invalid_argument("Mps::from_dense: vector length does not match physical dimensions");
        }
        std::vector<DenseTensor> cores;
        RowMatrixXcd rest = Eigen::Map<const RowMatrixXcd>(vec.data(), 1, static_cast<Eigen::Index>(vec.size()));
        std::size_t left = 1;
        for (std::size_t k = 0; k + 1 < phys.size(); k++) {
            const std::size_t d = phys[k];
            const std::size_t remaining = static_cast<std::size_t>(rest.size()) / (left * d);
            Eigen::Map<const RowMatrixXcd> m(rest.data(), static_cast<Eigen::Index>(left * d),
                                             static_cast<Eigen::Index>(remaining));
            MatrixSvd f = matrix_svd(m, opts);
            const std::size_t r = f.s.size();
            DenseTensor core({left, d, r});
            core.as_matrix(left * d, r) = f.u;
            cores.push_back(std::move(core));
            Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(f.s.data(), static_cast<Eigen::Index>(r));
            rest = s.asDiagonal() * f.vh;
            left = r;
        }
        DenseTensor last({left, phys.back(), 1});
        last.as_matrix(left, phys.back()) =
            Eigen::Map<const RowMatrixXcd>(rest.data(), static_cast<Eigen::Index>(left),
                                           static_cast<Eigen::Index>(phys.back()));
        cores.push_back(std::move(last));
        return Mps(std::move(cores), phys.size() - 1);
    }

    std::size_t size() const {
        return cores_.size();
    }
    const DenseTensor &core(std::size_t k) const {
        return cores_.at(k);
    }
    const std::vector<DenseTensor> &cores() const {
        return cores_;
    }
    std::size_t physical_dim(std::size_t k) const {
        return cores_.at(k).dim(1);
    }
    std::vector<std::size_t> physical_dims() const {
        std::vector<std::size_t> out;
        for (const auto &c : cores_) {
            out.push_back(c.dim(1));
        }
        return out;
    }
    /// Bond dimensions including the two trivial boundary bonds (length N+1).
    std::vector<std::size_t> bond_dims() const {
        std::vector<std::size_t> out{1};
        for (const auto &c : cores_) {
            out.push_back(c.dim(2));
        }
        return out;
    }
    std::size_t max_bond() const {
        auto b = bond_dims();
        return *std::max_element(b.begin(), b.end());
    }
    std::optional<std::size_t> canonical_center() const {
        return center_;
    }

    std::vector<cplx> to_dense() const {
        RowMatrixXcd acc = RowMatrixXcd::Ones(1, 1);
        for (const auto &c : cores_) {
            const std::size_t l = c.dim(0), d = c.dim(1), r = c.dim(2);
            RowMatrixXcd next = acc * c.as_matrix(l, d * r);
            acc = Eigen::Map<RowMatrixXcd>(next.data(), next.size() / static_cast<Eigen::Index>(r),
                                           static_cast<Eigen::Index>(r));
        }
        return std::vector<cplx>(acc.data(), acc.data() + acc.size());
    }

    Mps scaled(cplx factor) const {
        auto cores = cores_;
        const std::size_t site = center_.value_or(0);
        cores[site] = cores[site].scaled(factor);
        return Mps(std::move(cores), center_);
    }

    double max_abs_imag() const {
        double m = 0.0;
        for (const auto &c : cores_) {
            m = std::max(m, c.max_abs_imag());
        }
        return m;
    }

   private:
    std::vector<DenseTensor> cores_;
    std::optional<std::size_t> center_;
};

/// Checks the left (`left == true`) or right isometry condition of a core.
inline bool is_isometric(const DenseTensor &core, bool left, double tol = 1e-10) {
    const std::size_t l = core.dim(0), d = core.dim(1), r = core.dim(2);
    Eigen::MatrixXcd g;
    if (left) {
        auto m = core.as_matrix(l * d, r);
        g = m.adjoint() * m;
    } else {
        auto m = core.as_matrix(l, d * r);
        g = m * m.adjoint();
    }
    return (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() <= tol;
}

namespace detail {

// Makes core k left-isometric and pushes the remainder into core k+1.
inline void left_qr_step(std::vector<DenseTensor> &cores, std::size_t k) {
    const std::size_t l = cores[k].dim(0), d = cores[k].dim(1), r = cores[k].dim(2);
    auto [q, rr] = thin_qr(cores[k].as_matrix(l * d, r));
    const std::size_t nb = static_cast<std::size_t>(q.cols());
    DenseTensor nq({l, d, nb});
    nq.as_matrix(l * d, nb) = q;
    cores[k] = std::move(nq);
    const std::size_t d2 = cores[k + 1].dim(1), r2 = cores[k + 1].dim(2);
    DenseTensor next({nb, d2, r2});
    next.as_matrix(nb, d2 * r2).noalias() = rr * cores[k + 1].as_matrix(r, d2 * r2);
    cores[k + 1] = std::move(next);
}

// Makes core k right-isometric and pushes the remainder into core k-1.
inline void right_qr_step(std::vector<DenseTensor> &cores, std::size_t k) {
    const std::size_t l = cores[k].dim(0), d = cores[k].dim(1), r = cores[k].dim(2);
    RowMatrixXcd mt = cores[k].as_matrix(l, d * r).adjoint();
    auto [q, rr] = thin_qr(mt);
    const std::size_t nb = static_cast<std::size_t>(q.cols());
    DenseTensor nq({nb, d, r});
    nq.as_matrix(nb, d * r) = q.adjoint();
    cores[k] = std::move(nq);
    const std::size_t l0 = cores[k - 1].dim(0), d0 = cores[k - 1].dim(1);
    DenseTensor prev({l0, d0, nb});
    prev.as_matrix(l0 * d0, nb).noalias() = cores[k - 1].as_matrix(l0 * d0, l) * rr.adjoint();
    cores[k - 1] = std::move(prev);
}

}  // namespace detail

/// Mixed-canonical form with the given center: cores left of it are left-isometric,
/// cores right of it are right-isometric.
inline Mps mps_canonicalize(const Mps &m, std::size_t center) {
    if (center >= m.size()) {
        throw std::invalid_argument("mps_canonicalize: center out of range");
    }
    auto cores = m.cores();
    for (std::size_t k = 0; k < center; k++) {
        detail::left_qr_step(cores, k);
    }
    for (std::size_t k = cores.size() - 1; k > center; k--) {
        detail::right_qr_step(cores, k);
    }
    return Mps(std::move(cores), center);
}

struct CompressResult {
    Mps mps;
    double discarded_weight = 0.0;           // sum of squared discarded singular values
    std::vector<std::vector<double>> kept;  // singular values kept at each internal cut
};

/// Left-canonicalizes, then sweeps right to left truncating each bond per `opts`.
/// Discarded weights accumulate from the state as it stands during the sweep.
inline CompressResult mps_compress(const Mps &m, const SvdOptions &opts) {
    const std::size_t n = m.size();
    auto cores = m.cores();
    if (!(m.canonical_center() && *m.canonical_center() == n - 1)) {
        for (std::size_t k = 0; k + 1 < n; k++) {
            detail::left_qr_step(cores, k);
        }
    }
    CompressResult out;
    out.kept.resize(n > 0 ? n - 1 : 0);
    for (std::size_t k = n - 1; k > 0; k--) {
        const std::size_t l = cores[k].dim(0), d = cores[k].dim(1), r = cores[k].dim(2);
        MatrixSvd f = matrix_svd(cores[k].as_matrix(l, d * r), opts);
        const std::size_t nb = f.s.size();
        for (double s : f.discarded) {
            out.discarded_weight += s * s;
        }
        DenseTensor v({nb, d, r});
        v.as_matrix(nb, d * r) = f.vh;
        cores[k] = std::move(v);
        Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(f.s.data(), static_cast<Eigen::Index>(nb));
        RowMatrixXcd us = f.u * s.asDiagonal();
        const std::size_t l0 = cores[k - 1].dim(0), d0 = cores[k - 1].dim(1);
        DenseTensor prev({l0, d0, nb});
        prev.as_matrix(l0 * d0, nb).noalias() = cores[k - 1].as_matrix(l0 * d0, l) * us;
        cores[k - 1] = std::move(prev);
        out.kept[k - 1] = std::move(f.s);
    }
    out.mps = Mps(std::move(cores), 0);
    return out;
}

struct SingularSpectrum {
    // cuts[k] holds the Schmidt values across the bond between sites k and k+1 (0-based).
    std::vector<std::vector<double>> cuts;
};

inline SingularSpectrum mps_singular_spectrum(const Mps &m) {
    CompressResult r = mps_compress(m, SvdOptions{});
    return SingularSpectrum{std::move(r.kept)};
}

struct TruncationResult {
    Mps mps;
    double discarded_weight = 0.0;
};

inline TruncationResult mps_truncate(const Mps &m, std::size_t max_bond) {
    if (max_bond == 0) {
        throw std::invalid_argument("mps_truncate: max bond must be positive");
    }
    CompressResult r = mps_compress(m, SvdOptions::bond(max_bond));
    return TruncationResult{std::move(r.mps), r.discarded_weight};
}

/// <a|b>, conjugating `a`.
inline cplx mps_inner(const Mps &a, const Mps &b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("mps_inner: length mismatch");
    }
    RowMatrixXcd env = RowMatrixXcd::Ones(1, 1);
    for (std::size_t k = 0; k < a.size(); k++) {
        const auto &ca = a.core(k);
        const auto &cb = b.core(k);
        if (ca.dim(1) != cb.dim(1)) {
            throw std::invalid_argument("mps_inner: physical dimension mismatch at site " + std::to_string(k));
        }
        const std::size_t la = ca.dim(0), ra = ca.dim(2), lb = cb.dim(0), rb = cb.dim(2), d = ca.dim(1);
        RowMatrixXcd next = RowMatrixXcd::Zero(static_cast<Eigen::Index>(ra), static_cast<Eigen::Index>(rb));
        // env (la x lb) -> sum_p A_p^dagger env B_p
        RowMatrixXcd eb = env * cb.as_matrix(lb, d * rb);  // la x (d rb)
        for (std::size_t p = 0; p < d; p++) {
            Eigen::Map<const RowMatrixXcd, 0, Eigen::OuterStride<>> ap(
                ca.data().data() + p * ra, static_cast<Eigen::Index>(la), static_cast<Eigen::Index>(ra),
                Eigen::OuterStride<>(static_cast<Eigen::Index>(d * ra)));
            Eigen::Map<const RowMatrixXcd, 0, Eigen::OuterStride<>> ebp(
                eb.data() + p * rb, static_cast<Eigen::Index>(la), static_cast<Eigen::Index>(rb),
                Eigen::OuterStride<>(static_cast<Eigen::Index>(d * rb)));
            next.noalias() += ap.adjoint() * ebp;
        }
        env = std::move(next);
    }
    return env(0, 0);
}

inline double mps_norm(const Mps &m) {
    return std::sqrt(std::max(0.0, mps_inner(m, m).real()));
}

/// Direct sum of the two states' cores; the bond grows to the sum.
inline Mps mps_add(const Mps &a, const Mps &b) {
    const std::size_t n = a.size();
    if (b.size() != n) {
        throw std::invalid_argument("mps_add: length mismatch");
    }
    if (n == 1) {
        DenseTensor c({1, a.physical_dim(0), 1});
        for (std::size_t p = 0; p < a.physical_dim(0); p++) {
            c({0, p, 0}) = a.core(0)({0, p, 0}) + b.core(0)({0, p, 0});
        }
        return Mps({c});
    }
    std::vector<DenseTensor> cores;
    for (std::size_t k = 0; k < n; k++) {
        const auto &ca = a.core(k);
        const auto &cb = b.core(k);
        const std::size_t d = ca.dim(1);
        if (cb.dim(1) != d) {
            throw std::invalid_argument("mps_add: physical dimension mismatch at site " + std::to_string(k));
        }
        const std::size_t la = ca.dim(0), ra = ca.dim(2), lb = cb.dim(0), rb = cb.dim(2);
        const std::size_t l = (k == 0) ? 1 : la + lb;
        const std::size_t r = (k == n - 1) ? 1 : ra + rb;
        DenseTensor c({l, d, r});
        const std::size_t lo_b = (k == 0) ? 0 : la;
        const std::size_t ro_b = (k == n - 1) ? 0 : ra;
        for (std::size_t i = 0; i < la; i++)
            for (std::size_t p = 0; p < d; p++)
                for (std::size_t j = 0; j < ra; j++) c({i, p, j}) = ca({i, p, j});
        for (std::size_t i = 0; i < lb; i++)
            for (std::size_t p = 0; p < d; p++)
                for (std::size_t j = 0; j < rb; j++) c({lo_b + i, p, ro_b + j}) += cb({i, p, j});
        cores.push_back(std::move(c));
    }
    return Mps(std::move(cores));
}

}  // namespace vqtn

#endif
