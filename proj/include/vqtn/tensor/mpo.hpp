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

#ifndef VQTN_TENSOR_MPO_HPP
#define VQTN_TENSOR_MPO_HPP

#include "vqtn/tensor/mps.hpp"

namespace vqtn {

/// Matrix product operator. Core k has shape (left bond, out, in, right bond).
class Mpo {
   public:
    Mpo() = default;

    explicit Mpo(std::vector<DenseTensor> cores) : cores_(std::move(cores)) {
        if (cores_.empty()) {
            throw std::invalid_argument("Mpo: at least one core is required");
        }
        for (std::size_t k = 0; k < cores_.size(); k++) {
            if (cores_[k].rank() != 4) {
                throw std::invalid_argument("Mpo: core " + std::to_string(k) + " is not rank 4");
            }
            if (k > 0 && cores_[k - 1].dim(3) != cores_[k].dim(0)) {
                throw std::invalid_argument("Mpo: bond mismatch between cores " + std::to_string(k - 1) + " and " +
                                            std::to_string(k));
            }
        }
        if (cores_.front().dim(0) != 1 || cores_.back().dim(3) != 1) {
            throw std::invalid_argument("Mpo: boundary bonds must be 1");
        }
    }

    /// Tensor product of single-site operators.
    static Mpo product(const std::vector<Eigen::MatrixXcd> &ops) {
        std::vector<DenseTensor> cores;
        for (const auto &op : ops) {
            const std::size_t o = static_cast<std::size_t>(op.rows()), i = static_cast<std::size_t>(op.cols());
            DenseTensor c({1, o, i, 1});
            c.as_matrix(o, i) = op;
            cores.push_back(std::move(c));
        }
        return Mpo(std::move(cores));
    }

    static Mpo identity(const std::vector<std::size_t> &dims) {
        std::vector<Eigen::MatrixXcd> ops;
        for (auto d : dims) {
            ops.push_back(Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
        }
        return product(ops);
    }

    /// Decomposes a dense operator (row index = out multi-index, column = in multi-index).
    static Mpo from_dense(const Eigen::Ref<const Eigen::MatrixXcd> &op, const std::vector<std::size_t> &out_dims,
                          const std::vector<std::size_t> &in_dims, const SvdOptions &opts = SvdOptions::exact()) {
        const std::size_t n = out_dims.size();
        if (in_dims.size() != n || static_cast<std::size_t>(op.rows()) != shape_volume(out_dims) ||
            static_cast<std::size_t>(op.cols()) != shape_volume(in_dims)) {
            throw std::invalid_argument("Mpo::from_dense: dimensions do not match operator");
        }
        // Interleave (o_1..o_n, i_1..i_n) -> (o_1 i_1, ..., o_n i_n).
        Shape shape = out_dims;
        shape.insert(shape.end(), in_dims.begin(), in_dims.end());
        DenseTensor t(shape);
        t.as_matrix(static_cast<std::size_t>(op.rows()), static_cast<std::size_t>(op.cols())) = op;
        std::vector<std::size_t> perm;
        std::vector<std::size_t> fused;
        for (std::size_t k = 0; k < n; k++) {
            perm.push_back(k);
            perm.push_back(n + k);
            fused.push_back(out_dims[k] * in_dims[k]);
        }
        DenseTensor inter = t.permuted(perm);
        Mps m = Mps::from_dense(inter.data(), fused, opts);
        return from_mps(m, out_dims, in_dims);
    }

    /// Regroups a vectorized operator (physical index = out * in_dim + in) as an Mpo.
    static Mpo from_mps(const Mps &m, const std::vector<std::size_t> &out_dims, const std::vector<std::size_t> &in_dims) {
        std::vector<DenseTensor> cores;
        for (std::size_t k = 0; k < m.size(); k++) {
            const auto &c = m.core(k);
            if (c.dim(1) != out_dims.at(k) * in_dims.at(k)) {
                throw std::invalid_argument("Mpo::from_mps: physical dimension mismatch");
            }
            cores.push_back(c.reshaped({c.dim(0), out_dims[k], in_dims[k], c.dim(2)}));
        }
        return Mpo(std::move(cores));
    }

    Mps as_mps() const {
        std::vector<DenseTensor> cores;
        for (const auto &c : cores_) {
            cores.push_back(c.reshaped({c.dim(0), c.dim(1) * c.dim(2), c.dim(3)}));
        }
        return Mps(std::move(cores));
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
    std::size_t out_dim(std::size_t k) const {
        return cores_.at(k).dim(1);
    }
    std::size_t in_dim(std::size_t k) const {
        return cores_.at(k).dim(2);
    }
    std::vector<std::size_t> out_dims() const {
        std::vector<std::size_t> v;
        for (const auto &c : cores_) v.push_back(c.dim(1));
        return v;
    }
    std::vector<std::size_t> in_dims() const {
        std::vector<std::size_t> v;
        for (const auto &c : cores_) v.push_back(c.dim(2));
        return v;
    }
    std::vector<std::size_t> bond_dims() const {
        std::vector<std::size_t> out{1};
        for (const auto &c : cores_) {
            out.push_back(c.dim(3));
        }
        return out;
    }
    std::size_t max_bond() const {
        auto b = bond_dims();
        return *std::max_element(b.begin(), b.end());
    }

    /// Conjugate transpose of the operator.
    Mpo adjoint() const {
        std::vector<DenseTensor> cores;
        for (const auto &c : cores_) {
            cores.push_back(c.permuted({0, 2, 1, 3}).conj());
        }
        return Mpo(std::move(cores));
    }

    Mpo transpose() const {
        std::vector<DenseTensor> cores;
        for (const auto &c : cores_) {
            cores.push_back(c.permuted({0, 2, 1, 3}));
        }
        return Mpo(std::move(cores));
    }

    Mpo scaled(cplx factor) const {
        auto cores = cores_;
        cores[0] = cores[0].scaled(factor);
        return Mpo(std::move(cores));
    }

    /// Dense matrix, site 0 being the most significant digit of both indices.
    Eigen::MatrixXcd to_dense() const {
        Mps m = as_mps();
        std::vector<cplx> v = m.to_dense();
        const auto od = out_dims(), id = in_dims();
        const std::size_t n = cores_.size();
        Shape inter;
        for (std::size_t k = 0; k < n; k++) {
            inter.push_back(od[k]);
            inter.push_back(id[k]);
        }
        DenseTensor t(inter, std::move(v));
        std::vector<std::size_t> perm;
        for (std::size_t k = 0; k < n; k++) perm.push_back(2 * k);
        for (std::size_t k = 0; k < n; k++) perm.push_back(2 * k + 1);
        DenseTensor p = t.permuted(perm);
        const std::size_t rows = shape_volume(od), cols = shape_volume(id);
        return Eigen::MatrixXcd(p.as_matrix(rows, cols));
    }

   private:
    std::vector<DenseTensor> cores_;
};

/// Operator product a * b (b acts first). Bonds multiply.
inline Mpo mpo_compose(const Mpo &a, const Mpo &b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("mpo_compose: length mismatch");
    }
    std::vector<DenseTensor> cores;
    for (std::size_t k = 0; k < a.size(); k++) {
        const auto &ca = a.core(k);
        const auto &cb = b.core(k);
        if (ca.dim(2) != cb.dim(1)) {
            throw std::invalid_argument("mpo_compose: inner dimension mismatch at site " + std::to_string(k));
        }
        // (la, o, m, ra) x (lb, m, i, rb) -> (la, o, ra, lb, i, rb)
        DenseTensor t = contract(ca, {2}, cb, {1});
        DenseTensor p = t.permuted({0, 3, 1, 4, 2, 5});
        cores.push_back(std::move(p).reshaped(
            {ca.dim(0) * cb.dim(0), ca.dim(1), cb.dim(2), ca.dim(3) * cb.dim(3)}));
    }
    return Mpo(std::move(cores));
}

/// Tensor product: the sites of `a` followed by the sites of `b`.
inline Mpo mpo_concat(const Mpo &a, const Mpo &b) {
    auto cores = a.cores();
    cores.insert(cores.end(), b.cores().begin(), b.cores().end());
    return Mpo(std::move(cores));
}

inline Mps mpo_apply(const Mpo &o, const Mps &m) {
    if (o.size() != m.size()) {
        throw std::invalid_argument("mpo_apply: length mismatch");
    }
    std::vector<DenseTensor> cores;
    for (std::size_t k = 0; k < o.size(); k++) {
        const auto &co = o.core(k);
        const auto &cm = m.core(k);
        if (co.dim(2) != cm.dim(1)) {
            throw std::invalid_argument("mpo_apply: physical dimension mismatch at site " + std::to_string(k));
        }
        // (lo, o, i, ro) x (lm, i, rm) -> (lo, o, ro, lm, rm)
        DenseTensor t = contract(co, {2}, cm, {1});
        DenseTensor p = t.permuted({0, 3, 1, 2, 4});
        cores.push_back(std::move(p).reshaped({co.dim(0) * cm.dim(0), co.dim(1), co.dim(3) * cm.dim(2)}));
    }
    return Mps(std::move(cores));
}

inline Mpo mpo_compress(const Mpo &o, const SvdOptions &opts = SvdOptions::exact()) {
    CompressResult r = mps_compress(o.as_mps(), opts);
    return Mpo::from_mps(r.mps, o.out_dims(), o.in_dims());
}

}  // namespace vqtn

#endif
