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

#ifndef VQTN_COEFFS_BUILDER_HPP
#define VQTN_COEFFS_BUILDER_HPP

#include "vqtn/circuits.hpp"
#include "vqtn/coeffs/coefficient_mps.hpp"
#include "vqtn/coeffs/fixed_tensors.hpp"

namespace vqtn::coeffs {

using circuits::CircuitSpec;
using circuits::DenseOperator;

/// Elementwise product of two operators with matching physical dimensions; bonds multiply.
inline Mpo hadamard_product_mpo(const Mpo &a, const Mpo &b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("hadamard_product_mpo: length mismatch");
    }
    std::vector<DenseTensor> cores;
    for (std::size_t k = 0; k < a.size(); k++) {
        const auto &ca = a.core(k);
        const auto &cb = b.core(k);
        const std::size_t o = ca.dim(1), i = ca.dim(2);
        if (cb.dim(1) != o || cb.dim(2) != i) {
            throw std::invalid_argument("hadamard_product_mpo: physical dimension mismatch at site " + std::to_string(k));
        }
        const std::size_t la = ca.dim(0), ra = ca.dim(3), lb = cb.dim(0), rb = cb.dim(3);
        DenseTensor c({la * lb, o, i, ra * rb});
        for (std::size_t a1 = 0; a1 < la; a1++)
            for (std::size_t b1 = 0; b1 < lb; b1++)
                for (std::size_t p = 0; p < o; p++)
                    for (std::size_t q = 0; q < i; q++)
                        for (std::size_t a2 = 0; a2 < ra; a2++)
                            for (std::size_t b2 = 0; b2 < rb; b2++)
                                c({a1 * lb + b1, p, q, a2 * rb + b2}) = ca({a1, p, q, a2}) * cb({b1, p, q, b2});
        cores.push_back(std::move(c));
    }
    return Mpo(std::move(cores));
}

/// Operators A and B with f(x) = <S(x)| A (.) B^T |S(x)> over all N encoding gates.
/// For a simple parallel model these are O' and rho'. For re-uploading the chain of block
/// channels is bent into register-pair pieces.
template <typename Op>
struct ParallelForm {
    Op observable_part;
    Op state_part;
    circuits::EncodingMap encoding;
};

enum class Backend { Auto, Mpo, Dense };

struct BuildOptions {
    Backend backend = Backend::Auto;
    double cutoff = 1e-12;            // relative recompression threshold
    std::size_t dense_max_n = 12;     // largest N handled by the dense route
    std::size_t mpo_bond_budget = 1024;  // largest estimated Hadamard bond for the MPO route in Auto mode
};

namespace detail {

// Pair piece for block j: entry [(a_j a_{j+1}), (b_j b_{j+1})] = Phi_j[(b_{j+1}, a_{j+1}), (b_j, a_j)].
inline Eigen::MatrixXcd pair_piece(const CircuitSpec &spec, std::size_t block) {
    const Eigen::MatrixXcd phi = circuits::block_channel_dense(spec, block);
    const std::size_t d = std::size_t{1} << spec.n_qubits;
    Eigen::MatrixXcd pair(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(d * d));
    for (std::size_t aj = 0; aj < d; aj++)
        for (std::size_t an = 0; an < d; an++)
            for (std::size_t bj = 0; bj < d; bj++)
                for (std::size_t bn = 0; bn < d; bn++)
                    pair(static_cast<Eigen::Index>(aj * d + an), static_cast<Eigen::Index>(bj * d + bn)) =
                        phi(static_cast<Eigen::Index>(bn * d + an), static_cast<Eigen::Index>(bj * d + aj));
    return pair;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++)
        for (Eigen::Index j = 0; j < a.cols(); j++) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Register layout of the bent chain. A holds pair pieces of odd blocks (1-based), B^T holds
// rho'^T on register 1 and pieces of even blocks; O' sits in A when R is odd, in B^T otherwise.
struct ChainLayout {
    struct Piece {
        enum Kind { Rho, Observable, Pair } kind;
        std::size_t block;  // trainable block index for pair pieces
    };
    std::vector<Piece> a, bt;
};

inline ChainLayout chain_layout(std::size_t r) {
    ChainLayout lay;
    lay.bt.push_back({ChainLayout::Piece::Rho, 0});
    for (std::size_t j = 1; j < r; j++) {
        (j % 2 == 1 ? lay.a : lay.bt).push_back({ChainLayout::Piece::Pair, j});
    }
    (r % 2 == 1 ? lay.a : lay.bt).push_back({ChainLayout::Piece::Observable, r});
    return lay;
}

}  // namespace detail

/// Parallel form with operators stored as Mpo (sites = encoding gates).
inline ParallelForm<Mpo> parallel_form_mpo(const CircuitSpec &spec, const SvdOptions &opts = SvdOptions::exact()) {
    spec.validate();
    if (spec.structure == circuits::Structure::SimpleParallel) {
        return {circuits::evolve_observable(spec, opts), circuits::build_rho(spec, opts), spec.encoding};
    }
    const std::size_t r = spec.encoding_blocks();
    const std::size_t nq = spec.n_qubits;
    const std::vector<std::size_t> two(2 * nq, 2);
    auto piece = [&](const detail::ChainLayout::Piece &p) {
        switch (p.kind) {
            case detail::ChainLayout::Piece::Rho:
                return circuits::build_rho(spec, opts).transpose();
            case detail::ChainLayout::Piece::Observable:
                return circuits::evolve_observable(spec, opts);
            case detail::ChainLayout::Piece::Pair:
            default:
                return Mpo::from_dense(detail::pair_piece(spec, p.block), two, two, opts);
        }
    };
    const auto layout = detail::chain_layout(r);
    auto assemble = [&](const std::vector<detail::ChainLayout::Piece> &ps) {
        Mpo acc = piece(ps.front());
        for (std::size_t k = 1; k < ps.size(); k++) acc = mpo_concat(acc, piece(ps[k]));
        return acc;
    };
    Mpo a = assemble(layout.a);
    Mpo bt = assemble(layout.bt);
    return {a, bt.transpose(), spec.encoding};
}

/// Parallel form with dense operators on all N encoding qubits.
inline ParallelForm<DenseOperator> parallel_form_dense(const CircuitSpec &spec) {
    spec.validate();
    if (spec.structure == circuits::Structure::SimpleParallel) {
        return {circuits::evolve_observable_dense(spec), circuits::build_rho_dense(spec), spec.encoding};
    }
    const std::size_t r = spec.encoding_blocks();
    auto piece = [&](const detail::ChainLayout::Piece &p) -> Eigen::MatrixXcd {
        switch (p.kind) {
            case detail::ChainLayout::Piece::Rho:
                return circuits::build_rho_dense(spec).to_matrix().transpose();
            case detail::ChainLayout::Piece::Observable:
                return circuits::evolve_observable_dense(spec).to_matrix();
            case detail::ChainLayout::Piece::Pair:
            default:
                return detail::pair_piece(spec, p.block);
        }
    };
    auto layout = detail::chain_layout(r);
    auto assemble = [&](const std::vector<detail::ChainLayout::Piece> &ps) {
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Ones(1, 1);
        for (const auto &p : ps) acc = detail::kron(acc, piece(p));
        return acc;
    };
    Eigen::MatrixXcd a = assemble(layout.a);
    Eigen::MatrixXcd bt = assemble(layout.bt);
    return {DenseOperator::from_matrix(a), DenseOperator::from_matrix(bt.transpose()), spec.encoding};
}

/// Site-local contraction of M with R Q: (l, 2, 2, r) cores -> (l, 3, r) cores.
inline Mps coefficient_from_operator(const Mpo &m) {
    const Mat43 rq = tensor_rq();
    std::vector<DenseTensor> cores;
    for (const auto &c : m.cores()) {
        if (c.dim(1) != 2 || c.dim(2) != 2) {
            throw std::invalid_argument("coefficient_from_operator: qubit sites expected");
        }
        const std::size_t l = c.dim(0), r = c.dim(3);
        DenseTensor out({l, 3, r});
        for (std::size_t a = 0; a < l; a++)
            for (std::size_t t = 0; t < 3; t++)
                for (std::size_t b = 0; b < r; b++) {
                    cplx s = 0.0;
                    for (std::size_t u = 0; u < 4; u++) s += c({a, u / 2, u % 2, b}) * rq(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(t));
                    out({a, t, b}) = s;
                }
        cores.push_back(std::move(out));
    }
    return Mps(std::move(cores));
}

/// Dense C^q from A and B: C_t = sum_{a,b} A_ab B_ba prod_s RQ[(a_s, b_s), t_s]. Length 3^N.
inline std::vector<cplx> dense_coefficients(const DenseOperator &a, const DenseOperator &b) {
    const std::size_t n = a.qubits();
    if (b.qubits() != n) {
        throw std::invalid_argument("dense_coefficients: size mismatch");
    }
    const std::size_t d = a.dim();
    // Spread the bits of an n-bit index to the even positions of a 2n-bit index.
    std::vector<std::size_t> spread(d, 0);
    for (std::size_t x = 0; x < d; x++) {
        std::size_t s = 0;
        for (std::size_t q = 0; q < n; q++)
            if (x & (std::size_t{1} << q)) s |= std::size_t{1} << (2 * q);
        spread[x] = s;
    }
    std::vector<cplx> cur(d * d);
    const auto &ad = a.data();
    const auto &bd = b.data();
    for (std::size_t r = 0; r < d; r++) {
        const std::size_t sr = spread[r] << 1;
        for (std::size_t c = 0; c < d; c++) {
            cur[sr | spread[c]] = ad[r * d + c] * bd[c * d + r];
        }
    }
    // cur has shape (4, 4, ..., 4); convert one axis at a time to 3.
    const Mat43 rq = tensor_rq();
    std::size_t pre = 1, post = d * d / 4;
    for (std::size_t s = 0; s < n; s++) {
        std::vector<cplx> next(pre * 3 * post);
        for (std::size_t i = 0; i < pre; i++) {
            for (std::size_t t = 0; t < 3; t++) {
                cplx *dst = &next[(i * 3 + t) * post];
                for (std::size_t u = 0; u < 4; u++) {
                    const cplx w = rq(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(t));
                    if (w == cplx(0.0, 0.0)) continue;
                    const cplx *src = &cur[(i * 4 + u) * post];
                    for (std::size_t j = 0; j < post; j++) dst[j] += w * src[j];
                }
            }
        }
        cur = std::move(next);
        pre *= 3;
        post /= 4;
    }
    return cur;
}

inline Mps dense_to_real_mps(const std::vector<cplx> &c, std::size_t n, double cutoff, double rel_tol = 1e-10) {
    double re = 0.0, im = 0.0;
    std::vector<cplx> real(c.size());
    for (std::size_t k = 0; k < c.size(); k++) {
        re = std::max(re, std::abs(c[k].real()));
        im = std::max(im, std::abs(c[k].imag()));
        real[k] = cplx(c[k].real(), 0.0);
    }
    // Floor of 1 on the reference scale: observables have unit norm, and strong noise can shrink
    // every coefficient toward the rounding level of the contraction.
    if (im > rel_tol * std::max(re, 1.0)) {
        std::ostringstream msg;
        msg << "coefficient tensor is not real: max |Im| = " << std::scientific << im << ", max |Re| = " << re;
        throw NumericalError(msg.str());
    }
    return Mps::from_dense(real, std::vector<std::size_t>(n, 3), SvdOptions::exact(cutoff));
}

/// Estimated largest bond of O' (.) rho^T before recompression.
inline double estimated_product_bond(const CircuitSpec &spec) {
    const double half = std::floor(static_cast<double>(spec.n_encoding()) / 2.0);
    if (spec.structure == circuits::Structure::SimpleParallel) {
        const double lo = std::min(half, static_cast<double>(spec.layers.back()));
        const double lr = std::min(half, static_cast<double>(spec.layers.front()));
        return std::pow(4.0, lo + lr);
    }
    return std::pow(16.0, static_cast<double>(spec.n_qubits));
}

inline Backend choose_backend(const CircuitSpec &spec, const BuildOptions &opts) {
    if (opts.backend != Backend::Auto) return opts.backend;
    if (spec.n_encoding() <= opts.dense_max_n && estimated_product_bond(spec) > static_cast<double>(opts.mpo_bond_budget)) {
        return Backend::Dense;
    }
    return Backend::Mpo;
}

/// C^q of a circuit: f(x) = C^q . T(x) with T(x) = (x)_alpha (1, cos phi_alpha, sin phi_alpha).
inline CoefficientMps to_coefficient_mps(const CircuitSpec &spec, const BuildOptions &opts = {}) {
    spec.validate();
    const Backend backend = choose_backend(spec, opts);
    const SvdOptions svd = SvdOptions::exact(opts.cutoff);
    Mps c;
    std::string route;
    if (backend == Backend::Dense) {
        if (spec.n_encoding() > circuits::kMaxDenseOperatorQubits) {
            throw ResourceLimitError("dense coefficient route supports at most " +
                                     std::to_string(circuits::kMaxDenseOperatorQubits) + " encoding gates");
        }
        auto form = parallel_form_dense(spec);
        c = dense_to_real_mps(dense_coefficients(form.observable_part, form.state_part), spec.n_encoding(), opts.cutoff);
        route = "dense";
    } else {
        auto form = parallel_form_mpo(spec, svd);
        Mpo m = hadamard_product_mpo(form.observable_part, form.state_part.transpose());
        c = realify(coefficient_from_operator(m), 1e-10, svd);
        route = "mpo";
    }
    Origin origin{OriginKind::FromCircuit, {{"circuit", spec.to_json()}, {"route", route}}};
    return CoefficientMps(std::move(c), std::move(origin));
}

/// Tr(sigma_i M) for a Pauli multi-index i in {0, 1, 2, 3}^N.
inline cplx pauli_coefficient(const Mpo &m, std::span<const int> index) {
    if (index.size() != m.size()) {
        throw std::invalid_argument("pauli_coefficient: index length mismatch");
    }
    RowMatrixXcd env = RowMatrixXcd::Ones(1, 1);
    for (std::size_t k = 0; k < m.size(); k++) {
        const auto &c = m.core(k);
        const circuits::Mat2 s = circuits::pauli(index[k]);
        const std::size_t l = c.dim(0), r = c.dim(3);
        RowMatrixXcd t = RowMatrixXcd::Zero(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(r));
        for (std::size_t a = 0; a < l; a++)
            for (std::size_t b = 0; b < r; b++)
                for (std::size_t o = 0; o < 2; o++)
                    for (std::size_t i = 0; i < 2; i++) t(a, b) += s(i, o) * c({a, o, i, b});
        env = env * t;
    }
    return env(0, 0);
}

/// Entry of C^q at a multi-index in {0, 1, 2}^N; equals 2^N lambda_i of the Pauli expansion.
inline double pauli_coefficient(const CoefficientMps &c, std::span<const int> index) {
    return c.entry(index);
}

/// C = sum_j w_j (sigma_{i_j} . R Q). Each term is a product with site vectors 2 e_{i}.
inline CoefficientMps sparse_pauli_coefficient_mps(const std::vector<std::vector<int>> &indices,
                                                    const std::vector<double> &weights) {
    if (indices.empty() || indices.size() != weights.size()) {
        throw ConfigError("sparse_pauli_coefficient_mps: need matching non-empty index and weight lists");
    }
    const std::size_t n = indices.front().size();
    std::vector<std::vector<int>> sorted = indices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw ConfigError("sparse_pauli_coefficient_mps: duplicate Pauli index");
    }
    std::optional<Mps> acc;
    for (std::size_t j = 0; j < indices.size(); j++) {
        if (indices[j].size() != n) throw ConfigError("sparse_pauli_coefficient_mps: ragged index list");
        std::vector<std::vector<cplx>> sites;
        for (std::size_t k = 0; k < n; k++) {
            const int i = indices[j][k];
            if (i < 0 || i > 2) throw ConfigError("sparse_pauli_coefficient_mps: indices must lie in {0, 1, 2}");
            std::vector<cplx> v(3, 0.0);
            v[static_cast<std::size_t>(i)] = (k == 0) ? 2.0 * weights[j] : 2.0;
            sites.push_back(v);
        }
        Mps term = Mps::product(sites);
        acc = acc ? mps_add(*acc, term) : term;
    }
    nlohmann::json detail{{"indices", indices}, {"weights", weights}};
    return CoefficientMps(*acc, Origin{OriginKind::SparsePauli, detail});
}

}  // namespace vqtn::coeffs

#endif
