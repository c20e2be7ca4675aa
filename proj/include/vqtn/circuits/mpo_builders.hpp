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

#ifndef VQTN_CIRCUITS_MPO_BUILDERS_HPP
#define VQTN_CIRCUITS_MPO_BUILDERS_HPP

#include "vqtn/circuits/gate_sequence.hpp"
#include "vqtn/tensor.hpp"

namespace vqtn::circuits {

// Operators on one qubit are vectorized row-major: the pair (row, col) becomes 2 row + col.
// A superoperator then acts on that 4-dimensional index.

/// A -> g A g^dagger on one qubit.
inline Eigen::MatrixXcd superop_1q(const Mat2 &g) {
    Eigen::MatrixXcd s(4, 4);
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++)
            for (int k = 0; k < 2; k++)
                for (int l = 0; l < 2; l++) s(2 * i + j, 2 * k + l) = g(i, k) * std::conj(g(j, l));
    return s;
}

/// A -> g A g^dagger on an adjacent pair; rows and columns index (fused site 1, fused site 2).
inline Eigen::MatrixXcd superop_2q(const Mat4 &g) {
    Eigen::MatrixXcd s(16, 16);
    for (int i1 = 0; i1 < 2; i1++)
        for (int j1 = 0; j1 < 2; j1++)
            for (int i2 = 0; i2 < 2; i2++)
                for (int j2 = 0; j2 < 2; j2++)
                    for (int k1 = 0; k1 < 2; k1++)
                        for (int l1 = 0; l1 < 2; l1++)
                            for (int k2 = 0; k2 < 2; k2++)
                                for (int l2 = 0; l2 < 2; l2++)
                                    s(4 * (2 * i1 + j1) + 2 * i2 + j2, 4 * (2 * k1 + l1) + 2 * k2 + l2) =
                                        g(2 * i1 + i2, 2 * k1 + k2) * std::conj(g(2 * j1 + j2, 2 * l1 + l2));
    return s;
}

/// Two-qubit depolarizing channel (1 - gamma) A + gamma / 4 Tr_pair(A) x I, vectorized.
inline Eigen::MatrixXcd depolarizing_superop(double gamma) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(4);
    e(0) = e(3) = 1.0;
    Eigen::VectorXcd ee(16);
    for (int a = 0; a < 4; a++)
        for (int b = 0; b < 4; b++) ee(4 * a + b) = e(a) * e(b);
    return (1.0 - gamma) * Eigen::MatrixXcd::Identity(16, 16) + (gamma / 4.0) * ee * ee.transpose();
}

/// Applies a single-site operator to the physical index of core k.
inline void apply_site_op(std::vector<DenseTensor> &cores, std::size_t k, const Eigen::MatrixXcd &op) {
    const std::size_t l = cores[k].dim(0), d = cores[k].dim(1), r = cores[k].dim(2);
    DenseTensor out({l, d, r});
    for (std::size_t a = 0; a < l; a++) {
        Eigen::Map<const RowMatrixXcd> in(cores[k].data().data() + a * d * r, d, r);
        Eigen::Map<RowMatrixXcd> o(out.data().data() + a * d * r, d, r);
        o.noalias() = op * in;
    }
    cores[k] = std::move(out);
}

/// Applies an operator on the physical indices of cores k and k+1 and splits the result by SVD.
inline void apply_pair_op(std::vector<DenseTensor> &cores, std::size_t k, const Eigen::MatrixXcd &op,
                          const SvdOptions &opts) {
    const std::size_t l = cores[k].dim(0), d1 = cores[k].dim(1), m = cores[k].dim(2);
    const std::size_t d2 = cores[k + 1].dim(1), r = cores[k + 1].dim(2);
    RowMatrixXcd two = cores[k].as_matrix(l * d1, m) * cores[k + 1].as_matrix(m, d2 * r);  // (l d1) x (d2 r)
    // Bring to (d1 d2) x (l r) for the operator, then back to (l d1) x (d2 r).
    RowMatrixXcd t(d1 * d2, l * r);
    for (std::size_t a = 0; a < l; a++)
        for (std::size_t p = 0; p < d1; p++)
            for (std::size_t q = 0; q < d2; q++)
                for (std::size_t b = 0; b < r; b++) t(p * d2 + q, a * r + b) = two(a * d1 + p, q * r + b);
    RowMatrixXcd u = op * t;
    for (std::size_t a = 0; a < l; a++)
        for (std::size_t p = 0; p < d1; p++)
            for (std::size_t q = 0; q < d2; q++)
                for (std::size_t b = 0; b < r; b++) two(a * d1 + p, q * r + b) = u(p * d2 + q, a * r + b);
    MatrixSvd f = matrix_svd(two, opts);
    const std::size_t nb = f.s.size();
    DenseTensor left({l, d1, nb});
    left.as_matrix(l * d1, nb) = f.u;
    DenseTensor right({nb, d2, r});
    Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(f.s.data(), static_cast<Eigen::Index>(nb));
    right.as_matrix(nb, d2 * r) = s.asDiagonal() * f.vh;
    cores[k] = std::move(left);
    cores[k + 1] = std::move(right);
}

/// Evolves a vectorized operator through a gate sequence. Forward: rho -> U rho U^dagger.
/// Heisenberg: O -> U^dagger O U, gates taken in reverse order. Recompresses after each layer.
inline Mps evolve_vectorized(Mps v, const std::vector<GateSequence> &layers, bool heisenberg,
                             const SvdOptions &opts = SvdOptions::exact()) {
    auto run_gate = [&](std::vector<DenseTensor> &cores, const Gate &g) {
        switch (g.kind) {
            case Gate::Kind::Unitary:
                apply_site_op(cores, g.q0, superop_1q(heisenberg ? Mat2(g.matrix.adjoint()) : g.matrix));
                break;
            case Gate::Kind::Cnot:
                if (g.q1 != g.q0 + 1) throw std::logic_error("evolve_vectorized: only nearest-neighbour CNOT");
                apply_pair_op(cores, g.q0, superop_2q(cnot()), opts);
                break;
            case Gate::Kind::Depolarize:
                if (g.q1 != g.q0 + 1) throw std::logic_error("evolve_vectorized: only nearest-neighbour noise");
                apply_pair_op(cores, g.q0, depolarizing_superop(g.gamma), opts);
                break;
        }
    };
    auto step = [&](const GateSequence &layer) {
        std::vector<DenseTensor> cores = v.cores();
        if (heisenberg) {
            for (auto it = layer.rbegin(); it != layer.rend(); ++it) run_gate(cores, *it);
        } else {
            for (const auto &g : layer) run_gate(cores, g);
        }
        v = mps_compress(Mps(std::move(cores)), opts).mps;
    };
    if (heisenberg) {
        for (auto it = layers.rbegin(); it != layers.rend(); ++it) step(*it);
    } else {
        for (const auto &l : layers) step(l);
    }
    return v;
}

/// Product MPS of a vectorized Pauli string.
inline Mps vectorize_pauli(const PauliString &p) {
    std::vector<std::vector<cplx>> sites;
    for (std::size_t q = 0; q < p.size(); q++) {
        Mat2 m = p.matrix(q);
        sites.push_back({m(0, 0), m(0, 1), m(1, 0), m(1, 1)});
    }
    return Mps::product(sites);
}

inline Mpo unvectorize(const Mps &v) {
    std::vector<std::size_t> two(v.size(), 2);
    return Mpo::from_mps(v, two, two);
}

/// O' = W^dagger O W for the last trainable block (adjoint channel when noisy).
inline Mpo evolve_observable(const CircuitSpec &spec, const SvdOptions &opts = SvdOptions::exact()) {
    spec.validate();
    const auto layers = trainable_layers(spec, spec.blocks() - 1);
    return unvectorize(evolve_vectorized(vectorize_pauli(spec.observable), layers, true, opts));
}

/// rho' = W |0><0| W^dagger for the first trainable block (noisy channel when gamma > 0).
inline Mpo build_rho(const CircuitSpec &spec, const SvdOptions &opts = SvdOptions::exact()) {
    spec.validate();
    const auto layers = trainable_layers(spec, 0);
    std::vector<std::vector<cplx>> sites(spec.n_qubits, std::vector<cplx>{1.0, 0.0, 0.0, 0.0});
    return unvectorize(evolve_vectorized(Mps::product(sites), layers, false, opts));
}

/// Operator representation of a trainable block. For gamma == 0 the unitary W (physical
/// dimension 2); otherwise the superoperator of the channel on vectorized operators (dimension 4).
inline Mpo build_trainable_mpo(std::size_t n, std::size_t n_layers, std::span<const double> theta, double gamma,
                               Ansatz ansatz = Ansatz::HardwareEfficient,
                               const SvdOptions &opts = SvdOptions::exact()) {
    const auto layers = trainable_layers(n, n_layers, theta, gamma, ansatz);
    const std::size_t d = gamma > 0.0 ? 4 : 2;
    // Left multiplication acts on the "out" half of each fused (out, in) index.
    auto lift1 = [&](const Eigen::MatrixXcd &g) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(d * d));
        for (std::size_t o = 0; o < d; o++)
            for (std::size_t oo = 0; oo < d; oo++)
                for (std::size_t i = 0; i < d; i++) m(o * d + i, oo * d + i) = g(o, oo);
        return m;
    };
    auto lift2 = [&](const Eigen::MatrixXcd &g) {
        const std::size_t dd = d * d;
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dd * dd), static_cast<Eigen::Index>(dd * dd));
        for (std::size_t o1 = 0; o1 < d; o1++)
            for (std::size_t o2 = 0; o2 < d; o2++)
                for (std::size_t p1 = 0; p1 < d; p1++)
                    for (std::size_t p2 = 0; p2 < d; p2++)
                        for (std::size_t i1 = 0; i1 < d; i1++)
                            for (std::size_t i2 = 0; i2 < d; i2++)
                                m((o1 * d + i1) * dd + o2 * d + i2, (p1 * d + i1) * dd + p2 * d + i2) =
                                    g(o1 * d + o2, p1 * d + p2);
        return m;
    };
    Mps acc = Mpo::identity(std::vector<std::size_t>(n, d)).as_mps();
    const Eigen::MatrixXcd cx = d == 2 ? Eigen::MatrixXcd(cnot()) : superop_2q(cnot());
    for (const auto &layer : layers) {
        std::vector<DenseTensor> cores = acc.cores();
        for (const auto &g : layer) {
            switch (g.kind) {
                case Gate::Kind::Unitary:
                    apply_site_op(cores, g.q0, lift1(d == 2 ? Eigen::MatrixXcd(g.matrix) : superop_1q(g.matrix)));
                    break;
                case Gate::Kind::Cnot:
                    apply_pair_op(cores, g.q0, lift2(cx), opts);
                    break;
                case Gate::Kind::Depolarize:
                    apply_pair_op(cores, g.q0, lift2(depolarizing_superop(g.gamma)), opts);
                    break;
            }
        }
        acc = mps_compress(Mps(std::move(cores)), opts).mps;
    }
    return Mpo::from_mps(acc, std::vector<std::size_t>(n, d), std::vector<std::size_t>(n, d));
}

}  // namespace vqtn::circuits

#endif
