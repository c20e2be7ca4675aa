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

#ifndef VQTN_CIRCUITS_DENSE_BUILDERS_HPP
#define VQTN_CIRCUITS_DENSE_BUILDERS_HPP

#include "vqtn/circuits/simulator.hpp"

namespace vqtn::circuits {

/// Dense O' for the last trainable block (adjoint channel when noisy).
inline DenseOperator evolve_observable_dense(const CircuitSpec &spec) {
    spec.validate();
    DenseOperator o = DenseOperator::pauli(spec.observable);
    o.heisenberg(trainable_block(spec, spec.blocks() - 1));
    return o;
}

/// Dense rho' after the first trainable block.
inline DenseOperator build_rho_dense(const CircuitSpec &spec) {
    spec.validate();
    const GateSequence seq = trainable_block(spec, 0);
    if (spec.gamma == 0.0) {
        StateVector psi(spec.n_qubits);
        psi.apply(seq);
        return DenseOperator::projector(psi);
    }
    DenseOperator rho = DenseOperator::zero_state(spec.n_qubits);
    rho.forward(seq);
    return rho;
}

/// Matrix of the channel of trainable block `block` on vectorized operators:
/// entry [(r' D + c'), (r D + c)] = <r'| Phi(|r><c|) |c'>, D = 2^n_qubits.
inline Eigen::MatrixXcd block_channel_dense(const CircuitSpec &spec, std::size_t block) {
    const GateSequence seq = trainable_block(spec, block);
    const std::size_t n = spec.n_qubits;
    const std::size_t d = std::size_t{1} << n;
    Eigen::MatrixXcd phi(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(d * d));
    for (std::size_t r = 0; r < d; r++) {
        for (std::size_t c = 0; c < d; c++) {
            DenseOperator e(n);
            e.data()[r * d + c] = 1.0;
            e.forward(seq);
            for (std::size_t k = 0; k < d * d; k++) phi(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(r * d + c)) = e.data()[k];
        }
    }
    return phi;
}

}  // namespace vqtn::circuits

#endif
