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

#ifndef VQTN_CIRCUITS_ORACLE_HPP
#define VQTN_CIRCUITS_ORACLE_HPP

#include <variant>

#include "vqtn/circuits/simulator.hpp"

namespace vqtn::circuits {

/// Direct simulation of f(x) = Tr[O U(x) rho_0 U(x)^dagger] in the Schroedinger picture.
/// The input-independent first block is simulated once; every call then runs the remaining
/// encoding and trainable gates forward.
class CircuitOracle {
   public:
    explicit CircuitOracle(const CircuitSpec &spec) : spec_(spec) {
        spec_.validate();
        const std::size_t n = spec_.n_qubits;
        for (std::size_t b = 0; b < spec_.blocks(); b++) {
            blocks_.push_back(trainable_block(spec_, b));
        }
        if (spec_.gamma > 0.0) {
            if (n > 11) {
                throw ResourceLimitError("density-matrix oracle supports at most 11 qubits");
            }
            DenseOperator rho = DenseOperator::zero_state(n);
            rho.forward(blocks_[0]);
            start_ = std::move(rho);
        } else {
            StateVector psi(n);
            psi.apply(blocks_[0]);
            start_ = std::move(psi);
        }
    }

    double operator()(std::span<const double> x) const {
        const std::vector<double> phi = spec_.encoding.evaluate(x);
        const std::size_t n = spec_.n_qubits;
        return std::visit(
            [&](const auto &start) {
                auto state = start;
                for (std::size_t k = 0; k < spec_.encoding_blocks(); k++) {
                    const auto enc = encoding_layer(std::span<const double>(phi).subspan(k * n, n));
                    apply_all(state, enc);
                    apply_all(state, blocks_[k + 1]);
                }
                return value(state);
            },
            start_);
    }

    double operator()(double x) const {
        return (*this)(std::span<const double>(&x, 1));
    }

   private:
    static void apply_all(StateVector &s, const GateSequence &seq) {
        s.apply(seq);
    }
    static void apply_all(DenseOperator &s, const GateSequence &seq) {
        s.forward(seq);
    }
    double value(const StateVector &s) const {
        return s.expectation(spec_.observable);
    }
    double value(const DenseOperator &s) const {
        return s.trace_with(spec_.observable).real();
    }

    CircuitSpec spec_;
    std::vector<GateSequence> blocks_;
    std::variant<StateVector, DenseOperator> start_{StateVector(1)};
};

/// One-shot evaluation of the model output by direct simulation.
inline double statevector_model_eval(const CircuitSpec &spec, std::span<const double> x) {
    return CircuitOracle(spec)(x);
}

}  // namespace vqtn::circuits

#endif
