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

#ifndef VQTN_CIRCUITS_ENCODING_CIRCUIT_HPP
#define VQTN_CIRCUITS_ENCODING_CIRCUIT_HPP

#include "vqtn/circuits/simulator.hpp"

namespace vqtn::circuits {

inline constexpr std::size_t kMaxKernelQubits = 14;

/// Data-encoding circuit applied to |0...0>.
///
/// ZRotation: a Hadamard on every qubit followed by Rz(phi_q(x)).
/// Iqp: per repetition, a Hadamard layer, Rz(x_q) on every qubit, then exp(-i x_q x_{q+1} ZZ / 2)
/// on neighbouring pairs (compiled as CNOT, Rz, CNOT).
struct EncodingCircuit {
    enum class Kind { ZRotation, Iqp };
    Kind kind = Kind::ZRotation;
    std::size_t n_qubits = 1;
    std::size_t reps = 2;
    EncodingMap phases = EncodingMap::naive(1);

    static EncodingCircuit z_rotation(const EncodingMap &enc) {
        return EncodingCircuit{Kind::ZRotation, enc.size(), 1, enc};
    }
    static EncodingCircuit iqp(std::size_t n_qubits, std::size_t reps = 2) {
        return EncodingCircuit{Kind::Iqp, n_qubits, reps, EncodingMap::element_wise(n_qubits)};
    }

    std::size_t input_dim() const {
        return phases.input_dim();
    }

    GateSequence gates(std::span<const double> x) const {
        if (x.size() != input_dim()) {
            throw ConfigError("encoding circuit: expected input of dimension " + std::to_string(input_dim()));
        }
        GateSequence seq;
        auto one = [&](const Mat2 &m, std::size_t q) {
            Gate g;
            g.q0 = q;
            g.matrix = m;
            seq.push_back(g);
        };
        auto cx = [&](std::size_t q) {
            Gate g;
            g.kind = Gate::Kind::Cnot;
            g.q0 = q;
            g.q1 = q + 1;
            seq.push_back(g);
        };
        if (kind == Kind::ZRotation) {
            for (std::size_t q = 0; q < n_qubits; q++) {
                one(hadamard(), q);
                one(rz(phases(q, x)), q);
            }
            return seq;
        }
        for (std::size_t r = 0; r < reps; r++) {
            for (std::size_t q = 0; q < n_qubits; q++) one(hadamard(), q);
            for (std::size_t q = 0; q < n_qubits; q++) one(rz(x[q]), q);
            for (std::size_t q = 0; q + 1 < n_qubits; q++) {
                cx(q);
                one(rz(x[q] * x[q + 1]), q + 1);
                cx(q);
            }
        }
        return seq;
    }

    StateVector state(std::span<const double> x) const {
        if (n_qubits > kMaxKernelQubits) {
            throw ResourceLimitError("encoding circuit: at most " + std::to_string(kMaxKernelQubits) + " qubits");
        }
        StateVector s(n_qubits);
        s.apply(gates(x));
        return s;
    }
};

}  // namespace vqtn::circuits

#endif
