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

#ifndef VQTN_CIRCUITS_GATE_SEQUENCE_HPP
#define VQTN_CIRCUITS_GATE_SEQUENCE_HPP

#include "vqtn/circuits/spec.hpp"

namespace vqtn::circuits {

struct Gate {
    enum class Kind { Unitary, Cnot, Depolarize };
    Kind kind = Kind::Unitary;
    std::size_t q0 = 0;  // target of a single-qubit gate, control of a CNOT, first qubit of a noise pair
    std::size_t q1 = 0;
    Mat2 matrix = Mat2::Identity();
    double gamma = 0.0;
    long param = -1;  // index of t1 in the spec angles for trainable single-qubit gates
};

using GateSequence = std::vector<Gate>;

/// Gates of one trainable block in time order, grouped by layer. Noise follows every CNOT when gamma > 0.
inline std::vector<GateSequence> trainable_layers(std::size_t n, std::size_t n_layers, std::span<const double> theta,
                                                  double gamma, Ansatz ansatz, long param_base = 0) {
    if (theta.size() != 3 * n * n_layers) {
        throw ConfigError("trainable block: expected " + std::to_string(3 * n * n_layers) + " angles");
    }
    std::vector<GateSequence> layers;
    for (std::size_t l = 0; l < n_layers; l++) {
        GateSequence seq;
        for (std::size_t q = 0; q < n; q++) {
            const std::size_t o = 3 * (l * n + q);
            Gate g;
            g.kind = Gate::Kind::Unitary;
            g.q0 = q;
            g.matrix = single_qubit_unitary(theta[o], theta[o + 1], theta[o + 2]);
            g.param = param_base + static_cast<long>(o);
            seq.push_back(g);
        }
        if (ansatz != Ansatz::RotationsOnly) {
            for (std::size_t k = 0; k + 1 < n; k++) {
                const std::size_t q = (ansatz == Ansatz::HardwareEfficient) ? k : n - 2 - k;
                Gate c;
                c.kind = Gate::Kind::Cnot;
                c.q0 = q;
                c.q1 = q + 1;
                seq.push_back(c);
                if (gamma > 0.0) {
                    Gate d;
                    d.kind = Gate::Kind::Depolarize;
                    d.q0 = q;
                    d.q1 = q + 1;
                    d.gamma = gamma;
                    seq.push_back(d);
                }
            }
        }
        layers.push_back(std::move(seq));
    }
    return layers;
}

inline std::vector<GateSequence> trainable_layers(const CircuitSpec &spec, std::size_t block) {
    return trainable_layers(spec.n_qubits, spec.layers.at(block), spec.block_theta(block), spec.gamma,
                            spec.block_ansatz(block), static_cast<long>(spec.theta_offset(block)));
}

inline GateSequence flatten(const std::vector<GateSequence> &layers) {
    GateSequence out;
    for (const auto &l : layers) out.insert(out.end(), l.begin(), l.end());
    return out;
}

inline GateSequence trainable_block(std::size_t n, std::size_t n_layers, std::span<const double> theta, double gamma,
                                    Ansatz ansatz, long param_base = 0) {
    return flatten(trainable_layers(n, n_layers, theta, gamma, ansatz, param_base));
}

inline GateSequence trainable_block(const CircuitSpec &spec, std::size_t block) {
    return flatten(trainable_layers(spec, block));
}

/// Rz(phi_q) on each qubit.
inline GateSequence encoding_layer(std::span<const double> phis) {
    GateSequence seq;
    for (std::size_t q = 0; q < phis.size(); q++) {
        Gate g;
        g.q0 = q;
        g.matrix = rz(phis[q]);
        seq.push_back(g);
    }
    return seq;
}

}  // namespace vqtn::circuits

#endif
