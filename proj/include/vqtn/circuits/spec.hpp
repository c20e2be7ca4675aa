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

#ifndef VQTN_CIRCUITS_SPEC_HPP
#define VQTN_CIRCUITS_SPEC_HPP

#include <cstdint>
#include <numbers>
#include <random>

#include "vqtn/circuits/encoding.hpp"
#include "vqtn/circuits/gates.hpp"

namespace vqtn::circuits {

inline constexpr int kSpecVersion = 1;

enum class Structure { SimpleParallel, ReUploading };

/// Layer template of a trainable block. Every layer starts with U(t1, t2, t3) on each qubit;
/// HardwareEfficient then applies CNOT(q, q+1) for q ascending, ReversedCnot for q descending.
enum class Ansatz { HardwareEfficient, ReversedCnot, RotationsOnly };

inline std::string to_string(Ansatz a) {
    switch (a) {
        case Ansatz::HardwareEfficient:
            return "hea";
        case Ansatz::ReversedCnot:
            return "hea_reversed";
        case Ansatz::RotationsOnly:
            return "rotations";
    }
    return "hea";
}

inline Ansatz ansatz_from_string(const std::string &s) {
    if (s == "hea") return Ansatz::HardwareEfficient;
    if (s == "hea_reversed") return Ansatz::ReversedCnot;
    if (s == "rotations") return Ansatz::RotationsOnly;
    throw ConfigError("unknown ansatz '" + s + "'");
}

/// Full description of a VQML circuit.
///
/// SimpleParallel: W_1, encoding S(x) on every qubit, W_2. Re-uploading with R encoding blocks:
/// W_0, S_1, W_1, ..., S_R, W_R. `layers` has one entry per trainable block and `theta` lists
/// the block angles in block order, then layer, then qubit, then (t1, t2, t3).
struct CircuitSpec {
    Structure structure = Structure::SimpleParallel;
    std::size_t n_qubits = 1;
    std::vector<std::size_t> layers{0, 0};
    std::vector<Ansatz> ansatz;
    std::vector<double> theta;
    PauliString observable{"Z"};
    double gamma = 0.0;
    EncodingMap encoding = EncodingMap::naive(1);
    std::uint64_t seed = 0;

    std::size_t blocks() const {
        return layers.size();
    }
    std::size_t encoding_blocks() const {
        return structure == Structure::SimpleParallel ? 1 : layers.size() - 1;
    }
    /// Total number of encoding gates N.
    std::size_t n_encoding() const {
        return n_qubits * encoding_blocks();
    }
    std::size_t block_params(std::size_t b) const {
        return 3 * n_qubits * layers.at(b);
    }
    std::size_t theta_offset(std::size_t b) const {
        std::size_t off = 0;
        for (std::size_t k = 0; k < b; k++) off += block_params(k);
        return off;
    }
    std::size_t param_count() const {
        return theta_offset(layers.size());
    }
    Ansatz block_ansatz(std::size_t b) const {
        return ansatz.empty() ? Ansatz::HardwareEfficient : ansatz.at(b);
    }
    std::span<const double> block_theta(std::size_t b) const {
        return std::span<const double>(theta).subspan(theta_offset(b), block_params(b));
    }

    void validate() const {
        if (n_qubits == 0) throw ConfigError("circuit spec: n_qubits must be positive");
        if (structure == Structure::SimpleParallel && layers.size() != 2)
            throw ConfigError("circuit spec: a simple parallel model has exactly two trainable blocks");
        if (structure == Structure::ReUploading && layers.size() < 2)
            throw ConfigError("circuit spec: re-uploading needs at least one encoding block");
        if (!ansatz.empty() && ansatz.size() != layers.size())
            throw ConfigError("circuit spec: ansatz list must match the number of blocks");
        if (theta.size() != param_count())
            throw ConfigError("circuit spec: expected " + std::to_string(param_count()) + " angles, got " +
                              std::to_string(theta.size()));
        for (double t : theta)
            if (!std::isfinite(t)) throw ConfigError("circuit spec: non-finite angle");
        if (observable.size() != n_qubits) throw ConfigError("circuit spec: observable length differs from n_qubits");
        if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("circuit spec: gamma must lie in [0, 1]");
        if (encoding.size() != n_encoding())
            throw ConfigError("circuit spec: encoding has " + std::to_string(encoding.size()) + " functions, circuit has " +
                              std::to_string(n_encoding()) + " encoding gates");
    }

    /// Angles drawn uniformly from [0, 2 pi) with a PRNG seeded by `seed`.
    void randomize_theta() {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
        theta.resize(param_count());
        for (auto &t : theta) t = u(rng);
    }

    static CircuitSpec random_parallel(std::size_t n, std::size_t l1, std::size_t l2, double gamma,
                                       const EncodingMap &enc, std::uint64_t seed) {
        CircuitSpec s;
        s.structure = Structure::SimpleParallel;
        s.n_qubits = n;
        s.layers = {l1, l2};
        s.observable = PauliString::z_on(n, n - 1);
        s.gamma = gamma;
        s.encoding = enc;
        s.seed = seed;
        s.randomize_theta();
        s.validate();
        return s;
    }

    static CircuitSpec random_reuploading(std::size_t n_qubits, std::size_t r, std::size_t l, double gamma,
                                          const EncodingMap &enc, std::uint64_t seed) {
        CircuitSpec s;
        s.structure = Structure::ReUploading;
        s.n_qubits = n_qubits;
        s.layers.assign(r + 1, l);
        s.observable = PauliString::z_on(n_qubits, n_qubits - 1);
        s.gamma = gamma;
        s.encoding = enc;
        s.seed = seed;
        s.randomize_theta();
        s.validate();
        return s;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["spec_version"] = kSpecVersion;
        j["structure"] = structure == Structure::SimpleParallel ? "simple_parallel" : "reuploading";
        j["n_qubits"] = n_qubits;
        j["N"] = n_encoding();
        j["layers"] = layers;
        if (!ansatz.empty()) {
            std::vector<std::string> names;
            for (auto a : ansatz) names.push_back(to_string(a));
            j["ansatz"] = names;
        }
        j["theta"] = theta;
        j["observable"] = observable.str();
        j["gamma"] = gamma;
        j["encoding"] = encoding.to_json();
        j["seed"] = seed;
        return j;
    }

    static CircuitSpec from_json(const nlohmann::json &j) {
        CircuitSpec s;
        try {
            if (!j.contains("spec_version")) throw ConfigError("circuit spec: missing spec_version");
            if (j.at("spec_version").get<int>() != kSpecVersion)
                throw ConfigError("circuit spec: unsupported spec_version " + j.at("spec_version").dump());
            const std::string st = j.at("structure").get<std::string>();
            if (st == "simple_parallel")
                s.structure = Structure::SimpleParallel;
            else if (st == "reuploading")
                s.structure = Structure::ReUploading;
            else
                throw ConfigError("circuit spec: unknown structure '" + st + "'");
            s.n_qubits = j.at("n_qubits").get<std::size_t>();
            s.layers = j.at("layers").get<std::vector<std::size_t>>();
            s.ansatz.clear();
            if (j.contains("ansatz"))
                for (const auto &a : j.at("ansatz")) s.ansatz.push_back(ansatz_from_string(a.get<std::string>()));
            s.theta = j.at("theta").get<std::vector<double>>();
            s.observable = PauliString(j.at("observable").get<std::string>());
            s.gamma = j.value("gamma", 0.0);
            s.encoding = EncodingMap::from_json(j.at("encoding"));
            s.seed = j.value("seed", std::uint64_t{0});
        } catch (const nlohmann::json::exception &e) {
            throw ConfigError(std::string("malformed circuit spec: ") + e.what());
        }
        s.validate();
        if (j.contains("N") && j.at("N").get<std::size_t>() != s.n_encoding())
            throw ConfigError("circuit spec: field N disagrees with the structure");
        return s;
    }
};

}  // namespace vqtn::circuits

#endif
