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

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "vqtn/circuits.hpp"

using namespace vqtn;
using namespace vqtn::circuits;

namespace {

// Full 2^n x 2^n matrix of a gate built by Kronecker products, qubit 0 most significant.
Eigen::MatrixXcd embed(const Eigen::MatrixXcd &g, std::size_t first, std::size_t width, std::size_t n) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    auto kron = [](const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b) {
        Eigen::MatrixXcd m(a.rows() * b.rows(), a.cols() * b.cols());
        for (Eigen::Index i = 0; i < a.rows(); i++)
            for (Eigen::Index j = 0; j < a.cols(); j++) m.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        return m;
    };
    out = kron(Eigen::MatrixXcd::Identity(1 << first, 1 << first), g);
    const std::size_t rest = n - first - width;
    return kron(out, Eigen::MatrixXcd::Identity(1 << rest, 1 << rest));
}

Eigen::MatrixXcd sequence_unitary(const GateSequence &seq, std::size_t n) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(1 << n, 1 << n);
    for (const auto &g : seq) {
        if (g.kind == Gate::Kind::Unitary) u = embed(g.matrix, g.q0, 1, n) * u;
        if (g.kind == Gate::Kind::Cnot) u = embed(cnot(), g.q0, 2, n) * u;
    }
    return u;
}

// Channel applied through its Kraus operators.
Eigen::MatrixXcd kraus_channel(const Eigen::MatrixXcd &rho, std::size_t q, std::size_t n, double gamma) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
    for (const auto &k : depolarizing_kraus(gamma)) {
        Eigen::MatrixXcd kk = embed(k, q, 2, n);
        out += kk * rho * kk.adjoint();
    }
    return out;
}

Eigen::MatrixXcd sequence_channel(const GateSequence &seq, const Eigen::MatrixXcd &rho0, std::size_t n) {
    Eigen::MatrixXcd rho = rho0;
    for (const auto &g : seq) {
        if (g.kind == Gate::Kind::Depolarize) {
            rho = kraus_channel(rho, g.q0, n, g.gamma);
        } else {
            Eigen::MatrixXcd u = g.kind == Gate::Kind::Unitary ? embed(g.matrix, g.q0, 1, n) : embed(cnot(), g.q0, 2, n);
            rho = u * rho * u.adjoint();
        }
    }
    return rho;
}

Eigen::MatrixXcd pauli_dense(const PauliString &p) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
    for (std::size_t q = 0; q < p.size(); q++) {
        Eigen::MatrixXcd s = p.matrix(q);
        Eigen::MatrixXcd k(m.rows() * 2, m.cols() * 2);
        for (Eigen::Index i = 0; i < m.rows(); i++)
            for (Eigen::Index j = 0; j < m.cols(); j++) k.block(2 * i, 2 * j, 2, 2) = m(i, j) * s;
        m = k;
    }
    return m;
}

Eigen::MatrixXcd random_density(std::size_t n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    const int d = 1 << n;
    Eigen::MatrixXcd a(d, d);
    for (int i = 0; i < d; i++)
        for (int j = 0; j < d; j++) a(i, j) = cplx(g(rng), g(rng));
    Eigen::MatrixXcd rho = a * a.adjoint();
    return rho / rho.trace();
}

}  // namespace

TEST(gates, unitary_and_hadamard_special_case) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0, 2 * std::numbers::pi);
    for (int t = 0; t < 20; t++) {
        Mat2 m = single_qubit_unitary(u(rng), u(rng), u(rng));
        EXPECT_LT((m * m.adjoint() - Mat2::Identity()).norm(), 1e-14);
    }
    EXPECT_LT((single_qubit_unitary(std::numbers::pi / 2, 0, std::numbers::pi) - hadamard()).norm(), 1e-15);
}

TEST(gates, unitary_derivatives_match_finite_differences) {
    const double t[3] = {0.3, 1.1, -0.7};
    auto d = single_qubit_unitary_derivatives(t[0], t[1], t[2]);
    for (int k = 0; k < 3; k++) {
        double tp[3] = {t[0], t[1], t[2]}, tm[3] = {t[0], t[1], t[2]};
        tp[k] += 1e-6;
        tm[k] -= 1e-6;
        Mat2 fd = (single_qubit_unitary(tp[0], tp[1], tp[2]) - single_qubit_unitary(tm[0], tm[1], tm[2])) / 2e-6;
        EXPECT_LT((fd - d[k]).norm(), 1e-8);
    }
}

TEST(gates, kraus_completeness) {
    for (double gamma : {0.0, 0.05, 0.1, 0.5, 1.0}) {
        Mat4 s = Mat4::Zero();
        for (const auto &k : depolarizing_kraus(gamma)) s += k.adjoint() * k;
        EXPECT_LT((s - Mat4::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    }
    EXPECT_THROW(depolarizing_kraus(1.5), ConfigError);
}

TEST(simulator, depolarize_matches_kraus_sum) {
    std::mt19937_64 rng(3);
    for (std::size_t q : {0u, 1u}) {
        Eigen::MatrixXcd rho = random_density(3, rng);
        DenseOperator op = DenseOperator::from_matrix(rho);
        op.depolarize(q, q + 1, 0.3);
        EXPECT_LT((op.to_matrix() - kraus_channel(rho, q, 3, 0.3)).norm(), 1e-12);
    }
}

TEST(simulator, pauli_damping_under_noise) {
    // Each non-identity Pauli pair on the noise sites is scaled by 1 - gamma.
    const double gamma = 0.2;
    for (std::string s : {"XI", "IZ", "YX", "II"}) {
        DenseOperator op = DenseOperator::pauli(PauliString(s));
        op.depolarize(0, 1, gamma);
        const double factor = s == "II" ? 1.0 : 1.0 - gamma;
        EXPECT_LT((op.to_matrix() - factor * pauli_dense(PauliString(s))).norm(), 1e-12);
    }
}

TEST(simulator, full_depolarization_annihilates_traceless_input) {
    std::mt19937_64 rng(5);
    std::vector<double> theta(3 * 4 * 2);
    std::uniform_real_distribution<double> u(0, 6.28);
    for (auto &t : theta) t = u(rng);
    const auto seq = trainable_block(4, 2, theta, 1.0, Ansatz::HardwareEfficient);
    Eigen::MatrixXcd traceless = random_density(4, rng);
    traceless -= traceless.trace() / 16.0 * Eigen::MatrixXcd::Identity(16, 16);
    DenseOperator op = DenseOperator::from_matrix(traceless);
    op.forward(seq);
    EXPECT_LT(op.to_matrix().norm(), 1e-12);
}

TEST(simulator, state_vector_and_operator_match_dense_unitary) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 6.28);
    const std::size_t n = 4;
    for (Ansatz a : {Ansatz::HardwareEfficient, Ansatz::ReversedCnot, Ansatz::RotationsOnly}) {
        std::vector<double> theta(3 * n * 2);
        for (auto &t : theta) t = u(rng);
        const auto seq = trainable_block(n, 2, theta, 0.0, a);
        Eigen::MatrixXcd w = sequence_unitary(seq, n);
        StateVector psi(n);
        psi.apply(seq);
        Eigen::VectorXcd ref = w.col(0);
        for (std::size_t i = 0; i < 16; i++) EXPECT_LT(std::abs(psi.amplitudes()[i] - ref(i)), 1e-12);
        PauliString p("XYZI");
        EXPECT_NEAR(psi.expectation(p), (ref.adjoint() * pauli_dense(p) * ref)(0).real(), 1e-12);
        DenseOperator o = DenseOperator::pauli(p);
        o.heisenberg(seq);
        EXPECT_LT((o.to_matrix() - w.adjoint() * pauli_dense(p) * w).norm(), 1e-11);
        Eigen::MatrixXcd rho0 = random_density(n, rng);
        DenseOperator r = DenseOperator::from_matrix(rho0);
        r.forward(seq);
        EXPECT_LT((r.to_matrix() - w * rho0 * w.adjoint()).norm(), 1e-11);
        EXPECT_NEAR(r.trace_with(p).real(), (pauli_dense(p) * r.to_matrix()).trace().real(), 1e-12);
    }
}

TEST(simulator, noisy_forward_matches_kraus_sequence) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0, 6.28);
    std::vector<double> theta(3 * 3 * 2);
    for (auto &t : theta) t = u(rng);
    const auto seq = trainable_block(3, 2, theta, 0.15, Ansatz::HardwareEfficient);
    Eigen::MatrixXcd rho0 = random_density(3, rng);
    DenseOperator r = DenseOperator::from_matrix(rho0);
    r.forward(seq);
    EXPECT_LT((r.to_matrix() - sequence_channel(seq, rho0, 3)).norm(), 1e-12);
    EXPECT_NEAR(r.trace().real(), 1.0, 1e-12);
}

TEST(mpo_builders, unitary_mpo_matches_dense) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 6.28);
    const std::size_t n = 5;
    std::vector<double> theta(3 * n * 3);
    for (auto &t : theta) t = u(rng);
    Mpo w = build_trainable_mpo(n, 3, theta, 0.0);
    const auto seq = trainable_block(n, 3, theta, 0.0, Ansatz::HardwareEfficient);
    EXPECT_LT((w.to_dense() - sequence_unitary(seq, n)).norm(), 1e-10);
    EXPECT_EQ(w.out_dim(0), 2u);
}

TEST(mpo_builders, noisy_superoperator_matches_channel) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0, 6.28);
    const std::size_t n = 3;
    std::vector<double> theta(3 * n * 2);
    for (auto &t : theta) t = u(rng);
    const double gamma = 0.1;
    Mpo s = build_trainable_mpo(n, 2, theta, gamma);
    EXPECT_EQ(s.out_dim(0), 4u);
    // Apply to vec(rho) with site-fused (row, col) indices and compare with the channel.
    Eigen::MatrixXcd rho0 = random_density(n, rng);
    std::vector<cplx> vec;
    const int d = 1 << n;
    // Fused ordering (r1 c1 r2 c2 r3 c3).
    std::vector<cplx> fused(d * d);
    for (int r = 0; r < d; r++)
        for (int c = 0; c < d; c++) {
            std::size_t idx = 0;
            for (std::size_t q = 0; q < n; q++) {
                const int rb = (r >> (n - 1 - q)) & 1, cb = (c >> (n - 1 - q)) & 1;
                idx = idx * 4 + 2 * rb + cb;
            }
            fused[idx] = rho0(r, c);
        }
    Mps v = Mps::from_dense(fused, {4, 4, 4});
    Mps out = mpo_apply(s, v);
    Mpo rho = unvectorize(out);
    const auto seq = trainable_block(n, 2, theta, gamma, Ansatz::HardwareEfficient);
    EXPECT_LT((rho.to_dense() - sequence_channel(seq, rho0, n)).norm(), 1e-10);
}

TEST(mpo_builders, observable_and_state_match_dense) {
    for (double gamma : {0.0, 0.1}) {
        CircuitSpec spec = CircuitSpec::random_parallel(5, 2, 3, gamma, EncodingMap::naive(5), 42);
        Mpo o = evolve_observable(spec);
        EXPECT_LT((o.to_dense() - evolve_observable_dense(spec).to_matrix()).norm(), 1e-10);
        Mpo r = build_rho(spec);
        EXPECT_LT((r.to_dense() - build_rho_dense(spec).to_matrix()).norm(), 1e-10);
    }
}

TEST(mpo_builders, noisy_staircase_damps_spread_observable) {
    // Identity rotations: Z on the last qubit spreads to Z^{(x)N}, damped once per noise site.
    const std::size_t n = 5;
    const double gamma = 0.1;
    CircuitSpec spec;
    spec.n_qubits = n;
    spec.layers = {0, 1};
    spec.theta.assign(3 * n, 0.0);
    spec.observable = PauliString::z_on(n, n - 1);
    spec.gamma = gamma;
    spec.encoding = EncodingMap::naive(n);
    Mpo o = evolve_observable(spec);
    Eigen::MatrixXcd ref = std::pow(1 - gamma, n - 1) * pauli_dense(PauliString(std::string(n, 'Z')));
    EXPECT_LT((o.to_dense() - ref).norm(), 1e-12);
}

TEST(oracle, matches_full_unitary_evaluation) {
    CircuitSpec spec = CircuitSpec::random_parallel(4, 2, 2, 0.0, EncodingMap::exponential(4, 3.0), 5);
    CircuitOracle oracle(spec);
    const auto w1 = sequence_unitary(trainable_block(spec, 0), 4);
    const auto w2 = sequence_unitary(trainable_block(spec, 1), 4);
    for (double x : {-2.0, 0.1, 1.7}) {
        GateSequence enc = encoding_layer(spec.encoding.evaluate(std::span<const double>(&x, 1)));
        Eigen::MatrixXcd u = w2 * sequence_unitary(enc, 4) * w1;
        Eigen::VectorXcd psi = u.col(0);
        const double ref = (psi.adjoint() * pauli_dense(spec.observable) * psi)(0).real();
        EXPECT_NEAR(oracle(x), ref, 1e-12);
    }
}

TEST(spec, json_round_trip_and_validation) {
    CircuitSpec spec = CircuitSpec::random_reuploading(2, 3, 2, 0.05, EncodingMap::naive(6), 9);
    spec.ansatz = {Ansatz::HardwareEfficient, Ansatz::ReversedCnot, Ansatz::RotationsOnly, Ansatz::HardwareEfficient};
    auto j = spec.to_json();
    EXPECT_EQ(j["spec_version"], kSpecVersion);
    CircuitSpec back = CircuitSpec::from_json(j);
    EXPECT_EQ(back.to_json(), j);
    auto bad = j;
    bad["spec_version"] = 99;
    EXPECT_THROW(CircuitSpec::from_json(bad), ConfigError);
    bad = j;
    bad.erase("spec_version");
    EXPECT_THROW(CircuitSpec::from_json(bad), ConfigError);
    bad = j;
    bad["theta"] = std::vector<double>{1.0};
    EXPECT_THROW(CircuitSpec::from_json(bad), ConfigError);
    bad = j;
    bad["encoding"] = EncodingMap::naive(5).to_json();
    EXPECT_THROW(CircuitSpec::from_json(bad), ConfigError);
}

TEST(encoding, iqp_vec_ordering) {
    EncodingMap m = EncodingMap::iqp_vec(3);
    EXPECT_EQ(m.size(), 18u);
    const std::vector<double> x{0.5, -1.0, 2.0};
    const auto phi = m.evaluate(x);
    const std::vector<double> rep{0.5, -1.0, 2.0, -0.5, -2.0};
    for (std::size_t k = 0; k < 5; k++) {
        EXPECT_DOUBLE_EQ(phi[k], rep[k]);
        EXPECT_DOUBLE_EQ(phi[5 + k], rep[k]);
    }
    for (std::size_t k = 10; k < 18; k++) EXPECT_EQ(phi[k], 0.0);
    EXPECT_THROW(m(0, std::vector<double>{1.0}), ConfigError);
}

TEST(encoding, iqp_1d_and_exponential) {
    EncodingMap e = EncodingMap::exponential(3, 3.0);
    EXPECT_DOUBLE_EQ(e(2, std::vector<double>{0.5}), 4.5);
    EncodingMap q = EncodingMap::iqp_1d(5);
    const double x = 0.3;
    EXPECT_DOUBLE_EQ(q(2, std::span<const double>(&x, 1)), x);
    EXPECT_DOUBLE_EQ(q(3, std::span<const double>(&x, 1)), (std::numbers::pi - x) * (std::numbers::pi - x));
    auto back = EncodingMap::from_json(EncodingMap::zero_padded(e, {0, -1, 2}).to_json());
    EXPECT_EQ(back.size(), 3u);
    EXPECT_EQ(back(1, std::vector<double>{0.5}), 0.0);
}
