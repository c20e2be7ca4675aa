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

#ifndef VQTN_LEARN_VQML_HPP
#define VQTN_LEARN_VQML_HPP

#include "vqtn/circuits/simulator.hpp"
#include "vqtn/learn/train.hpp"

namespace vqtn::learn {

/// Full gate list of a noiseless circuit at input x, trainable gates tagged with their angle index.
inline circuits::GateSequence vqml_gates(const circuits::CircuitSpec &spec, std::span<const double> x) {
    const std::vector<double> phi = spec.encoding.evaluate(x);
    const std::size_t n = spec.n_qubits;
    circuits::GateSequence seq = circuits::trainable_block(spec, 0);
    for (std::size_t k = 0; k < spec.encoding_blocks(); k++) {
        const auto enc = circuits::encoding_layer(std::span<const double>(phi).subspan(k * n, n));
        seq.insert(seq.end(), enc.begin(), enc.end());
        const auto w = circuits::trainable_block(spec, k + 1);
        seq.insert(seq.end(), w.begin(), w.end());
    }
    return seq;
}

namespace detail {

// 2x2 matrix r with r(b, a) = sum over the other qubits of conj(lam[.. a ..]) psi[.. b ..],
// so that <lam| g_q |psi> = trace(g r).
inline circuits::Mat2 pair_moment(const std::vector<cplx> &lam, const std::vector<cplx> &psi, std::size_t n,
                                  std::size_t q) {
    const std::size_t m = std::size_t{1} << (n - 1 - q);
    circuits::Mat2 r = circuits::Mat2::Zero();
    for (std::size_t hi = 0; hi < psi.size(); hi += 2 * m)
        for (std::size_t lo = hi; lo < hi + m; lo++) {
            const cplx l0 = std::conj(lam[lo]), l1 = std::conj(lam[lo + m]);
            r(0, 0) += l0 * psi[lo];
            r(1, 0) += l0 * psi[lo + m];
            r(0, 1) += l1 * psi[lo];
            r(1, 1) += l1 * psi[lo + m];
        }
    return r;
}

inline void apply_adjoint(circuits::StateVector &s, const circuits::Gate &g) {
    if (g.kind == circuits::Gate::Kind::Unitary) {
        s.apply_1q(g.matrix.adjoint(), g.q0);
    } else {
        s.apply(g);  // CNOT is self-inverse
    }
}

}  // namespace detail

/// Model output and its gradient with respect to every angle, by the adjoint method.
inline double vqml_value_and_gradient(const circuits::CircuitSpec &spec, std::span<const double> x,
                                      Eigen::Ref<Eigen::VectorXd> grad) {
    if (spec.gamma > 0.0) throw ConfigError("vqml gradient: only noiseless circuits are supported");
    const auto seq = vqml_gates(spec, x);
    const std::size_t n = spec.n_qubits;
    circuits::StateVector psi(n);
    psi.apply(seq);
    circuits::StateVector lam(n);
    {
        const circuits::detail::PauliAction act(spec.observable);
        auto &l = lam.amplitudes();
        const auto &p = psi.amplitudes();
        for (std::size_t i = 0; i < p.size(); i++) l[i ^ act.flip] = act.phase(i) * p[i];
    }
    const double value = psi.inner(lam).real();
    for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
        detail::apply_adjoint(psi, *it);
        if (it->param >= 0) {
            const auto &t = spec.theta;
            const auto o = static_cast<std::size_t>(it->param);
            const auto d = circuits::single_qubit_unitary_derivatives(t[o], t[o + 1], t[o + 2]);
            const circuits::Mat2 r = detail::pair_moment(lam.amplitudes(), psi.amplitudes(), n, it->q0);
            for (std::size_t j = 0; j < 3; j++) grad(static_cast<Eigen::Index>(o + j)) += 2.0 * (d[j] * r).trace().real();
        }
        detail::apply_adjoint(lam, *it);
    }
    return value;
}

inline double vqml_value(const circuits::CircuitSpec &spec, std::span<const double> x) {
    circuits::StateVector psi(spec.n_qubits);
    psi.apply(vqml_gates(spec, x));
    return psi.expectation(spec.observable);
}

inline Eigen::VectorXd vqml_predict(const circuits::CircuitSpec &spec, const Eigen::MatrixXd &inputs) {
    Eigen::VectorXd f(inputs.rows());
    std::vector<double> row(static_cast<std::size_t>(inputs.cols()));
    for (Eigen::Index i = 0; i < inputs.rows(); i++) {
        for (Eigen::Index j = 0; j < inputs.cols(); j++) row[j] = inputs(i, j);
        f(i) = vqml_value(spec, row);
    }
    return f;
}

struct VqmlTrainResult {
    circuits::CircuitSpec spec;
    std::vector<EpochRecord> trace;
};

/// Full-batch Adam on the mean squared error of a noiseless circuit model.
inline VqmlTrainResult train_vqml(const circuits::CircuitSpec &spec0, const Eigen::MatrixXd &x, const Eigen::VectorXd &y,
                                  const TrainConfig &cfg, const Eigen::MatrixXd *x_test = nullptr,
                                  const Eigen::VectorXd *y_test = nullptr) {
    cfg.validate();
    spec0.validate();
    if (x.rows() == 0 || x.rows() != y.size()) throw std::invalid_argument("train_vqml: empty or mismatched data");
    VqmlTrainResult out{spec0, {}};
    const auto m = static_cast<double>(x.rows());
    Eigen::VectorXd theta = Eigen::Map<const Eigen::VectorXd>(spec0.theta.data(), static_cast<Eigen::Index>(spec0.theta.size()));
    Adam opt(spec0.theta.size(), cfg);
    std::vector<double> row(static_cast<std::size_t>(x.cols()));
    auto test_mse = [&]() {
        if (x_test == nullptr || x_test->rows() == 0) return std::numeric_limits<double>::quiet_NaN();
        return (vqml_predict(out.spec, *x_test) - *y_test).squaredNorm() / static_cast<double>(x_test->rows());
    };
    for (std::size_t e = 0; e <= cfg.epochs; e++) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(theta.size());
        Eigen::VectorXd gi(theta.size());
        double loss = 0.0;
        for (Eigen::Index i = 0; i < x.rows(); i++) {
            for (Eigen::Index j = 0; j < x.cols(); j++) row[j] = x(i, j);
            gi.setZero();
            const double r = vqml_value_and_gradient(out.spec, row, gi) - y(i);
            loss += r * r / m;
            g += (2.0 * r / m) * gi;
        }
        check_finite(e, loss, g);
        out.trace.push_back({e, loss, test_mse(), 0.0});
        if (e == cfg.epochs) break;
        opt.step(theta, g);
        out.spec.theta.assign(theta.data(), theta.data() + theta.size());
    }
    return out;
}

}  // namespace vqtn::learn

#endif
