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

#ifndef VQTN_LEARN_KERNELS_HPP
#define VQTN_LEARN_KERNELS_HPP

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <optional>

#include "vqtn/circuits/encoding_circuit.hpp"
#include "vqtn/learn/feature_map.hpp"

namespace vqtn::learn {

namespace detail {

inline std::vector<double> row_of(const Eigen::MatrixXd &m, Eigen::Index i) {
    std::vector<double> r(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); j++) r[j] = m(i, j);
    return r;
}

inline Eigen::MatrixXd phases_of(const circuits::EncodingMap &enc, const Eigen::MatrixXd &x) {
    Eigen::MatrixXd phi(x.rows(), static_cast<Eigen::Index>(enc.size()));
    for (Eigen::Index i = 0; i < x.rows(); i++) {
        const auto p = enc.evaluate(row_of(x, i));
        for (std::size_t a = 0; a < p.size(); a++) phi(i, static_cast<Eigen::Index>(a)) = p[a];
    }
    return phi;
}

}  // namespace detail

/// Normalized product kernel prod_alpha (1 + cos(phi_alpha(x_i) - phi_alpha(x_j))) / 2,
/// which is <T(x_i)|T(x_j)> / 2^N.
inline double product_kernel(const circuits::EncodingMap &enc, std::span<const double> xi, std::span<const double> xj) {
    double k = 1.0;
    for (std::size_t a = 0; a < enc.size(); a++) k *= 0.5 * (1.0 + std::cos(enc(a, xi) - enc(a, xj)));
    return k;
}

inline double product_kernel(const circuits::EncodingMap &enc, double xi, double xj) {
    return product_kernel(enc, std::span<const double>(&xi, 1), std::span<const double>(&xj, 1));
}

/// Kernel matrix between the rows of `a` and the rows of `b`.
inline Eigen::MatrixXd product_kernel_matrix(const circuits::EncodingMap &enc, const Eigen::MatrixXd &a,
                                             const Eigen::MatrixXd &b) {
    const Eigen::MatrixXd pa = detail::phases_of(enc, a), pb = detail::phases_of(enc, b);
    Eigen::MatrixXd k(a.rows(), b.rows());
    for (Eigen::Index j = 0; j < b.rows(); j++)
        for (Eigen::Index i = 0; i < a.rows(); i++) {
            double v = 1.0;
            for (Eigen::Index s = 0; s < pa.cols(); s++) v *= 0.5 * (1.0 + std::cos(pa(i, s) - pb(j, s)));
            k(i, j) = v;
        }
    return k;
}

/// |<0| S(x_i)^dagger S(x_j) |0>|^2 by state-vector simulation.
inline double quantum_kernel(const circuits::EncodingCircuit &c, std::span<const double> xi, std::span<const double> xj) {
    return std::norm(c.state(xi).inner(c.state(xj)));
}

inline Eigen::MatrixXd quantum_kernel_matrix(const circuits::EncodingCircuit &c, const Eigen::MatrixXd &a,
                                             const Eigen::MatrixXd &b) {
    auto states = [&](const Eigen::MatrixXd &x) {
        const std::size_t dim = std::size_t{1} << c.n_qubits;
        Eigen::MatrixXcd s(static_cast<Eigen::Index>(dim), x.rows());
        for (Eigen::Index i = 0; i < x.rows(); i++) {
            const auto st = c.state(detail::row_of(x, i));
            s.col(i) = Eigen::Map<const Eigen::VectorXcd>(st.amplitudes().data(), static_cast<Eigen::Index>(dim));
        }
        return s;
    };
    const Eigen::MatrixXcd sa = states(a), sb = states(b);
    return (sa.adjoint() * sb).cwiseAbs2();
}

struct KernelDescriptor {
    enum class Kind { Precomputed, Product, Quantum };
    Kind kind = Kind::Precomputed;
    std::optional<circuits::EncodingMap> encoding;
    std::optional<circuits::EncodingCircuit> circuit;

    std::string name() const {
        switch (kind) {
            case Kind::Product:
                return "product";
            case Kind::Quantum:
                return "quantum";
            default:
                return "precomputed";
        }
    }
};

struct RidgeSolution {
    Eigen::VectorXd gamma;
    double lambda = 0.0;
    double jitter = 0.0;  // added to the diagonal when lambda = 0 and K is numerically singular
    double residual = 0.0;
    KernelDescriptor kernel;
    Eigen::MatrixXd train_inputs;
};

inline constexpr double kRidgeJitter = 1e-12;
inline constexpr double kRidgeResidualTol = 1e-8;

inline std::size_t numerical_rank(const Eigen::MatrixXd &k, double rel = 1e-10) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().cwiseAbs().maxCoeff();
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); i++)
        if (es.eigenvalues()(i) > rel * top) r++;
    return r;
}

/// Solves (K + lambda I) gamma = y by Cholesky.
inline RidgeSolution kernel_ridge(const Eigen::MatrixXd &k, const Eigen::VectorXd &y, double lambda,
                                  KernelDescriptor kernel = {}, Eigen::MatrixXd train_inputs = {}) {
    const Eigen::Index m = k.rows();
    if (k.cols() != m || y.size() != m || m == 0) throw std::invalid_argument("kernel_ridge: shape mismatch");
    if (!(lambda >= 0.0)) throw ConfigError("kernel_ridge: lambda must be non-negative");
    const double scale = std::max(k.diagonal().cwiseAbs().maxCoeff(), 1e-300);
    if ((k - k.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale) throw ConfigError("kernel_ridge: K is not symmetric");

    RidgeSolution sol;
    sol.lambda = lambda;
    sol.kernel = std::move(kernel);
    sol.train_inputs = std::move(train_inputs);
    Eigen::MatrixXd a = k;
    a.diagonal().array() += lambda;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success && lambda == 0.0) {
        sol.jitter = kRidgeJitter * scale;
        a.diagonal().array() += sol.jitter;
        llt.compute(a);
    }
    if (llt.info() != Eigen::Success) {
        throw SolverFailure("kernel_ridge: K + lambda I is not positive definite", numerical_rank(k),
                            static_cast<std::size_t>(m));
    }
    sol.gamma = llt.solve(y);
    Eigen::MatrixXd exact = k;
    exact.diagonal().array() += lambda;
    sol.residual = (exact * sol.gamma - y).norm() / std::max(y.norm(), 1.0);
    if (!sol.gamma.allFinite() || sol.residual > kRidgeResidualTol) {
        throw SolverFailure("kernel_ridge: singular system, relative residual " + std::to_string(sol.residual),
                            numerical_rank(k), static_cast<std::size_t>(m));
    }
    return sol;
}

/// sum_i gamma_i K(x, x_i) for one kernel row.
inline double predict(const RidgeSolution &sol, std::span<const double> kernel_row) {
    if (kernel_row.size() != static_cast<std::size_t>(sol.gamma.size())) {
        throw std::invalid_argument("predict: kernel row length differs from training size");
    }
    return Eigen::Map<const Eigen::VectorXd>(kernel_row.data(), sol.gamma.size()).dot(sol.gamma);
}

/// Predictions for every row of a (test x train) kernel block.
inline Eigen::VectorXd predict(const RidgeSolution &sol, const Eigen::MatrixXd &kernel_rows) {
    if (kernel_rows.cols() != sol.gamma.size()) throw std::invalid_argument("predict: kernel block width mismatch");
    return kernel_rows * sol.gamma;
}

inline RidgeSolution fit_product_kernel(const circuits::EncodingMap &enc, const Eigen::MatrixXd &x,
                                        const Eigen::VectorXd &y, double lambda) {
    return kernel_ridge(product_kernel_matrix(enc, x, x), y, lambda,
                        KernelDescriptor{KernelDescriptor::Kind::Product, enc, std::nullopt}, x);
}

inline RidgeSolution fit_quantum_kernel(const circuits::EncodingCircuit &c, const Eigen::MatrixXd &x,
                                        const Eigen::VectorXd &y, double lambda) {
    return kernel_ridge(quantum_kernel_matrix(c, x, x), y, lambda,
                        KernelDescriptor{KernelDescriptor::Kind::Quantum, std::nullopt, c}, x);
}

/// Kernel row between new inputs and the stored training inputs.
inline Eigen::MatrixXd kernel_rows(const RidgeSolution &sol, const Eigen::MatrixXd &x) {
    switch (sol.kernel.kind) {
        case KernelDescriptor::Kind::Product:
            return product_kernel_matrix(*sol.kernel.encoding, x, sol.train_inputs);
        case KernelDescriptor::Kind::Quantum:
            return quantum_kernel_matrix(*sol.kernel.circuit, x, sol.train_inputs);
        default:
            throw ConfigError("kernel_rows: a precomputed-kernel solution cannot evaluate new inputs");
    }
}

/// C = 2^-N sum_i gamma_i T(x_i) as an MPS of bond at most M_t, for product-kernel solutions.
inline coeffs::CoefficientMps representer_mps(const RidgeSolution &sol, const circuits::EncodingMap &enc,
                                              const Eigen::MatrixXd &inputs) {
    if (sol.kernel.kind != KernelDescriptor::Kind::Product) {
        throw ConfigError("representer_mps: only product-kernel solutions have an MPS representer");
    }
    const std::size_t mt = static_cast<std::size_t>(sol.gamma.size());
    if (static_cast<std::size_t>(inputs.rows()) != mt) {
        throw std::invalid_argument("representer_mps: input count differs from the solution size");
    }
    const std::size_t n = enc.size();
    std::vector<FeatureMapState> t;
    for (Eigen::Index i = 0; i < inputs.rows(); i++) t.push_back(feature_map(enc, detail::row_of(inputs, i)));
    const double w = std::ldexp(1.0, -static_cast<int>(n));
    std::vector<DenseTensor> cores;
    for (std::size_t k = 0; k < n; k++) {
        const std::size_t l = k == 0 ? 1 : mt, r = k + 1 == n ? 1 : mt;
        DenseTensor c({l, 3, r});
        for (std::size_t i = 0; i < mt; i++) {
            const std::size_t a = k == 0 ? 0 : i, b = k + 1 == n ? 0 : i;
            const double pre = k == 0 ? w * sol.gamma(static_cast<Eigen::Index>(i)) : 1.0;
            for (std::size_t p = 0; p < 3; p++) c({a, p, b}) += pre * t[i].sites[k][p];
        }
        cores.push_back(std::move(c));
    }
    Mps m(std::move(cores));
    if (mt > 1) m = mps_compress(m, SvdOptions::exact(1e-14)).mps;
    return coeffs::CoefficientMps(std::move(m), coeffs::Origin{coeffs::OriginKind::Variational, {{"source", "representer"}}});
}

}  // namespace vqtn::learn

#endif
