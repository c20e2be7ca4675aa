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

#include <Eigen/QR>
#include <numbers>
#include <random>

#include "vqtn/circuits.hpp"
#include "vqtn/coeffs.hpp"
#include "vqtn/learn.hpp"

using namespace vqtn;
using namespace vqtn::learn;
using circuits::EncodingCircuit;
using circuits::EncodingMap;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd uniform_inputs(std::size_t m, std::size_t d, std::uint64_t seed, double lo = -kPi, double hi = kPi) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
    for (Eigen::Index j = 0; j < x.cols(); j++)
        for (Eigen::Index i = 0; i < x.rows(); i++) x(i, j) = u(rng);
    return x;
}

std::vector<double> row(const Eigen::MatrixXd &x, Eigen::Index i) {
    std::vector<double> r;
    for (Eigen::Index j = 0; j < x.cols(); j++) r.push_back(x(i, j));
    return r;
}

double dense_dot(const std::vector<double> &a, const std::vector<double> &b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); i++) s += a[i] * b[i];
    return s;
}

FeatureBatch batch_for(const CmpsParams &target, const EncodingMap &enc, const Eigen::MatrixXd &x) {
    FeatureBatch b = FeatureBatch::build(enc, x, std::vector<double>(static_cast<std::size_t>(x.rows()), 0.0));
    b.y = cmps_predict(target, b);
    return b;
}

// Kronecker-product state vector for the IQP circuit, built from full 2^n x 2^n matrices.
Eigen::VectorXcd iqp_dense_state(const std::vector<double> &x, std::size_t reps) {
    const std::size_t n = x.size();
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    auto embed = [&](const Eigen::Matrix2cd &g, std::size_t q) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
        for (std::size_t k = 0; k < n; k++) {
            const Eigen::MatrixXcd f = k == q ? Eigen::MatrixXcd(g) : Eigen::MatrixXcd::Identity(2, 2);
            Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
            for (Eigen::Index a = 0; a < m.rows(); a++)
                for (Eigen::Index b = 0; b < m.cols(); b++) next.block(2 * a, 2 * b, 2, 2) = m(a, b) * f;
            m = next;
        }
        return m;
    };
    Eigen::Matrix2cd h;
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    const std::complex<double> i1(0.0, 1.0);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
    psi(0) = 1.0;
    for (std::size_t r = 0; r < reps; r++) {
        for (std::size_t q = 0; q < n; q++) psi = embed(h, q) * psi;
        for (std::size_t q = 0; q < n; q++) {
            Eigen::Matrix2cd z = Eigen::Matrix2cd::Zero();
            z(0, 0) = std::exp(-i1 * x[q] / 2.0);
            z(1, 1) = std::exp(i1 * x[q] / 2.0);
            psi = embed(z, q) * psi;
        }
        for (std::size_t q = 0; q + 1 < n; q++) {
            // exp(-i t Z_q Z_{q+1} / 2) is diagonal with phase set by the parity of the two bits.
            const double t = x[q] * x[q + 1];
            for (Eigen::Index b = 0; b < dim; b++) {
                const int zq = ((b >> (n - 1 - q)) & 1) ? -1 : 1;
                const int zr = ((b >> (n - 2 - q)) & 1) ? -1 : 1;
                psi(b) *= std::exp(-i1 * t * static_cast<double>(zq * zr) / 2.0);
            }
        }
    }
    return psi;
}

}  // namespace

// ---------------------------------------------------------------- feature map

TEST(FeatureMap, ZeroPhaseSiteIsOneOneZero) {
    const auto t = feature_map(EncodingMap::naive(3), 0.0);
    for (const auto &s : t.sites) {
        EXPECT_EQ(s[0], 1.0);
        EXPECT_EQ(s[1], 1.0);
        EXPECT_EQ(s[2], 0.0);
    }
}

TEST(FeatureMap, ExponentialFirstSiteAtHalfPi) {
    const auto t = feature_map(EncodingMap::exponential(4, 3.0), kPi / 2);
    EXPECT_NEAR(t.sites[0][0], 1.0, 1e-12);
    EXPECT_NEAR(t.sites[0][1], 0.0, 1e-12);
    EXPECT_NEAR(t.sites[0][2], 1.0, 1e-12);
}

TEST(FeatureMap, SquaredNormIsTwoToTheN) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (std::size_t n : {1u, 4u, 9u}) {
        for (int rep = 0; rep < 20; rep++) {
            const auto t = feature_map(EncodingMap::exponential(n, 3.0), u(rng));
            const auto d = t.to_dense();
            EXPECT_NEAR(dense_dot(d, d), std::ldexp(1.0, static_cast<int>(n)), 1e-12 * std::ldexp(1.0, static_cast<int>(n)));
            for (const auto &s : t.sites) EXPECT_NEAR(s[0] * s[0] + s[1] * s[1] + s[2] * s[2], 2.0, 1e-15);
        }
    }
}

TEST(FeatureMap, InputDimensionMismatchThrows) {
    const std::vector<double> x{0.1, 0.2};
    EXPECT_THROW(feature_map(EncodingMap::element_wise(3), x), ConfigError);
}

// ---------------------------------------------------------------- evaluation

TEST(CmpsEval, ConstantVectorGivesOne) {
    const std::size_t n = 5;
    std::vector<std::vector<cplx>> sites(n, std::vector<cplx>{1.0, 0.0, 0.0});
    const coeffs::CoefficientMps c(Mps::product(sites), {});
    for (double x : {-2.0, 0.0, 0.7, 3.0}) EXPECT_NEAR(evaluate(c, feature_map(EncodingMap::naive(n), x)), 1.0, 1e-15);
}

TEST(CmpsEval, SparsePauliTermMatchesTrigProduct) {
    const auto c = coeffs::sparse_pauli_coefficient_mps({{1, 2, 1}}, {1.0});
    const auto enc = EncodingMap::exponential(3, 3.0);
    for (double x : {kPi / 6, -0.4, 1.3}) {
        const double direct = std::cos(x) * std::sin(3 * x) * std::cos(9 * x);
        EXPECT_NEAR(evaluate(c, feature_map(enc, x)), 8.0 * direct, 1e-12);
    }
}

TEST(CmpsEval, RandomModelMatchesDenseDot) {
    const std::size_t n = 5;
    const auto enc = EncodingMap::exponential(n, 3.0);
    const auto p = init_cmps(n, 4, 17);
    const auto c = p.to_coefficients();
    const auto dense = c.to_dense();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int rep = 0; rep < 10; rep++) {
        const double x = u(rng);
        const auto t = feature_map(enc, x);
        const double ref = dense_dot(dense, t.to_dense());
        EXPECT_NEAR(evaluate(c, t), ref, 1e-10);
        const Eigen::MatrixXd xm = Eigen::MatrixXd::Constant(1, 1, x);
        EXPECT_NEAR(cmps_predict(p, FeatureBatch::build(enc, xm, std::vector<double>{0.0}))(0), ref, 1e-10);
    }
}

TEST(CmpsEval, LengthMismatchThrows) {
    const auto c = init_cmps(4, 2, 1).to_coefficients();
    EXPECT_THROW(evaluate(c, feature_map(EncodingMap::naive(3), 0.1)), std::invalid_argument);
}

// ---------------------------------------------------------------- gradients

TEST(CmpsGradient, VanishesOnRealizableTargetWithoutPenalty) {
    const auto enc = EncodingMap::element_wise(4);
    const auto target = init_cmps(4, 3, 8);
    const FeatureBatch b = batch_for(target, enc, uniform_inputs(40, 4, 1));
    const auto g = cmps_gradient(target, b, 0.0);
    EXPECT_LT(g.loss.mse, 1e-25);
    EXPECT_LT(g.grad.flatten().cwiseAbs().maxCoeff(), 1e-10);
}

TEST(CmpsGradient, MatchesCentralFiniteDifferences) {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> nd;
    for (std::size_t n : {1u, 2u, 3u, 5u}) {
        for (std::size_t chi : {1u, 2u, 3u}) {
            for (double lambda : {0.0, 1e-3}) {
                const auto enc = EncodingMap::exponential(n, 3.0);
                const Eigen::MatrixXd x = uniform_inputs(25, 1, 100 + n * 10 + chi);
                FeatureBatch b = FeatureBatch::build(enc, x, std::vector<double>(25, 0.0));
                for (Eigen::Index i = 0; i < b.y.size(); i++) b.y(i) = nd(rng);
                CmpsParams c = init_cmps(n, chi, n * 7 + chi, &b);
                const Eigen::VectorXd g = cmps_gradient(c, b, lambda).grad.flatten();
                const Eigen::VectorXd x0 = c.flatten();
                Eigen::VectorXd fd(x0.size());
                const double h = 1e-5;
                for (Eigen::Index j = 0; j < x0.size(); j++) {
                    Eigen::VectorXd xp = x0, xm = x0;
                    xp(j) += h;
                    xm(j) -= h;
                    c.assign(xp);
                    const double lp = cmps_loss(c, b, lambda).total();
                    c.assign(xm);
                    const double lm = cmps_loss(c, b, lambda).total();
                    fd(j) = (lp - lm) / (2 * h);
                }
                c.assign(x0);
                EXPECT_LT((g - fd).norm() / std::max(fd.norm(), 1e-300), 1e-5)
                    << "n=" << n << " chi=" << chi << " lambda=" << lambda;
            }
        }
    }
}

TEST(CmpsGradient, DirectionalDerivativeOfSingleCore) {
    const auto enc = EncodingMap::naive(4);
    const Eigen::MatrixXd x = uniform_inputs(30, 1, 4);
    FeatureBatch b = FeatureBatch::build(enc, x, std::vector<double>(30, 0.25));
    CmpsParams c = init_cmps(4, 3, 5, &b);
    std::mt19937_64 rng(6);
    std::normal_distribution<double> nd;
    CmpsParams v = c;
    for (auto &s : v.slices)
        for (auto &m : s) m.setZero();
    for (auto &m : v.slices[2])
        for (Eigen::Index i = 0; i < m.size(); i++) m.data()[i] = nd(rng);
    const double eps = 1e-5;
    const Eigen::VectorXd x0 = c.flatten(), dv = v.flatten();
    const double analytic = cmps_gradient(c, b, 1e-4).grad.flatten().dot(dv);
    c.assign(x0 + eps * dv);
    const double lp = cmps_loss(c, b, 1e-4).total();
    c.assign(x0 - eps * dv);
    const double lm = cmps_loss(c, b, 1e-4).total();
    EXPECT_NEAR(analytic, (lp - lm) / (2 * eps), 1e-6 * std::abs(analytic) + 1e-10);
}

TEST(CmpsGradient, PenaltyOnlyGradient) {
    const auto enc = EncodingMap::naive(3);
    const FeatureBatch b = FeatureBatch::build(enc, uniform_inputs(5, 1, 2), std::vector<double>(5, 1.0));
    CmpsParams c = init_cmps(3, 2, 9);
    const double lambda = 0.3;
    const auto g = cmps_gradient(c, b, lambda, 0.0);
    EXPECT_EQ(g.loss.mse, 0.0);
    EXPECT_NEAR(g.loss.reg, lambda * cmps_norm2(c), 1e-14);
    EXPECT_NEAR(cmps_norm2(c), std::pow(c.to_coefficients().norm(), 2), 1e-12);
    const Eigen::VectorXd x0 = c.flatten(), gv = g.grad.flatten();
    for (Eigen::Index j = 0; j < x0.size(); j++) {
        Eigen::VectorXd xp = x0, xm = x0;
        xp(j) += 1e-5;
        xm(j) -= 1e-5;
        c.assign(xp);
        const double lp = lambda * cmps_norm2(c);
        c.assign(xm);
        const double lm = lambda * cmps_norm2(c);
        EXPECT_NEAR(gv(j), (lp - lm) / 2e-5, 1e-8);
    }
}

TEST(CmpsGradient, TensorOverloadAndEmptyDataset) {
    const auto enc = EncodingMap::naive(3);
    const FeatureBatch b = FeatureBatch::build(enc, uniform_inputs(6, 1, 2), std::vector<double>(6, 0.5));
    const CmpsParams c = init_cmps(3, 2, 9);
    const auto tensors = cmps_gradient(c.to_coefficients(), b, 0.0);
    const auto ref = cmps_gradient(c, b, 0.0).grad;
    ASSERT_EQ(tensors.size(), 3u);
    for (std::size_t k = 0; k < 3; k++)
        for (std::size_t p = 0; p < 3; p++)
            EXPECT_NEAR(tensors[k]({0, p, 0}).real(), ref.slices[k][p](0, 0), 1e-15);
    const FeatureBatch empty = FeatureBatch::build(std::span<const FeatureMapState>(), std::span<const double>());
    EXPECT_THROW(cmps_gradient(c, empty, 0.0), std::invalid_argument);
}

// ---------------------------------------------------------------- initialization and training

TEST(CmpsInit, BondsCappedAndVarianceRescaled) {
    const auto enc = EncodingMap::exponential(8, 3.0);
    const FeatureBatch b = FeatureBatch::build(enc, uniform_inputs(200, 1, 3), std::vector<double>(200, 0.0));
    const CmpsParams c4 = init_cmps(8, 4, 1, &b);
    EXPECT_EQ(c4.bond_dims(), (std::vector<std::size_t>{3, 4, 4, 4, 4, 4, 3}));
    EXPECT_EQ(c4.parameter_count(), 282u);
    EXPECT_EQ(init_cmps(8, 8, 1).parameter_count(), 930u);
    EXPECT_EQ(init_cmps(3, 3, 1).parameter_count(), 45u);
    const Eigen::VectorXd f = cmps_predict(c4, b);
    EXPECT_NEAR((f.array() - f.mean()).square().mean(), 1.0, 1e-10);
}

TEST(CmpsTrain, FitsSelfRealizableTarget) {
    const auto enc = EncodingMap::naive(4);
    for (std::uint64_t seed = 1; seed <= 3; seed++) {
        const Eigen::MatrixXd x = uniform_inputs(200, 1, 11 + seed);
        const CmpsParams target = init_cmps(4, 2, 13 * seed);
        FeatureBatch b = batch_for(target, enc, x);
        b.y /= b.y.cwiseAbs().maxCoeff();
        TrainConfig cfg;
        cfg.seed = seed;
        const auto res = train_cmps(init_cmps(4, 2, 100 + seed, &b), b, cfg);
        ASSERT_EQ(res.trace.size(), cfg.epochs + 1);
        EXPECT_LT(res.trace.back().train_mse, 1e-3) << seed;
        EXPECT_LE(res.trace.back().train_mse, res.trace.front().train_mse);
        EXPECT_EQ(res.params.bond_dims(), (std::vector<std::size_t>{2, 2, 2}));
    }
}

TEST(CmpsTrain, ZeroTargetsDecreaseAfterTransient) {
    const auto enc = EncodingMap::naive(4);
    const FeatureBatch b = FeatureBatch::build(enc, uniform_inputs(50, 1, 12), std::vector<double>(50, 0.0));
    TrainConfig cfg;
    cfg.epochs = 200;
    const auto res = train_cmps(init_cmps(4, 3, 2, &b), b, cfg);
    // Adam overshoots briefly near small losses, so compare 10-epoch window means.
    auto window = [&](std::size_t start) {
        double s = 0.0;
        for (std::size_t e = start; e < start + 10; e++) s += res.trace[e].train_mse;
        return s / 10.0;
    };
    for (std::size_t w = 20; w + 10 <= res.trace.size(); w += 10) EXPECT_LT(window(w), window(w - 10)) << w;
    EXPECT_LT(res.trace.back().train_mse, 0.1 * res.trace.front().train_mse);
}

TEST(CmpsTrain, DeterministicPerSeed) {
    const auto enc = EncodingMap::exponential(5, 3.0);
    const Eigen::MatrixXd x = uniform_inputs(60, 1, 13);
    FeatureBatch b = FeatureBatch::build(enc, x, std::vector<double>(60, 0.0));
    for (Eigen::Index i = 0; i < b.y.size(); i++) b.y(i) = x(i, 0) > 0 ? 0.5 : -0.5;
    TrainConfig cfg;
    cfg.epochs = 40;
    cfg.lambda = 1e-4;
    const auto a = train_cmps(init_cmps(5, 3, 7, &b), b, cfg, &b);
    const auto c = train_cmps(init_cmps(5, 3, 7, &b), b, cfg, &b);
    ASSERT_EQ(a.trace.size(), c.trace.size());
    for (std::size_t e = 0; e < a.trace.size(); e++) {
        EXPECT_EQ(a.trace[e].train_mse, c.trace[e].train_mse);
        EXPECT_EQ(a.trace[e].test_mse, c.trace[e].test_mse);
        EXPECT_EQ(a.trace[e].reg_term, c.trace[e].reg_term);
    }
    const auto d = train_cmps(init_cmps(5, 3, 8, &b), b, cfg);
    EXPECT_NE(a.trace.back().train_mse, d.trace.back().train_mse);
}

TEST(CmpsTrain, NonFiniteLossAborts) {
    const auto enc = EncodingMap::naive(2);
    FeatureBatch b = FeatureBatch::build(enc, uniform_inputs(4, 1, 1), std::vector<double>(4, 0.0));
    b.y(2) = std::numeric_limits<double>::quiet_NaN();
    try {
        train_cmps(init_cmps(2, 2, 1), b, TrainConfig{});
        FAIL() << "expected TrainingDiverged";
    } catch (const TrainingDiverged &e) {
        EXPECT_EQ(e.epoch, 0u);
    }
}

TEST(CmpsTrain, ConfigValidation) {
    TrainConfig cfg;
    cfg.lambda = -1.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = TrainConfig{};
    cfg.epochs = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = TrainConfig{};
    cfg.lambda = 1e-5;
    cfg.seed = 42;
    const auto back = TrainConfig::from_json(cfg.to_json());
    EXPECT_EQ(back.lambda, 1e-5);
    EXPECT_EQ(back.seed, 42u);
    EXPECT_EQ(back.epochs, 500u);
}

// ---------------------------------------------------------------- kernels

TEST(ProductKernel, DiagonalAndAntipodalCases) {
    EXPECT_NEAR(product_kernel(EncodingMap::exponential(6, 3.0), 0.37, 0.37), 1.0, 1e-15);
    EXPECT_NEAR(product_kernel(EncodingMap::naive(1), 0.0, kPi), 0.0, 1e-15);
}

TEST(ProductKernel, MatchesFeatureInnerProduct) {
    const auto enc = EncodingMap::element_wise(6);
    const Eigen::MatrixXd x = uniform_inputs(10, 6, 14);
    const Eigen::MatrixXd k = product_kernel_matrix(enc, x, x);
    for (Eigen::Index i = 0; i < x.rows(); i++)
        for (Eigen::Index j = 0; j < x.rows(); j++) {
            const auto ti = feature_map(enc, row(x, i)).to_dense(), tj = feature_map(enc, row(x, j)).to_dense();
            EXPECT_NEAR(k(i, j) * 64.0, dense_dot(ti, tj), 1e-12);
            EXPECT_NEAR(k(i, j), product_kernel(enc, row(x, i), row(x, j)), 1e-15);
        }
}

TEST(QuantumKernel, DiagonalIsOne) {
    const auto c = EncodingCircuit::iqp(3);
    const std::vector<double> x{0.3, -1.2, 2.0};
    EXPECT_NEAR(quantum_kernel(c, x, x), 1.0, 1e-12);
}

TEST(QuantumKernel, ZRotationEqualsProductKernel) {
    const auto enc = EncodingMap::exponential(5, 3.0);
    const auto c = EncodingCircuit::z_rotation(enc);
    const Eigen::MatrixXd x = uniform_inputs(20, 1, 15);
    const Eigen::MatrixXd kq = quantum_kernel_matrix(c, x, x), kc = product_kernel_matrix(enc, x, x);
    EXPECT_LT((kq - kc).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(QuantumKernel, IqpMatchesDenseStateOracle) {
    const auto c = EncodingCircuit::iqp(3);
    std::mt19937_64 rng(16);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int rep = 0; rep < 5; rep++) {
        std::vector<double> a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)};
        const double ref = std::norm(iqp_dense_state(a, 2).dot(iqp_dense_state(b, 2)));
        EXPECT_NEAR(quantum_kernel(c, a, b), ref, 1e-10);
        EXPECT_NEAR(quantum_kernel(c, a, b), quantum_kernel(c, b, a), 1e-14);
    }
}

TEST(QuantumKernel, SizeLimit) {
    const auto c = EncodingCircuit::iqp(15);
    EXPECT_THROW(quantum_kernel(c, std::vector<double>(15, 0.0), std::vector<double>(15, 0.0)), ResourceLimitError);
}

TEST(Kernels, MatricesSymmetricPsdOnRandomDesigns) {
    const Eigen::MatrixXd x = uniform_inputs(50, 3, 17);
    const Eigen::MatrixXd kq = quantum_kernel_matrix(EncodingCircuit::iqp(3), x, x);
    const Eigen::MatrixXd kc = product_kernel_matrix(EncodingMap::iqp_vec(3), x, x);
    for (const auto *k : {&kq, &kc}) {
        EXPECT_LT((*k - k->transpose()).cwiseAbs().maxCoeff(), 1e-14);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(*k);
        EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8);
        EXPECT_LT((k->diagonal().array() - 1.0).abs().maxCoeff(), 1e-12);
    }
}

// ---------------------------------------------------------------- ridge regression

TEST(KernelRidge, OneByOne) {
    const auto sol = kernel_ridge(Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Constant(1, 2.0), 0.0);
    EXPECT_NEAR(sol.gamma(0), 2.0, 1e-15);
    EXPECT_EQ(sol.jitter, 0.0);
}

TEST(KernelRidge, ShrinksMonotonically) {
    const auto enc = EncodingMap::naive(3);
    const Eigen::MatrixXd x = uniform_inputs(8, 1, 18);
    const Eigen::MatrixXd k = product_kernel_matrix(enc, x, x);
    const Eigen::VectorXd y = x.col(0).array().sin();
    Eigen::VectorXd prev = kernel_ridge(k, y, 1.0).gamma.cwiseAbs();
    for (double lambda : {10.0, 100.0}) {
        const Eigen::VectorXd g = kernel_ridge(k, y, lambda).gamma.cwiseAbs();
        EXPECT_TRUE((g.array() <= prev.array()).all()) << lambda;
        prev = g;
    }
    EXPECT_LT(prev.maxCoeff(), 0.05);
}

TEST(KernelRidge, DuplicatePointClosedForm) {
    // Two copies of one point with targets a and b: K = ones(2, 2), gamma = (K + l I)^-1 y.
    const Eigen::MatrixXd k = Eigen::MatrixXd::Ones(2, 2);
    const Eigen::VectorXd y = Eigen::Vector2d(1.0, 3.0);
    const double l = 0.5;
    const auto sol = kernel_ridge(k, y, l);
    const double det = (1 + l) * (1 + l) - 1;
    EXPECT_NEAR(sol.gamma(0), ((1 + l) * 1.0 - 3.0) / det, 1e-14);
    EXPECT_NEAR(sol.gamma(1), ((1 + l) * 3.0 - 1.0) / det, 1e-14);
    const double pred = predict(sol, std::vector<double>{1.0, 1.0});
    EXPECT_GT(pred, 1.0);
    EXPECT_LT(pred, 3.0);
    EXPECT_NEAR(pred, 4.0 / (2 + l), 1e-14);
}

TEST(KernelRidge, RankDeficientWithoutPenaltyReportsRank) {
    const Eigen::MatrixXd k = Eigen::MatrixXd::Ones(3, 3);
    try {
        kernel_ridge(k, Eigen::Vector3d(1.0, 2.0, 3.0), 0.0);
        FAIL() << "expected SolverFailure";
    } catch (const SolverFailure &e) {
        EXPECT_EQ(e.rank, 1u);
        EXPECT_EQ(e.size, 3u);
    }
    // Consistent targets are solved with the diagonal jitter, which is reported.
    const auto sol = kernel_ridge(k, Eigen::Vector3d(1.0, 1.0, 1.0), 0.0);
    EXPECT_GT(sol.jitter, 0.0);
    EXPECT_NEAR(sol.gamma.sum(), 1.0, 1e-8);
}

TEST(KernelRidge, RejectsAsymmetricKernel) {
    Eigen::Matrix2d k;
    k << 1, 0.5, 0.2, 1;
    EXPECT_THROW(kernel_ridge(k, Eigen::Vector2d(1, 1), 0.1), ConfigError);
}

// ---------------------------------------------------------------- representer MPS

TEST(Representer, SinglePointIsBondOne) {
    const auto enc = EncodingMap::exponential(4, 3.0);
    const Eigen::MatrixXd x = Eigen::MatrixXd::Constant(1, 1, 0.4);
    const auto sol = fit_product_kernel(enc, x, Eigen::VectorXd::Constant(1, 0.8), 0.1);
    const auto c = representer_mps(sol, enc, x);
    EXPECT_EQ(c.max_bond(), 1u);
    for (double t : {-1.0, 0.2, 2.5})
        EXPECT_NEAR(evaluate(c, feature_map(enc, t)), sol.gamma(0) * product_kernel(enc, t, 0.4), 1e-14);
}

TEST(Representer, MatchesKernelPredictions) {
    const auto enc = EncodingMap::naive(4);
    const Eigen::MatrixXd x = uniform_inputs(3, 1, 19);
    const auto sol = fit_product_kernel(enc, x, Eigen::Vector3d(0.3, -0.2, 0.9), 1e-3);
    const auto c = representer_mps(sol, enc, x);
    EXPECT_LE(c.max_bond(), 3u);
    const Eigen::MatrixXd probe = uniform_inputs(100, 1, 20);
    const Eigen::VectorXd pred = predict(sol, kernel_rows(sol, probe));
    for (Eigen::Index i = 0; i < probe.rows(); i++)
        EXPECT_NEAR(evaluate(c, feature_map(enc, probe(i, 0))), pred(i), 1e-10);
}

TEST(Representer, ManyPointsBondBoundAndAccuracy) {
    const auto enc = EncodingMap::element_wise(5);
    const Eigen::MatrixXd x = uniform_inputs(40, 5, 21);
    const Eigen::VectorXd y = x.col(0).array().cos() * x.col(3).array().sin();
    const auto sol = fit_product_kernel(enc, x, y, 0.01);
    const auto c = representer_mps(sol, enc, x);
    EXPECT_LE(c.max_bond(), 40u);
    const Eigen::MatrixXd probe = uniform_inputs(100, 5, 22);
    const Eigen::VectorXd pred = predict(sol, kernel_rows(sol, probe));
    for (Eigen::Index i = 0; i < probe.rows(); i++)
        EXPECT_NEAR(evaluate(c, feature_map(enc, row(probe, i))), pred(i), 1e-9);
}

TEST(Representer, DuplicatedPointLeavesPredictionsUnchanged) {
    const auto enc = EncodingMap::exponential(3, 3.0);
    Eigen::MatrixXd x(3, 1);
    x << -1.0, 0.5, 2.0;
    const Eigen::Vector3d y(0.1, -0.4, 0.7);
    const auto base = fit_product_kernel(enc, x, y, 0.0);
    Eigen::MatrixXd x2(4, 1);
    x2 << -1.0, 0.5, 2.0, 0.5;
    const Eigen::Vector4d y2(0.1, -0.4, 0.7, -0.4);
    const auto dup = fit_product_kernel(enc, x2, y2, 0.0);
    const Eigen::MatrixXd probe = uniform_inputs(50, 1, 23);
    const Eigen::VectorXd a = predict(base, kernel_rows(base, probe)), b = predict(dup, kernel_rows(dup, probe));
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Representer, QuantumKernelSolutionRejected) {
    const auto c = EncodingCircuit::iqp(2);
    const Eigen::MatrixXd x = uniform_inputs(4, 2, 24);
    const auto sol = fit_quantum_kernel(c, x, Eigen::Vector4d(1, 2, 3, 4), 0.01);
    EXPECT_THROW(representer_mps(sol, EncodingMap::iqp_vec(2), x), ConfigError);
}

TEST(Representer, QuantumPredictorLiesInProductFeatureSpan) {
    // The two-qubit IQP state uses six phases; project the quantum ridge predictor onto the
    // 3^6 trigonometric features of those phases.
    const auto circ = EncodingCircuit::iqp(2);
    const auto enc = EncodingMap::zero_padded(EncodingMap::iqp_vec(2), {0, 1, 2, 3, 4, 5});
    const Eigen::MatrixXd xt = uniform_inputs(15, 2, 25, -1.5, 1.5);
    const Eigen::VectorXd yt = xt.col(0).array().sin() + xt.col(1).array().square();
    const auto sol = fit_quantum_kernel(circ, xt, yt, 0.01);

    const Eigen::MatrixXd xs = uniform_inputs(1200, 2, 26, -1.5, 1.5);
    const Eigen::VectorXd fs = predict(sol, kernel_rows(sol, xs));
    Eigen::MatrixXd phi(xs.rows(), 729);
    for (Eigen::Index i = 0; i < xs.rows(); i++) {
        const auto t = feature_map(enc, row(xs, i)).to_dense();
        for (Eigen::Index j = 0; j < 729; j++) phi(i, j) = t[j];
    }
    const Eigen::VectorXd coef = phi.completeOrthogonalDecomposition().solve(fs);
    std::vector<cplx> cvec(coef.data(), coef.data() + coef.size());
    const coeffs::CoefficientMps c(Mps::from_dense(cvec, std::vector<std::size_t>(6, 3)), {});
    EXPECT_LE(c.max_bond(), 27u);
    const Eigen::MatrixXd probe = uniform_inputs(100, 2, 27, -1.5, 1.5);
    const Eigen::VectorXd pred = predict(sol, kernel_rows(sol, probe));
    for (Eigen::Index i = 0; i < probe.rows(); i++)
        EXPECT_NEAR(evaluate(c, feature_map(enc, row(probe, i))), pred(i), 1e-8);
}

// ---------------------------------------------------------------- circuit models

TEST(Vqml, AdjointGradientMatchesFiniteDifferences) {
    for (auto structure : {circuits::Structure::SimpleParallel, circuits::Structure::ReUploading}) {
        const auto spec = structure == circuits::Structure::SimpleParallel
                              ? circuits::CircuitSpec::random_parallel(3, 2, 1, 0.0, EncodingMap::exponential(3, 3.0), 5)
                              : circuits::CircuitSpec::random_reuploading(2, 2, 1, 0.0, EncodingMap::naive(4), 6);
        const std::vector<double> x{0.7};
        Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec.param_count()));
        const double f = vqml_value_and_gradient(spec, x, g);
        EXPECT_NEAR(f, circuits::CircuitOracle(spec)(0.7), 1e-12);
        for (std::size_t j = 0; j < spec.param_count(); j++) {
            auto p = spec, m = spec;
            p.theta[j] += 1e-6;
            m.theta[j] -= 1e-6;
            EXPECT_NEAR(g(static_cast<Eigen::Index>(j)), (vqml_value(p, x) - vqml_value(m, x)) / 2e-6, 1e-8) << j;
        }
    }
}

TEST(Vqml, TrainingReducesLoss) {
    const auto spec = circuits::CircuitSpec::random_parallel(3, 2, 2, 0.0, EncodingMap::naive(3), 7);
    const Eigen::MatrixXd x = uniform_inputs(30, 1, 28);
    const Eigen::VectorXd y = 0.5 * x.col(0).array().sin();
    TrainConfig cfg;
    cfg.epochs = 60;
    cfg.learning_rate = 0.05;
    const auto res = train_vqml(spec, x, y, cfg, &x, &y);
    ASSERT_EQ(res.trace.size(), 61u);
    EXPECT_LT(res.trace.back().train_mse, 0.5 * res.trace.front().train_mse);
    EXPECT_NEAR(res.trace.back().test_mse, res.trace.back().train_mse, 1e-12);
    const auto again = train_vqml(spec, x, y, cfg);
    EXPECT_EQ(again.trace.back().train_mse, res.trace.back().train_mse);
}
