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

#ifndef VQTN_LEARN_CMPS_HPP
#define VQTN_LEARN_CMPS_HPP

#include <array>
#include <random>

#include "vqtn/learn/feature_map.hpp"

namespace vqtn::learn {

/// Feature vectors of a data set laid out per site: t[k] is M x 3 with rows T_k(x_i).
struct FeatureBatch {
    std::vector<Eigen::MatrixXd> t;
    Eigen::VectorXd y;

    std::size_t sites() const {
        return t.size();
    }
    std::size_t samples() const {
        return static_cast<std::size_t>(y.size());
    }

    static FeatureBatch build(std::span<const FeatureMapState> features, std::span<const double> targets) {
        if (features.size() != targets.size()) {
            throw std::invalid_argument("FeatureBatch: feature and target counts differ");
        }
        FeatureBatch b;
        const auto m = static_cast<Eigen::Index>(features.size());
        b.y = Eigen::Map<const Eigen::VectorXd>(targets.data(), m);
        const std::size_t n = features.empty() ? 0 : features.front().size();
        b.t.assign(n, Eigen::MatrixXd(m, 3));
        for (Eigen::Index i = 0; i < m; i++) {
            if (features[i].size() != n) throw std::invalid_argument("FeatureBatch: ragged feature lengths");
            for (std::size_t k = 0; k < n; k++)
                for (int p = 0; p < 3; p++) b.t[k](i, p) = features[i].sites[k][p];
        }
        return b;
    }

    /// Rows of `inputs` are data points.
    static FeatureBatch build(const circuits::EncodingMap &enc, const Eigen::MatrixXd &inputs,
                              std::span<const double> targets) {
        std::vector<FeatureMapState> f;
        f.reserve(static_cast<std::size_t>(inputs.rows()));
        std::vector<double> row(static_cast<std::size_t>(inputs.cols()));
        for (Eigen::Index i = 0; i < inputs.rows(); i++) {
            for (Eigen::Index j = 0; j < inputs.cols(); j++) row[j] = inputs(i, j);
            f.push_back(feature_map(enc, row));
        }
        return build(f, targets);
    }
};

/// Real parameters of a classical MPS model. slices[k][p] is the (left x right) matrix of site k
/// at physical index p.
struct CmpsParams {
    std::vector<std::array<Eigen::MatrixXd, 3>> slices;

    std::size_t size() const {
        return slices.size();
    }
    std::size_t left_dim(std::size_t k) const {
        return static_cast<std::size_t>(slices[k][0].rows());
    }
    std::size_t right_dim(std::size_t k) const {
        return static_cast<std::size_t>(slices[k][0].cols());
    }
    std::vector<std::size_t> bond_dims() const {
        std::vector<std::size_t> b;
        for (std::size_t k = 0; k + 1 < size(); k++) b.push_back(right_dim(k));
        return b;
    }
    std::size_t parameter_count() const {
        std::size_t c = 0;
        for (const auto &s : slices) c += 3 * static_cast<std::size_t>(s[0].size());
        return c;
    }

    Eigen::VectorXd flatten() const {
        Eigen::VectorXd v(static_cast<Eigen::Index>(parameter_count()));
        Eigen::Index o = 0;
        for (const auto &s : slices)
            for (const auto &m : s) {
                v.segment(o, m.size()) = m.reshaped();
                o += m.size();
            }
        return v;
    }

    void assign(const Eigen::VectorXd &v) {
        Eigen::Index o = 0;
        for (auto &s : slices)
            for (auto &m : s) {
                m.reshaped() = v.segment(o, m.size());
                o += m.size();
            }
    }

    static CmpsParams from_coefficients(const coeffs::CoefficientMps &c) {
        CmpsParams p;
        for (std::size_t k = 0; k < c.size(); k++) {
            const auto &core = c.mps().core(k);
            const auto l = static_cast<Eigen::Index>(core.dim(0)), r = static_cast<Eigen::Index>(core.dim(2));
            std::array<Eigen::MatrixXd, 3> s;
            for (int q = 0; q < 3; q++) {
                s[q].resize(l, r);
                for (Eigen::Index a = 0; a < l; a++)
                    for (Eigen::Index b = 0; b < r; b++)
                        s[q](a, b) = core({static_cast<std::size_t>(a), static_cast<std::size_t>(q),
                                           static_cast<std::size_t>(b)})
                                         .real();
            }
            p.slices.push_back(std::move(s));
        }
        return p;
    }

    coeffs::CoefficientMps to_coefficients(coeffs::Origin origin = {}) const {
        std::vector<DenseTensor> cores;
        for (std::size_t k = 0; k < size(); k++) {
            const std::size_t l = left_dim(k), r = right_dim(k);
            DenseTensor t({l, 3, r});
            for (std::size_t q = 0; q < 3; q++)
                for (std::size_t a = 0; a < l; a++)
                    for (std::size_t b = 0; b < r; b++)
                        t({a, q, b}) = slices[k][q](static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            cores.push_back(std::move(t));
        }
        return coeffs::CoefficientMps(Mps(std::move(cores)), std::move(origin));
    }
};

/// Bond dimensions min(chi, 3^k, 3^(N-k)) of an N-site model.
inline std::vector<std::size_t> capped_bonds(std::size_t n, std::size_t chi) {
    std::vector<std::size_t> b;
    for (std::size_t k = 1; k < n; k++) {
        std::size_t cap = 1;
        for (std::size_t j = 0; j < std::min(k, n - k) && cap < chi; j++) cap *= 3;
        b.push_back(std::min(chi, cap));
    }
    return b;
}

namespace detail {

// Row i of the result is env_i * A_k(x_i) with A_k(x) = sum_p t_p(x) slice_p.
inline Eigen::MatrixXd advance_left(const Eigen::MatrixXd &env, const std::array<Eigen::MatrixXd, 3> &s,
                                    const Eigen::MatrixXd &t) {
    Eigen::MatrixXd out = (env * s[0]).array().colwise() * t.col(0).array();
    for (int p = 1; p < 3; p++) out.array() += (env * s[p]).array().colwise() * t.col(p).array();
    return out;
}

inline Eigen::MatrixXd advance_right(const Eigen::MatrixXd &env, const std::array<Eigen::MatrixXd, 3> &s,
                                     const Eigen::MatrixXd &t) {
    Eigen::MatrixXd out = (env * s[0].transpose()).array().colwise() * t.col(0).array();
    for (int p = 1; p < 3; p++) out.array() += (env * s[p].transpose()).array().colwise() * t.col(p).array();
    return out;
}

}  // namespace detail

/// Model outputs C . T(x_i) for every row of the batch.
inline Eigen::VectorXd cmps_predict(const CmpsParams &c, const FeatureBatch &b) {
    if (c.size() != b.sites()) {
        throw std::invalid_argument("cmps_predict: model and feature lengths differ");
    }
    Eigen::MatrixXd env = Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(b.samples()), 1);
    for (std::size_t k = 0; k < c.size(); k++) env = detail::advance_left(env, c.slices[k], b.t[k]);
    return env.col(0);
}

/// Squared two-norm of the coefficient vector.
inline double cmps_norm2(const CmpsParams &c) {
    Eigen::MatrixXd e = Eigen::MatrixXd::Ones(1, 1);
    for (const auto &s : c.slices) {
        Eigen::MatrixXd next = s[0].transpose() * e * s[0];
        for (int p = 1; p < 3; p++) next += s[p].transpose() * e * s[p];
        e = std::move(next);
    }
    return e(0, 0);
}

struct CmpsLoss {
    double mse = 0.0;
    double reg = 0.0;  // lambda * |C|^2
    double total() const {
        return mse + reg;
    }
};

inline CmpsLoss cmps_loss(const CmpsParams &c, const FeatureBatch &b, double lambda) {
    if (b.samples() == 0) throw std::invalid_argument("cmps_loss: empty dataset");
    const Eigen::VectorXd r = cmps_predict(c, b) - b.y;
    return {r.squaredNorm() / static_cast<double>(b.samples()), lambda * cmps_norm2(c)};
}

struct CmpsGradient {
    CmpsLoss loss;
    CmpsParams grad;
};

/// Gradient of mse_weight * (1/M) sum_i (f(x_i) - y_i)^2 + lambda |C|^2 with respect to every
/// core entry, from cached left and right environments.
inline CmpsGradient cmps_gradient(const CmpsParams &c, const FeatureBatch &b, double lambda, double mse_weight = 1.0) {
    const std::size_t n = c.size();
    if (b.samples() == 0) throw std::invalid_argument("cmps_gradient: empty dataset");
    if (n != b.sites()) throw std::invalid_argument("cmps_gradient: model and feature lengths differ");
    const auto m = static_cast<Eigen::Index>(b.samples());

    std::vector<Eigen::MatrixXd> left(n), right(n);
    left[0] = Eigen::MatrixXd::Ones(m, 1);
    for (std::size_t k = 0; k + 1 < n; k++) left[k + 1] = detail::advance_left(left[k], c.slices[k], b.t[k]);
    right[n - 1] = Eigen::MatrixXd::Ones(m, 1);
    for (std::size_t k = n - 1; k > 0; k--) right[k - 1] = detail::advance_right(right[k], c.slices[k], b.t[k]);

    const Eigen::VectorXd f = detail::advance_left(left[n - 1], c.slices[n - 1], b.t[n - 1]).col(0);
    const Eigen::VectorXd res = f - b.y;
    const Eigen::VectorXd w = (2.0 * mse_weight / static_cast<double>(m)) * res;

    // Norm environments for the penalty.
    std::vector<Eigen::MatrixXd> nl(n), nr(n);
    nl[0] = Eigen::MatrixXd::Ones(1, 1);
    for (std::size_t k = 0; k + 1 < n; k++) {
        const auto &s = c.slices[k];
        nl[k + 1] = s[0].transpose() * nl[k] * s[0] + s[1].transpose() * nl[k] * s[1] + s[2].transpose() * nl[k] * s[2];
    }
    nr[n - 1] = Eigen::MatrixXd::Ones(1, 1);
    for (std::size_t k = n - 1; k > 0; k--) {
        const auto &s = c.slices[k];
        nr[k - 1] = s[0] * nr[k] * s[0].transpose() + s[1] * nr[k] * s[1].transpose() + s[2] * nr[k] * s[2].transpose();
    }

    CmpsGradient out;
    out.loss.mse = mse_weight * res.squaredNorm() / static_cast<double>(m);
    double norm2 = 0.0;
    for (int p = 0; p < 3; p++) norm2 += (nl[0] * c.slices[0][p] * nr[0] * c.slices[0][p].transpose()).trace();
    out.loss.reg = lambda * norm2;
    out.grad.slices.resize(n);
    for (std::size_t k = 0; k < n; k++) {
        for (int p = 0; p < 3; p++) {
            const Eigen::VectorXd wp = w.cwiseProduct(b.t[k].col(p));
            Eigen::MatrixXd g = left[k].transpose() * wp.asDiagonal() * right[k];
            if (lambda != 0.0) g += 2.0 * lambda * nl[k] * c.slices[k][p] * nr[k];
            out.grad.slices[k][p] = std::move(g);
        }
    }
    return out;
}

/// Per-core gradient tensors (left, 3, right) of the regularized loss for a coefficient MPS.
inline std::vector<DenseTensor> cmps_gradient(const coeffs::CoefficientMps &c, const FeatureBatch &b, double lambda) {
    const auto g = cmps_gradient(CmpsParams::from_coefficients(c), b, lambda);
    const coeffs::CoefficientMps as_mps = g.grad.to_coefficients();
    return as_mps.mps().cores();
}

/// Random model: entries i.i.d. normal with standard deviation (3 chi)^(-1/2), bonds capped by
/// the full rank of each cut. With `rescale_on`, the whole vector is scaled so the model outputs
/// on that batch have unit empirical variance.
inline CmpsParams init_cmps(std::size_t n, std::size_t chi, std::uint64_t seed, const FeatureBatch *rescale_on = nullptr) {
    if (n == 0 || chi == 0) throw ConfigError("init_cmps: sites and bond dimension must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0 / std::sqrt(3.0 * static_cast<double>(chi)));
    const auto bonds = capped_bonds(n, chi);
    CmpsParams c;
    c.slices.resize(n);
    for (std::size_t k = 0; k < n; k++) {
        const auto l = static_cast<Eigen::Index>(k == 0 ? 1 : bonds[k - 1]);
        const auto r = static_cast<Eigen::Index>(k + 1 == n ? 1 : bonds[k]);
        for (auto &s : c.slices[k]) {
            s.resize(l, r);
            for (Eigen::Index j = 0; j < r; j++)
                for (Eigen::Index i = 0; i < l; i++) s(i, j) = nd(rng);
        }
    }
    if (rescale_on != nullptr && rescale_on->samples() > 1) {
        const Eigen::VectorXd f = cmps_predict(c, *rescale_on);
        const double var = (f.array() - f.mean()).square().mean();
        if (var > 0.0 && std::isfinite(var)) {
            const double per_core = std::pow(var, -0.5 / static_cast<double>(n));
            for (auto &s : c.slices)
                for (auto &m : s) m *= per_core;
        }
    }
    return c;
}

}  // namespace vqtn::learn

#endif
