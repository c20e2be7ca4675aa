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

#ifndef VQTN_ANALYSIS_GRAM_HPP
#define VQTN_ANALYSIS_GRAM_HPP

#include <Eigen/Eigenvalues>
#include <map>
#include <numbers>
#include <random>
#include <variant>

#include "vqtn/learn/feature_map.hpp"

namespace vqtn::analysis {

/// Box domain, the same interval on every input coordinate.
struct Interval {
    double lo = -std::numbers::pi;
    double hi = std::numbers::pi;
};

/// Finite input set; every point has equal weight.
struct DiscreteSet {
    std::vector<std::vector<double>> points;
};

using Domain = std::variant<Interval, DiscreteSet>;

enum class GramMode { AnalyticFourier, Quadrature, Discrete };

/// Largest N for which a Gram matrix is assembled as a dense 3^N x 3^N array.
inline constexpr std::size_t kMaxDenseGramSites = 7;

/// G_ij = (1/|Omega|) int T_i T_j over the domain. Stored in one of three forms:
/// a Kronecker product of 3x3 site blocks, a dense matrix, or a weighted sum of
/// rank-one feature terms (quadrature nodes or discrete points).
class GramMatrix {
   public:
    enum class Form { Product, Dense, Sampled };

    static GramMatrix product(std::vector<Eigen::Matrix3d> sites, nlohmann::json meta) {
        GramMatrix g;
        g.form_ = Form::Product;
        g.n_ = sites.size();
        g.sites_ = std::move(sites);
        g.meta_ = std::move(meta);
        return g;
    }
    static GramMatrix dense(std::size_t n, Eigen::MatrixXd m, nlohmann::json meta) {
        GramMatrix g;
        g.form_ = Form::Dense;
        g.n_ = n;
        g.dense_ = std::move(m);
        g.meta_ = std::move(meta);
        return g;
    }
    static GramMatrix sampled(std::vector<learn::FeatureMapState> features, std::vector<double> weights,
                              nlohmann::json meta) {
        if (features.empty() || features.size() != weights.size())
            throw std::invalid_argument("GramMatrix::sampled: need matching non-empty node and weight lists");
        GramMatrix g;
        g.form_ = Form::Sampled;
        g.n_ = features.front().size();
        g.features_ = std::move(features);
        g.weights_ = std::move(weights);
        g.meta_ = std::move(meta);
        return g;
    }

    Form form() const {
        return form_;
    }
    std::size_t sites() const {
        return n_;
    }
    const nlohmann::json &metadata() const {
        return meta_;
    }
    const std::vector<Eigen::Matrix3d> &site_blocks() const {
        return sites_;
    }
    const std::vector<learn::FeatureMapState> &nodes() const {
        return features_;
    }
    const std::vector<double> &weights() const {
        return weights_;
    }

    Eigen::MatrixXd to_dense() const {
        if (n_ > kMaxDenseGramSites)
            throw ResourceLimitError("dense Gram matrix limited to N <= " + std::to_string(kMaxDenseGramSites));
        switch (form_) {
            case Form::Dense:
                return dense_;
            case Form::Product: {
                Eigen::MatrixXd g = Eigen::MatrixXd::Ones(1, 1);
                for (const auto &s : sites_) {
                    Eigen::MatrixXd next(g.rows() * 3, g.cols() * 3);
                    for (Eigen::Index i = 0; i < g.rows(); i++)
                        for (Eigen::Index j = 0; j < g.cols(); j++) next.block(3 * i, 3 * j, 3, 3) = g(i, j) * s;
                    g = std::move(next);
                }
                return g;
            }
            case Form::Sampled: {
                const Eigen::Index d = static_cast<Eigen::Index>(std::pow(3.0, static_cast<double>(n_)) + 0.5);
                Eigen::MatrixXd t(d, static_cast<Eigen::Index>(features_.size()));
                for (std::size_t m = 0; m < features_.size(); m++) {
                    const auto v = features_[m].to_dense();
                    t.col(static_cast<Eigen::Index>(m)) = Eigen::Map<const Eigen::VectorXd>(v.data(), d) * std::sqrt(weights_[m]);
                }
                return t * t.transpose();
            }
        }
        return {};
    }

    /// Number of eigenvalues above `rel` times the largest one.
    std::size_t rank(double rel = 1e-8) const {
        if (form_ == Form::Product) {
            std::size_t r = 1;
            for (const auto &s : sites_) r *= rank_of(s, rel);
            return r;
        }
        return rank_of(to_dense(), rel);
    }

    double frobenius_norm() const {
        switch (form_) {
            case Form::Product: {
                double f = 1.0;
                for (const auto &s : sites_) f *= s.norm();
                return f;
            }
            case Form::Dense:
                return dense_.norm();
            case Form::Sampled: {
                // ||sum_m w_m t_m t_m^T||_F^2 = sum_{m,m'} w_m w_m' (t_m . t_m')^2.
                double acc = 0.0;
                for (std::size_t a = 0; a < features_.size(); a++)
                    for (std::size_t b = 0; b < features_.size(); b++) {
                        double dot = 1.0;
                        for (std::size_t k = 0; k < n_; k++) {
                            const auto &u = features_[a].sites[k];
                            const auto &v = features_[b].sites[k];
                            dot *= u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
                        }
                        acc += weights_[a] * weights_[b] * dot * dot;
                    }
                return std::sqrt(acc);
            }
        }
        return 0.0;
    }

    /// <c|G|c> for a real coefficient MPS.
    double quadratic_form(const coeffs::CoefficientMps &c) const {
        if (c.size() != n_) throw std::invalid_argument("GramMatrix::quadratic_form: length mismatch");
        switch (form_) {
            case Form::Product: {
                const Mps m = mps_canonicalize(c.mps(), 0);
                Eigen::MatrixXd env = Eigen::MatrixXd::Ones(1, 1);
                for (std::size_t k = 0; k < n_; k++) {
                    const auto &core = m.core(k);
                    const Eigen::Index l = static_cast<Eigen::Index>(core.dim(0)), r = static_cast<Eigen::Index>(core.dim(2));
                    std::array<Eigen::MatrixXd, 3> a;
                    for (int p = 0; p < 3; p++) {
                        a[p].resize(l, r);
                        for (Eigen::Index i = 0; i < l; i++)
                            for (Eigen::Index j = 0; j < r; j++)
                                a[p](i, j) = core({static_cast<std::size_t>(i), static_cast<std::size_t>(p), static_cast<std::size_t>(j)}).real();
                    }
                    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(r, r);
                    for (int p = 0; p < 3; p++)
                        for (int q = 0; q < 3; q++)
                            if (sites_[k](p, q) != 0.0) next += sites_[k](p, q) * a[p].transpose() * env * a[q];
                    env = std::move(next);
                }
                return env(0, 0);
            }
            case Form::Dense: {
                const auto v = c.to_dense();
                Eigen::Map<const Eigen::VectorXd> x(v.data(), static_cast<Eigen::Index>(v.size()));
                return x.dot(dense_ * x);
            }
            case Form::Sampled: {
                double acc = 0.0;
                for (std::size_t m = 0; m < features_.size(); m++) {
                    const double f = learn::evaluate(c, features_[m]);
                    acc += weights_[m] * f * f;
                }
                return acc;
            }
        }
        return 0.0;
    }

    /// (a - b)^T G (a - b). Sampled forms subtract function values rather than tensors.
    double distance(const coeffs::CoefficientMps &a, const coeffs::CoefficientMps &b) const {
        if (form_ == Form::Sampled) {
            double acc = 0.0;
            for (std::size_t m = 0; m < features_.size(); m++) {
                const double f = learn::evaluate(a, features_[m]) - learn::evaluate(b, features_[m]);
                acc += weights_[m] * f * f;
            }
            return acc;
        }
        return quadratic_form(coeffs::CoefficientMps(mps_add(a.mps(), b.mps().scaled(-1.0)), {}));
    }

   private:
    template <typename M>
    static std::size_t rank_of(const M &g, double rel) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(g), Eigen::EigenvaluesOnly);
        const auto &ev = es.eigenvalues();
        const double top = ev.cwiseAbs().maxCoeff();
        std::size_t r = 0;
        for (Eigen::Index i = 0; i < ev.size(); i++) r += ev(i) > rel * top;
        return r;
    }

    Form form_ = Form::Dense;
    std::size_t n_ = 0;
    std::vector<Eigen::Matrix3d> sites_;
    Eigen::MatrixXd dense_;
    std::vector<learn::FeatureMapState> features_;
    std::vector<double> weights_;
    nlohmann::json meta_;
};

namespace detail {

inline std::vector<long> integer_frequencies(const circuits::EncodingMap &enc) {
    auto k = enc.linear_frequencies();
    if (!k || enc.input_dim() != 1)
        throw ConfigError("analytic Gram matrix needs a one-dimensional encoding with linear pre-processing");
    std::vector<long> out;
    for (double v : *k) {
        if (std::abs(v - std::round(v)) > 1e-12 || std::abs(v) > 1e15)
            throw ConfigError("analytic Gram matrix needs integer frequencies");
        out.push_back(std::lround(v));
    }
    return out;
}

/// True when distinct sign patterns s in {-1,0,1}^N never give the same sum s.k.
inline bool frequencies_collision_free(const std::vector<long> &k) {
    std::vector<long> sums{0};
    for (long f : k) {
        std::vector<long> next;
        next.reserve(sums.size() * 3);
        for (long s : sums) next.insert(next.end(), {s - f, s, s + f});
        sums = std::move(next);
    }
    std::sort(sums.begin(), sums.end());
    return std::adjacent_find(sums.begin(), sums.end()) == sums.end();
}

}  // namespace detail

/// Closed-form Gram matrix on [-pi, pi] for phi_alpha(x) = k_alpha x with integer k_alpha.
inline GramMatrix analytic_gram(const circuits::EncodingMap &enc) {
    const auto k = detail::integer_frequencies(enc);
    const std::size_t n = k.size();
    nlohmann::json meta{{"mode", "analytic_fourier"}, {"domain", {-std::numbers::pi, std::numbers::pi}}};
    if (detail::frequencies_collision_free(k)) {
        // Only the all-zero sign pattern survives integration, site by site.
        Eigen::Matrix3d s = Eigen::Vector3d(1.0, 0.5, 0.5).asDiagonal();
        meta["form"] = "product";
        return GramMatrix::product(std::vector<Eigen::Matrix3d>(n, s), meta);
    }
    if (n > kMaxDenseGramSites)
        throw ResourceLimitError("analytic Gram matrix with frequency collisions limited to N <= " +
                                 std::to_string(kMaxDenseGramSites));
    // Fourier coefficients of every basis function, then G = Re(F F^dagger).
    const std::size_t d = static_cast<std::size_t>(std::pow(3.0, static_cast<double>(n)) + 0.5);
    long fmax = 0;
    for (long f : k) fmax += std::abs(f);
    const Eigen::Index width = 2 * fmax + 1;
    Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), width);
    const cplx half(0.5, 0.0), mhalf_i(0.0, -0.5);
    for (std::size_t i = 0; i < d; i++) {
        std::map<long, cplx> terms{{0, 1.0}};
        std::size_t rest = i;
        std::vector<int> idx(n);
        for (std::size_t a = n; a-- > 0;) {
            idx[a] = static_cast<int>(rest % 3);
            rest /= 3;
        }
        for (std::size_t a = 0; a < n; a++) {
            if (idx[a] == 0) continue;
            // cos = (e^{ikx} + e^{-ikx}) / 2, sin = (e^{ikx} - e^{-ikx}) / 2i.
            const cplx cp = idx[a] == 1 ? half : mhalf_i, cm = idx[a] == 1 ? half : -mhalf_i;
            std::map<long, cplx> next;
            for (const auto &[m, v] : terms) {
                next[m + k[a]] += v * cp;
                next[m - k[a]] += v * cm;
            }
            terms = std::move(next);
        }
        for (const auto &[m, v] : terms) f(static_cast<Eigen::Index>(i), m + fmax) += v;
    }
    meta["form"] = "dense";
    return GramMatrix::dense(n, (f * f.adjoint()).real(), meta);
}

/// Numerical Gram matrix. One-dimensional integer-frequency encodings on an interval use the
/// composite trapezoid rule with 2 * 3^N + 1 nodes (more if the frequencies need it); other
/// encodings use Monte Carlo with `mc_samples` points. Discrete domains give the empirical Gram.
inline GramMatrix gram_matrix(const circuits::EncodingMap &enc, const Domain &omega, GramMode mode,
                              std::size_t mc_samples = 10000, std::uint64_t seed = 0) {
    if (mode == GramMode::AnalyticFourier) {
        const auto *iv = std::get_if<Interval>(&omega);
        if (!iv || std::abs(iv->lo + std::numbers::pi) > 1e-12 || std::abs(iv->hi - std::numbers::pi) > 1e-12)
            throw ConfigError("analytic Gram matrix is defined on [-pi, pi]");
        return analytic_gram(enc);
    }
    std::vector<learn::FeatureMapState> feats;
    std::vector<double> w;
    nlohmann::json meta;
    if (const auto *ds = std::get_if<DiscreteSet>(&omega)) {
        if (ds->points.empty()) throw ConfigError("discrete domain has no points");
        for (const auto &p : ds->points) feats.push_back(learn::feature_map(enc, p));
        w.assign(feats.size(), 1.0 / static_cast<double>(feats.size()));
        meta = {{"mode", "discrete"}, {"points", feats.size()}};
        return GramMatrix::sampled(std::move(feats), std::move(w), meta);
    }
    if (mode == GramMode::Discrete) throw ConfigError("discrete Gram mode needs a discrete domain");
    const Interval iv = std::get<Interval>(omega);
    if (!(iv.hi > iv.lo)) throw ConfigError("empty integration interval");
    const auto k = enc.linear_frequencies();
    bool integer = k.has_value() && enc.input_dim() == 1 && std::abs(iv.hi - iv.lo - 2 * std::numbers::pi) < 1e-12;
    double fmax = 0.0;
    if (integer)
        for (double v : *k) {
            integer = integer && std::abs(v - std::round(v)) < 1e-12;
            fmax += std::abs(v);
        }
    if (integer) {
        // Periodic integrands of degree <= 2 fmax: trapezoid with more than 2 fmax intervals is exact.
        const double base = 2.0 * std::pow(3.0, static_cast<double>(enc.size()));
        const std::size_t intervals = static_cast<std::size_t>(std::max(base, 2.0 * fmax + 1.0));
        const double h = (iv.hi - iv.lo) / static_cast<double>(intervals);
        for (std::size_t j = 0; j <= intervals; j++) {
            feats.push_back(learn::feature_map(enc, iv.lo + h * static_cast<double>(j)));
            w.push_back((j == 0 || j == intervals ? 0.5 : 1.0) / static_cast<double>(intervals));
        }
        meta = {{"mode", "quadrature"}, {"rule", "trapezoid"}, {"nodes", intervals + 1}, {"domain", {iv.lo, iv.hi}}};
        return GramMatrix::sampled(std::move(feats), std::move(w), meta);
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(iv.lo, iv.hi);
    for (std::size_t m = 0; m < mc_samples; m++) {
        std::vector<double> x(enc.input_dim());
        for (auto &v : x) v = u(rng);
        feats.push_back(learn::feature_map(enc, x));
    }
    w.assign(mc_samples, 1.0 / static_cast<double>(mc_samples));
    meta = {{"mode", "quadrature"}, {"rule", "monte_carlo"}, {"samples", mc_samples}, {"seed", seed},
            {"domain", {iv.lo, iv.hi}}};
    return GramMatrix::sampled(std::move(feats), std::move(w), meta);
}

struct FunctionDistance {
    double d = 0.0;           // <Delta|G|Delta>
    double coeff_dist = 0.0;  // ||Delta||^2
    double bound = 0.0;       // ||Delta||^2 ||G||_F
};

inline FunctionDistance function_distance(const coeffs::CoefficientMps &cq, const coeffs::CoefficientMps &cc,
                                          const GramMatrix &g) {
    if (cq.size() != cc.size() || cq.size() != g.sites())
        throw ConfigError("function_distance: coefficient lengths and Gram matrix disagree");
    const Mps delta = mps_add(cq.mps(), cc.mps().scaled(-1.0));
    // Canonical center norm; an inner product loses accuracy when Delta is small.
    const double nd = mps_canonicalize(delta, 0).core(0).norm();
    FunctionDistance out;
    out.d = g.distance(cq, cc);
    out.coeff_dist = nd * nd;
    out.bound = out.coeff_dist * g.frobenius_norm();
    return out;
}

}  // namespace vqtn::analysis

#endif
