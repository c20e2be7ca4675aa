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

#ifndef VQTN_EXPERIMENTS_KERNEL_HPP
#define VQTN_EXPERIMENTS_KERNEL_HPP

#include "vqtn/datakit/generators.hpp"
#include "vqtn/experiments/common.hpp"
#include "vqtn/learn/kernels.hpp"

namespace vqtn::experiments {

struct KernelFit {
    std::string kernel;
    double train_mse = 0.0;
    double test_mse = 0.0;
    double min_eig = 0.0;
    double symmetry = 0.0;
    double jitter = 0.0;
    Eigen::MatrixXd k_train;
};

inline KernelFit fit_and_score(const std::string &name, const Eigen::MatrixXd &k_train, const Eigen::MatrixXd &k_test,
                               const datakit::Dataset &d, double lambda) {
    KernelFit f{name};
    const Eigen::VectorXd yt = d.train_targets(), ys = d.test_targets();
    const auto sol = learn::kernel_ridge(k_train, yt, lambda);
    f.train_mse = (learn::predict(sol, k_train) - yt).squaredNorm() / static_cast<double>(yt.size());
    f.test_mse = ys.size() ? (learn::predict(sol, k_test) - ys).squaredNorm() / static_cast<double>(ys.size()) : 0.0;
    f.symmetry = (k_train - k_train.transpose()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k_train, Eigen::EigenvaluesOnly);
    f.min_eig = es.eigenvalues().minCoeff();
    f.jitter = sol.jitter;
    f.k_train = k_train;
    return f;
}

/// Kernel ridge regression with K_q (IQP encoding circuit) and the basis-equivalent product kernel
/// K_c on circuit-relabelled PCA inputs, one row per (n, kernel, seed). A second pair on the same
/// inputs compares the simple-parallel Z-rotation circuit with its product kernel.
inline ExperimentResult run_kernel(const ExperimentConfig &cfg) {
    using C = ExperimentConfig;
    const auto ns = cfg.get<std::vector<std::size_t>>("N", {3, 4, 5});
    const auto lambda = cfg.get<double>("lambda", 0.01);
    const auto count = cfg.get<std::size_t>("count", 600);
    const auto n_train = cfg.get<std::size_t>("n_train", 500);
    const auto source = cfg.get<nlohmann::json>("source", {{"source", "synthetic"}});
    const auto layers = cfg.get<std::vector<std::size_t>>("L", {});
    const auto max_n = cfg.get<std::size_t>("max_n", 9);
    const bool export_matrices = cfg.get<bool>("export_matrices", false);
    if (!(lambda >= 0.0)) throw ConfigError("kernel: lambda must be non-negative");
    if (!layers.empty() && layers.size() != ns.size() && layers.size() != 1)
        throw ConfigError("kernel: L must hold one depth or one per N");
    for (std::size_t n : ns) {
        if (n < 1) throw ConfigError("kernel: N must be positive");
        if (n > max_n) throw ResourceLimitError("kernel: n = " + std::to_string(n) + " exceeds max_n = " + std::to_string(max_n));
    }
    struct Out {
        std::size_t n;
        std::uint64_t seed;
        std::vector<KernelFit> fits;
        double parallel_gap;
        nlohmann::json provenance;
    };
    const std::size_t s = cfg.seeds;
    auto outs = run_indexed(ns.size() * s, cfg.jobs, [&](std::size_t i) {
        const std::size_t n = ns[i / s];
        const std::uint64_t seed = cfg.seed + i % s;
        const std::size_t l = layers.empty() ? datakit::default_relabel_layers(n)
                                             : (layers.size() == 1 ? layers[0] : layers[i / s]);
        const auto base = datakit::fmnist_inputs(source, n, count, n_train, seed).data;
        const auto d = datakit::relabel_with_circuit(base, l, C::get_from<std::uint64_t>(cfg.params, "theta_seed", seed));
        const Eigen::MatrixXd xt = d.train_inputs(), xs = d.test_inputs();
        const auto circ = circuits::EncodingCircuit::iqp(n);
        const auto enc = circuits::EncodingMap::iqp_vec(n);
        Out o{n, seed, {}, 0.0, d.provenance};
        o.fits.push_back(fit_and_score("quantum_iqp", learn::quantum_kernel_matrix(circ, xt, xt),
                                       learn::quantum_kernel_matrix(circ, xs, xt), d, lambda));
        o.fits.push_back(fit_and_score("product_iqp", learn::product_kernel_matrix(enc, xt, xt),
                                       learn::product_kernel_matrix(enc, xs, xt), d, lambda));
        const auto zenc = circuits::EncodingMap::element_wise(n);
        const auto zcirc = circuits::EncodingCircuit::z_rotation(zenc);
        const Eigen::MatrixXd kq = learn::quantum_kernel_matrix(zcirc, xt, xt), kc = learn::product_kernel_matrix(zenc, xt, xt);
        o.parallel_gap = (kq - kc).cwiseAbs().maxCoeff();
        o.fits.push_back(fit_and_score("quantum_parallel", kq, learn::quantum_kernel_matrix(zcirc, xs, xt), d, lambda));
        o.fits.push_back(fit_and_score("product_parallel", kc, learn::product_kernel_matrix(zenc, xs, xt), d, lambda));
        return o;
    });
    ExperimentResult r;
    Table t{{"experiment_id", "n", "kernel", "seed", "lambda", "train_mse", "test_mse", "min_eig", "symmetry", "jitter"}, {}};
    nlohmann::json runs = nlohmann::json::array();
    for (const auto &o : outs) {
        const std::string id = fmt_id("kernel", {{"n", std::to_string(o.n)}});
        nlohmann::json fits = nlohmann::json::object();
        for (const auto &f : o.fits) {
            t.add({id, o.n, f.kernel, o.seed, lambda, f.train_mse, f.test_mse, f.min_eig, f.symmetry, f.jitter});
            fits[f.kernel] = {{"train_mse", f.train_mse}, {"test_mse", f.test_mse}, {"min_eig", f.min_eig}};
            if (export_matrices) {
                Table m{{"i", "j", "value"}, {}};
                for (Eigen::Index a = 0; a < f.k_train.rows(); a++)
                    for (Eigen::Index b = 0; b < f.k_train.cols(); b++) m.add({a, b, f.k_train(a, b)});
                r.tables[id + "_seed" + std::to_string(o.seed) + "_" + f.kernel] = std::move(m);
            }
        }
        runs.push_back({{"experiment_id", id}, {"n", o.n}, {"seed", o.seed}, {"fits", fits},
                        {"parallel_max_abs_diff", o.parallel_gap}, {"dataset", o.provenance}});
    }
    r.tables["kernel"] = std::move(t);
    r.summary = {{"command", "kernel"}, {"lambda", lambda}, {"runs", runs}};
    r.manifest["datasets"] = nlohmann::json::array();
    for (const auto &o : outs) r.manifest["datasets"].push_back(o.provenance);
    return r;
}

}  // namespace vqtn::experiments

#endif
