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

#ifndef VQTN_DATAKIT_GENERATORS_HPP
#define VQTN_DATAKIT_GENERATORS_HPP

#include <numbers>

#include "vqtn/circuits/encoding_circuit.hpp"
#include "vqtn/circuits/gate_sequence.hpp"
#include "vqtn/datakit/dataset.hpp"
#include "vqtn/datakit/idx.hpp"
#include "vqtn/datakit/pca.hpp"
#include "vqtn/learn/cmps.hpp"
#include "vqtn/version.hpp"

namespace vqtn::datakit {

/// Target-circuit depth per input dimension n = 3..9, about 90 angles each.
inline std::size_t default_relabel_layers(std::size_t n) {
    static constexpr std::size_t layers[] = {10, 7, 6, 5, 4, 4, 3};
    if (n < 3 || n > 9) throw ConfigError("relabel: no default depth for n = " + std::to_string(n));
    return layers[n - 3];
}

inline double step_function(double x) {
    return x > 0.0 ? 0.5 : -0.5;
}

/// `m` points linearly spaced on [-pi, pi], labelled by the step function, split at random.
inline Dataset step_dataset(std::size_t m = 500, std::size_t n_train = 400, std::uint64_t seed = 0) {
    if (m < 2) throw ConfigError("step_dataset: need at least two points");
    Dataset d;
    d.inputs.resize(static_cast<Eigen::Index>(m), 1);
    d.targets.resize(static_cast<Eigen::Index>(m));
    const double pi = std::numbers::pi;
    for (std::size_t i = 0; i < m; i++) {
        const double x = -pi + 2.0 * pi * static_cast<double>(i) / static_cast<double>(m - 1);
        d.inputs(static_cast<Eigen::Index>(i), 0) = x;
        d.targets(static_cast<Eigen::Index>(i)) = step_function(x);
    }
    std::mt19937_64 rng(seed);
    std::tie(d.train, d.test) = random_split(m, n_train, rng);
    d.provenance = {{"generator", "step"},       {"m", m},
                    {"n_train", n_train},        {"seed", seed},
                    {"normalization", 1.0},      {"normalization_kind", "none"},
                    {"artifact_version", kArtifactVersion}};
    d.validate();
    return d;
}

struct FmnistInputs {
    Dataset data;  // targets are zero until relabelled
    PcaModel pca;
};

/// Picks `count` images at random, splits them, scales pixels to [0, 1], fits PCA on the
/// training images only and projects every image to `n` components.
inline FmnistInputs preprocess_fmnist(const IdxArray &images, std::size_t n, std::size_t count, std::size_t n_train,
                                      std::uint64_t seed) {
    if (images.dims.size() != 3) throw DataError("preprocess_fmnist: expected a 3-D image array");
    const std::size_t items = images.items(), pix = images.item_size();
    if (count > items) throw ConfigError("preprocess_fmnist: requested more images than the file holds");
    std::mt19937_64 rng(seed);
    auto [chosen, unused] = random_split(items, count, rng);
    (void)unused;
    Eigen::MatrixXd x(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(pix));
    for (std::size_t i = 0; i < count; i++)
        for (std::size_t p = 0; p < pix; p++)
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) = images.data[chosen[i] * pix + p] / 255.0;
    FmnistInputs out;
    std::tie(out.data.train, out.data.test) = random_split(count, n_train, rng);
    Eigen::MatrixXd xt(static_cast<Eigen::Index>(out.data.train.size()), x.cols());
    for (std::size_t i = 0; i < out.data.train.size(); i++) xt.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(out.data.train[i]));
    out.pca = fit_pca(xt, n);
    out.data.inputs = out.pca.transform(x);
    out.data.targets = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(count));
    out.data.provenance = {{"generator", "fmnist_pca"},
                           {"n", n},
                           {"count", count},
                           {"n_train", n_train},
                           {"seed", seed},
                           {"pca", {{"fit_on", "train"}, {"explained_variance", out.pca.explained_variance}}},
                           {"normalization", 1.0},
                           {"normalization_kind", "none"},
                           {"artifact_version", kArtifactVersion}};
    return out;
}

/// Image source described by JSON: {"source": "synthetic", "synthetic_count", "synthetic_seed"} or
/// {"source": "idx", "images": path, optional "sha256"}.
inline IdxArray load_images(const nlohmann::json &source) {
    const std::string kind = source.value("source", "synthetic");
    if (kind == "synthetic") {
        return synthetic_fashion_idx(source.value("synthetic_count", std::size_t{2000}),
                                     source.value("synthetic_seed", std::uint64_t{0}))
            .first;
    }
    if (kind == "idx") {
        const std::string path = source.at("images").get<std::string>();
        if (source.contains("sha256")) verify_checksums({{path, source.at("sha256").get<std::string>()}});
        return read_idx(std::filesystem::path(path));
    }
    throw ConfigError("unknown image source '" + kind + "'");
}

inline FmnistInputs fmnist_inputs(const nlohmann::json &source, std::size_t n, std::size_t count, std::size_t n_train,
                                  std::uint64_t seed) {
    FmnistInputs f = preprocess_fmnist(load_images(source), n, count, n_train, seed);
    f.data.provenance["source"] = source;
    return f;
}

/// Random chi-bond target with entries N(0, 1/(3 chi)).
inline learn::CmpsParams random_target_mps(std::size_t n, std::size_t chi, std::uint64_t seed) {
    return learn::init_cmps(n, chi, seed);
}

/// y_i = (target . T(x_i)) / K with K = max_i |target . T(x_i)| over every point, phi_a(x) = x_a.
inline Dataset relabel_with_mps(const Dataset &base, const learn::CmpsParams &target) {
    if (target.size() != base.dim()) throw ConfigError("relabel_with_mps: target length differs from the input dimension");
    const auto enc = circuits::EncodingMap::element_wise(base.dim());
    const learn::FeatureBatch b =
        learn::FeatureBatch::build(enc, base.inputs, std::vector<double>(base.size(), 0.0));
    const Eigen::VectorXd raw = learn::cmps_predict(target, b);
    const double k = raw.cwiseAbs().maxCoeff();
    if (!(k > 0.0)) throw NumericalError("relabel_with_mps: all raw labels are zero");
    Dataset d = base;
    d.targets = raw / k;
    const Eigen::VectorXd flat = target.flatten();
    const auto bonds = target.bond_dims();
    d.provenance["labels"] = {{"kind", "mps"},
                              {"chi", bonds.empty() ? std::size_t{1} : *std::max_element(bonds.begin(), bonds.end())},
                              {"bonds", bonds},
                              {"params", std::vector<double>(flat.data(), flat.data() + flat.size())}};
    d.provenance["normalization"] = k;
    d.provenance["normalization_kind"] = "max_abs";
    d.validate();
    return d;
}

/// Angles of the target circuit: uniform on [0, 2 pi) from one seeded stream.
inline std::vector<double> relabel_angles(std::size_t n, std::size_t layers, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    std::vector<double> t(3 * n * layers);
    for (auto &v : t) v = u(rng);
    return t;
}

/// <Z_1> after the two-repetition IQP encoding of x followed by `layers` hardware-efficient layers.
inline double relabel_circuit_value(std::span<const double> x, std::size_t layers, std::span<const double> theta) {
    const std::size_t n = x.size();
    const auto enc = circuits::EncodingCircuit::iqp(n);
    circuits::StateVector s = enc.state(x);
    s.apply(circuits::trainable_block(n, layers, theta, 0.0, circuits::Ansatz::HardwareEfficient));
    return s.expectation(circuits::PauliString::z_on(n, 0));
}

inline constexpr std::size_t kMaxRelabelQubits = 12;

/// y_i = f(x_i) / k with k the standard deviation (population) of the training-set raw labels.
inline Dataset relabel_with_circuit(const Dataset &base, std::size_t layers, std::uint64_t theta_seed) {
    const std::size_t n = base.dim();
    if (n > kMaxRelabelQubits) {
        throw ResourceLimitError("relabel_with_circuit: at most " + std::to_string(kMaxRelabelQubits) + " qubits");
    }
    if (base.train.size() < 2) throw ConfigError("relabel_with_circuit: need at least two training points");
    const auto theta = relabel_angles(n, layers, theta_seed);
    Eigen::VectorXd raw(static_cast<Eigen::Index>(base.size()));
    std::vector<double> x(n);
    for (std::size_t i = 0; i < base.size(); i++) {
        for (std::size_t j = 0; j < n; j++) x[j] = base.inputs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        raw(static_cast<Eigen::Index>(i)) = relabel_circuit_value(x, layers, theta);
    }
    Eigen::VectorXd tr(static_cast<Eigen::Index>(base.train.size()));
    for (std::size_t i = 0; i < base.train.size(); i++) tr(static_cast<Eigen::Index>(i)) = raw(static_cast<Eigen::Index>(base.train[i]));
    const double k = std::sqrt((tr.array() - tr.mean()).square().mean());
    if (!(k > 0.0)) throw NumericalError("relabel_with_circuit: training labels have zero spread");
    Dataset d = base;
    d.targets = raw / k;
    d.provenance["labels"] = {{"kind", "circuit"}, {"encoding", "iqp"}, {"reps", 2},     {"ansatz", "hea"},
                              {"layers", layers},  {"observable", "Z1"}, {"theta_seed", theta_seed}};
    d.provenance["normalization"] = k;
    d.provenance["normalization_kind"] = "train_std";
    d.validate();
    return d;
}

/// Rebuilds a dataset from its provenance record alone.
inline Dataset regenerate(const nlohmann::json &p) {
    const std::string gen = p.at("generator").get<std::string>();
    if (gen == "step") {
        return step_dataset(p.at("m").get<std::size_t>(), p.at("n_train").get<std::size_t>(), p.at("seed").get<std::uint64_t>());
    }
    if (gen != "fmnist_pca") throw ConfigError("regenerate: unknown generator '" + gen + "'");
    Dataset d = fmnist_inputs(p.at("source"), p.at("n").get<std::size_t>(), p.at("count").get<std::size_t>(),
                              p.at("n_train").get<std::size_t>(), p.at("seed").get<std::uint64_t>())
                    .data;
    if (!p.contains("labels")) return d;
    const auto &labels = p.at("labels");
    const std::string kind = labels.at("kind").get<std::string>();
    if (kind == "circuit") {
        return relabel_with_circuit(d, labels.at("layers").get<std::size_t>(), labels.at("theta_seed").get<std::uint64_t>());
    }
    if (kind == "mps") {
        const auto bonds = labels.at("bonds").get<std::vector<std::size_t>>();
        learn::CmpsParams t;
        t.slices.resize(d.dim());
        for (std::size_t k = 0; k < d.dim(); k++) {
            const auto l = static_cast<Eigen::Index>(k == 0 ? 1 : bonds.at(k - 1));
            const auto r = static_cast<Eigen::Index>(k + 1 == d.dim() ? 1 : bonds.at(k));
            for (auto &s : t.slices[k]) s.resize(l, r);
        }
        const auto flat = labels.at("params").get<std::vector<double>>();
        if (flat.size() != t.parameter_count()) throw ConfigError("regenerate: MPS parameter count mismatch");
        t.assign(Eigen::Map<const Eigen::VectorXd>(flat.data(), static_cast<Eigen::Index>(flat.size())));
        return relabel_with_mps(d, t);
    }
    throw ConfigError("regenerate: unknown label kind '" + kind + "'");
}

}  // namespace vqtn::datakit

#endif
