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

#ifndef VQTN_EXPERIMENTS_REGRESS_HPP
#define VQTN_EXPERIMENTS_REGRESS_HPP

#include <functional>

#include "vqtn/analysis/gram.hpp"
#include "vqtn/coeffs/builder.hpp"
#include "vqtn/datakit/generators.hpp"
#include "vqtn/experiments/common.hpp"
#include "vqtn/learn/train.hpp"
#include "vqtn/learn/vqml.hpp"

namespace vqtn::experiments {

/// Gram matrix on [-pi, pi] used to score function distances. Integer-frequency encodings get an
/// exact form: the site-product form when frequency sums never collide, else an equal-weight
/// periodic trapezoid with 2 * sum|k| + 1 nodes. Other encodings fall back to Monte Carlo.
inline analysis::GramMatrix function_gram(const circuits::EncodingMap &enc, std::size_t mc_samples = 4000,
                                          std::uint64_t seed = 0) {
    const auto k = enc.linear_frequencies();
    bool integer = k.has_value() && enc.input_dim() == 1;
    long fmax = 0;
    if (integer)
        for (double v : *k) {
            integer = integer && std::abs(v - std::round(v)) < 1e-12;
            fmax += std::lround(std::abs(v));
        }
    if (!integer) return analysis::gram_matrix(enc, analysis::Interval{}, analysis::GramMode::Quadrature, mc_samples, seed);
    std::vector<long> ki;
    for (double v : *k) ki.push_back(std::lround(v));
    if (analysis::detail::frequencies_collision_free(ki)) return analysis::analytic_gram(enc);
    const std::size_t nodes = static_cast<std::size_t>(2 * fmax + 1);
    std::vector<learn::FeatureMapState> feats;
    const double h = 2.0 * std::numbers::pi / static_cast<double>(nodes);
    for (std::size_t j = 0; j < nodes; j++) feats.push_back(learn::feature_map(enc, -std::numbers::pi + h * static_cast<double>(j)));
    return analysis::GramMatrix::sampled(std::move(feats), std::vector<double>(nodes, 1.0 / static_cast<double>(nodes)),
                                         {{"mode", "quadrature"}, {"rule", "periodic_trapezoid"}, {"nodes", nodes}});
}

inline Eigen::MatrixXd linspace_inputs(std::size_t m) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(m), 1);
    for (std::size_t i = 0; i < m; i++)
        x(static_cast<Eigen::Index>(i), 0) =
            m == 1 ? 0.0 : -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m - 1);
    return x;
}

/// Output of one training run inside `regress`.
struct RegressRun {
    Table trace{{"experiment_id", "task", "model", "size", "seed", "epoch", "train_mse", "test_mse", "reg_term"}, {}};
    Table distance{{"experiment_id", "chi", "seed", "epoch", "train_mse", "coeff_dist", "D"}, {}};
    nlohmann::json summary;
};

namespace detail {

inline void add_trace(RegressRun &out, const std::string &id, const std::string &task, const std::string &model,
                      std::size_t size, std::uint64_t seed, const std::vector<learn::EpochRecord> &trace) {
    for (const auto &e : trace) out.trace.add({id, task, model, size, seed, e.epoch, e.train_mse, e.test_mse, e.reg_term});
    const auto &last = trace.back();
    out.summary = {{"experiment_id", id}, {"task", task},         {"model", model},
                   {"size", size},        {"seed", seed},         {"final_train_mse", last.train_mse},
                   {"final_test_mse", std::isfinite(last.test_mse) ? nlohmann::json(last.test_mse) : nlohmann::json()}};
}

/// cMPS fit of f_Q = C^q . T(x) on M evenly spaced points, with |Delta|^2 and D along the way.
struct CircuitFitTask {
    std::string id;
    circuits::EncodingMap enc;
    coeffs::CoefficientMps target;
    learn::FeatureBatch batch;
    analysis::GramMatrix gram;
    std::size_t record_every = 1;
};

inline CircuitFitTask make_circuit_fit(const nlohmann::json &t, std::uint64_t base_seed) {
    using C = ExperimentConfig;
    const auto n = C::get_from<std::size_t>(t, "N", 6);
    const auto l = C::get_from<std::size_t>(t, "L", 10);
    const auto gamma = C::get_from<double>(t, "gamma", 0.0);
    const auto m = C::get_from<std::size_t>(t, "M", 1500);
    const auto target_seed = C::get_from<std::uint64_t>(t, "target_seed", base_seed);
    if (n < 2 || m < 2) throw ConfigError("circuit_fit task: need N >= 2 and M >= 2");
    if (n > C::get_from<std::size_t>(t, "max_n", 12)) throw ResourceLimitError("circuit_fit task: N exceeds max_n");
    CircuitFitTask f{"", encoding_from(t.value("encoding", nlohmann::json("exponential")), n), {}, {}, {}, 1};
    f.record_every = std::max<std::size_t>(1, C::get_from<std::size_t>(t, "record_every", 1));
    const auto spec = circuits::CircuitSpec::random_parallel(n, l, l, gamma, f.enc, target_seed);
    f.target = coeffs::to_coefficient_mps(spec).normalized();
    const Eigen::MatrixXd x = linspace_inputs(m);
    std::vector<double> y(m);
    std::vector<learn::FeatureMapState> feats;
    for (std::size_t i = 0; i < m; i++) {
        feats.push_back(learn::feature_map(f.enc, x(static_cast<Eigen::Index>(i), 0)));
        y[i] = learn::evaluate(f.target, feats.back());
    }
    f.batch = learn::FeatureBatch::build(feats, y);
    f.gram = function_gram(f.enc, C::get_from<std::size_t>(t, "mc_samples", 4000), target_seed);
    f.id = t.value("id", fmt_id("circuit_fit", {{"", f.enc.to_json().value("kind", "enc")}, {"N", std::to_string(n)},
                                           {"L", std::to_string(l)}, {"g", num(gamma)}, {"M", std::to_string(m)}}));
    return f;
}

inline RegressRun run_circuit_fit(const CircuitFitTask &f, std::size_t chi, std::uint64_t seed, const learn::TrainConfig &tc) {
    RegressRun out;
    const auto c0 = learn::init_cmps(f.target.size(), chi, seed, &f.batch);
    std::map<std::size_t, analysis::FunctionDistance> dist;
    auto observe = [&](std::size_t epoch, const learn::CmpsParams &p) {
        if (epoch % f.record_every == 0 || epoch == tc.epochs)
            dist[epoch] = analysis::function_distance(f.target, p.to_coefficients(), f.gram);
    };
    const auto res = learn::train_cmps(c0, f.batch, tc, nullptr, observe);
    add_trace(out, f.id, "circuit_fit", "cmps", chi, seed, res.trace);
    std::vector<double> cd, dd;
    for (const auto &e : res.trace) {
        auto it = dist.find(e.epoch);
        if (it == dist.end()) continue;
        out.distance.add({f.id, chi, seed, e.epoch, e.train_mse, it->second.coeff_dist, it->second.d});
        cd.push_back(it->second.coeff_dist);
        dd.push_back(it->second.d);
    }
    out.summary["final_coeff_dist"] = cd.back();
    out.summary["final_D"] = dd.back();
    out.summary["bound"] = dist.rbegin()->second.bound;
    out.summary["pearson_coeff_dist_D"] = cd.size() > 2 ? nlohmann::json(analysis::pearson(cd, dd)) : nlohmann::json();
    out.summary["gram"] = f.gram.metadata();
    return out;
}

struct SupervisedData {
    std::string id;
    std::string task;
    circuits::EncodingMap enc;
    datakit::Dataset data;
};

inline learn::FeatureBatch batch_of(const SupervisedData &d, const std::vector<std::size_t> &idx) {
    const Eigen::VectorXd y = d.data.values(idx);
    return learn::FeatureBatch::build(d.enc, d.data.rows(idx), std::vector<double>(y.data(), y.data() + y.size()));
}

inline RegressRun run_cmps(const SupervisedData &d, std::size_t chi, std::uint64_t seed, const learn::TrainConfig &tc) {
    RegressRun out;
    const auto train = batch_of(d, d.data.train), test = batch_of(d, d.data.test);
    const auto res = learn::train_cmps(learn::init_cmps(d.enc.size(), chi, seed, &train), train, tc, &test);
    add_trace(out, d.id, d.task, "cmps", chi, seed, res.trace);
    out.summary["parameters"] = res.params.parameter_count();
    return out;
}

inline RegressRun run_vqml(const SupervisedData &d, std::size_t layers, std::uint64_t seed, const learn::TrainConfig &tc) {
    RegressRun out;
    const std::size_t n = d.enc.size();
    const auto spec = circuits::CircuitSpec::random_parallel(n, layers, layers, 0.0, d.enc, seed);
    const Eigen::MatrixXd xt = d.data.train_inputs(), xs = d.data.test_inputs();
    const Eigen::VectorXd yt = d.data.train_targets(), ys = d.data.test_targets();
    const auto res = learn::train_vqml(spec, xt, yt, tc, &xs, &ys);
    add_trace(out, d.id, d.task, "vqml", layers, seed, res.trace);
    out.summary["parameters"] = spec.param_count();
    return out;
}

}  // namespace detail

/// Runs every entry of params["tasks"]. Task kinds:
///   "circuit_fit": cMPS (bond list "chi") fitted to a normalized circuit-derived C^q;
///   "step": step-function data, cMPS bonds "chi" and VQML depths "vqml_layers";
///   "fmnist_mps": PCA inputs relabelled by a random chi = 3 target, cMPS bonds "chi".
/// Each model is trained once per seed; params["training"] holds the optimizer settings.
inline ExperimentResult run_regress(const ExperimentConfig &cfg) {
    using C = ExperimentConfig;
    const learn::TrainConfig tc = learn::TrainConfig::from_json(cfg.get<nlohmann::json>("training", nlohmann::json::object()));
    const auto tasks = cfg.get<nlohmann::json>("tasks", nlohmann::json::array({{{"task", "step"}}}));
    if (!tasks.is_array() || tasks.empty()) throw ConfigError("regress: params.tasks must be a non-empty array");
    std::vector<std::function<RegressRun()>> jobs;
    std::vector<std::shared_ptr<const detail::CircuitFitTask>> circuit_fits;
    std::vector<std::shared_ptr<const detail::SupervisedData>> sets;
    for (const auto &t : tasks) {
        const std::string kind = C::get_from<std::string>(t, "task", "");
        if (kind == "circuit_fit") {
            auto f = std::make_shared<const detail::CircuitFitTask>(detail::make_circuit_fit(t, cfg.seed));
            for (std::size_t chi : C::get_from<std::vector<std::size_t>>(t, "chi", {4, 8}))
                for (std::size_t s = 0; s < cfg.seeds; s++)
                    jobs.push_back([f, chi, seed = cfg.seed + s, tc] { return detail::run_circuit_fit(*f, chi, seed, tc); });
        } else if (kind == "step" || kind == "fmnist_mps") {
            std::vector<std::shared_ptr<const detail::SupervisedData>> data;
            const auto data_seed = C::get_from<std::uint64_t>(t, "data_seed", cfg.seed);
            if (kind == "step") {
                const auto n = C::get_from<std::size_t>(t, "N", 8);
                const auto base = C::get_from<double>(t, "k", 3.0);
                const auto m = C::get_from<std::size_t>(t, "M", 500);
                detail::SupervisedData d{"", "step", circuits::EncodingMap::exponential(n, base),
                                         datakit::step_dataset(m, C::get_from<std::size_t>(t, "n_train", 400), data_seed)};
                d.id = t.value("id", fmt_id("step", {{"N", std::to_string(n)}, {"k", num(base)}}));
                data.push_back(std::make_shared<const detail::SupervisedData>(std::move(d)));
            } else {
                for (std::size_t n : C::get_from<std::vector<std::size_t>>(t, "n", {3, 4, 5})) {
                    auto f = datakit::fmnist_inputs(t.value("source", nlohmann::json{{"source", "synthetic"}}), n,
                                                    C::get_from<std::size_t>(t, "count", 600),
                                                    C::get_from<std::size_t>(t, "n_train", 500), data_seed);
                    const auto target = datakit::random_target_mps(n, C::get_from<std::size_t>(t, "target_chi", 3),
                                                                   C::get_from<std::uint64_t>(t, "target_seed", cfg.seed));
                    detail::SupervisedData d{fmt_id("fmnist_mps", {{"n", std::to_string(n)}}), "fmnist_mps",
                                             circuits::EncodingMap::element_wise(n), datakit::relabel_with_mps(f.data, target)};
                    data.push_back(std::make_shared<const detail::SupervisedData>(std::move(d)));
                }
            }
            for (const auto &d : data) {
                for (std::size_t chi : C::get_from<std::vector<std::size_t>>(t, "chi", {8}))
                    for (std::size_t s = 0; s < cfg.seeds; s++)
                        jobs.push_back([d, chi, seed = cfg.seed + s, tc] { return detail::run_cmps(*d, chi, seed, tc); });
                for (std::size_t l : C::get_from<std::vector<std::size_t>>(t, "vqml_layers", {}))
                    for (std::size_t s = 0; s < cfg.seeds; s++)
                        jobs.push_back([d, l, seed = cfg.seed + s, tc] { return detail::run_vqml(*d, l, seed, tc); });
            }
        } else {
            throw ConfigError("regress: unknown task '" + kind + "'");
        }
    }
    const auto runs = run_indexed(jobs.size(), cfg.jobs, [&](std::size_t i) { return jobs[i](); });
    ExperimentResult r;
    RegressRun merged;
    nlohmann::json finals = nlohmann::json::array();
    for (const auto &run : runs) {
        merged.trace.append(run.trace);
        merged.distance.append(run.distance);
        finals.push_back(run.summary);
    }
    r.tables["training"] = std::move(merged.trace);
    if (!merged.distance.rows.empty()) r.tables["distance"] = std::move(merged.distance);
    r.summary = {{"command", "regress"}, {"training", tc.to_json()}, {"runs", finals}};
    r.manifest["final_losses"] = finals;
    return r;
}

}  // namespace vqtn::experiments

#endif
