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

#ifndef VQTN_EXPERIMENTS_TRUNCATION_HPP
#define VQTN_EXPERIMENTS_TRUNCATION_HPP

#include "vqtn/analysis/entropy.hpp"
#include "vqtn/coeffs/builder.hpp"
#include "vqtn/experiments/common.hpp"

namespace vqtn::experiments {

/// eps_q(D) of unit-norm C^q for simple parallel models over N x L x gamma.
inline ExperimentResult run_truncation(const ExperimentConfig &cfg) {
    struct Point {
        std::size_t n, l;
        double gamma;
    };
    const auto ns = cfg.get<std::vector<std::size_t>>("N", {6, 8, 10});
    const auto ls = cfg.get<std::vector<std::size_t>>("L", {3, 10});
    const auto gs = cfg.get<std::vector<double>>("gamma", {0.0, 0.15});
    const auto ds = cfg.get<std::vector<std::size_t>>("D", {4, 8, 16, 32, 64});
    const auto max_n = cfg.get<std::size_t>("max_n", 12);
    std::vector<Point> pts;
    for (std::size_t n : ns)
        for (std::size_t l : ls)
            for (double g : gs) {
                if (n < 2 || l == 0) throw ConfigError("truncation: need N >= 2 and L >= 1");
                if (!(g >= 0.0 && g <= 1.0)) throw ConfigError("truncation: gamma must lie in [0, 1]");
                if (n > max_n) throw ResourceLimitError("truncation: N = " + std::to_string(n) + " exceeds max_n");
                pts.push_back({n, l, g});
            }
    for (std::size_t d : ds)
        if (d == 0) throw ConfigError("truncation: D must be positive");
    const std::size_t s = cfg.seeds;
    const auto curves = run_indexed(pts.size() * s, cfg.jobs, [&](std::size_t i) {
        const auto &p = pts[i / s];
        const auto spec = circuits::CircuitSpec::random_parallel(p.n, p.l, p.l, p.gamma, circuits::EncodingMap::naive(p.n),
                                                                 cfg.seed + i % s);
        return analysis::truncation_error_curve(coeffs::to_coefficient_mps(spec).normalized(), ds);
    });
    ExperimentResult r;
    Table t{{"experiment_id", "N", "L", "gamma", "seed", "D", "epsilon"}, {}};
    nlohmann::json groups = nlohmann::json::array();
    for (std::size_t p = 0; p < pts.size(); p++) {
        const auto &pt = pts[p];
        const std::string id = fmt_id("truncation", {{"N", std::to_string(pt.n)}, {"L", std::to_string(pt.l)}, {"g", num(pt.gamma)}});
        for (std::size_t di = 0; di < ds.size(); di++) {
            std::vector<double> eps;
            for (std::size_t j = 0; j < s; j++) {
                const double e = curves[p * s + j][di];
                t.add({id, pt.n, pt.l, pt.gamma, cfg.seed + j, ds[di], e});
                eps.push_back(e);
            }
            groups.push_back({{"experiment_id", id}, {"N", pt.n}, {"L", pt.l}, {"gamma", pt.gamma}, {"D", ds[di]},
                              {"epsilon", summary_json(eps)}});
        }
    }
    r.tables["truncation"] = std::move(t);
    r.summary = {{"command", "truncation"}, {"normalization", "unit-norm C^q"}, {"groups", groups}};
    return r;
}

}  // namespace vqtn::experiments

#endif
