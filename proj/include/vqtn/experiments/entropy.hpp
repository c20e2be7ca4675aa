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

#ifndef VQTN_EXPERIMENTS_ENTROPY_HPP
#define VQTN_EXPERIMENTS_ENTROPY_HPP

#include "vqtn/analysis/entropy.hpp"
#include "vqtn/coeffs/builder.hpp"
#include "vqtn/experiments/common.hpp"

namespace vqtn::experiments {

/// One model family point of an entropy sweep.
struct EntropyPoint {
    std::string structure;  // "parallel" or "reuploading"
    std::size_t n_qubits = 0;
    std::size_t repeats = 1;  // encoding blocks; N = n_qubits * repeats
    std::size_t l1 = 0;
    std::size_t l2 = 0;  // parallel only; re-uploading uses l1 in every block
    double gamma = 0.0;

    std::size_t sites() const {
        return n_qubits * repeats;
    }
    std::string id() const {
        if (structure == "parallel")
            return fmt_id("parallel", {{"N", std::to_string(n_qubits)}, {"L", std::to_string(l1) + "-" + std::to_string(l2)}, {"g", num(gamma)}});
        return fmt_id("reuploading", {{"nq", std::to_string(n_qubits)}, {"R", std::to_string(repeats)}, {"L", std::to_string(l1)}, {"g", num(gamma)}});
    }
    std::size_t total_layers() const {
        return structure == "parallel" ? l1 + l2 : l1 * (repeats + 1);
    }
    circuits::CircuitSpec spec(std::uint64_t seed) const {
        if (structure == "parallel")
            return circuits::CircuitSpec::random_parallel(n_qubits, l1, l2, gamma, circuits::EncodingMap::naive(n_qubits), seed);
        return circuits::CircuitSpec::random_reuploading(n_qubits, repeats, l1, gamma, circuits::EncodingMap::naive(sites()), seed);
    }
};

struct EntropySample {
    std::size_t chi_q = 0;
    analysis::EntropyProfile profile;
};

inline EntropySample entropy_sample(const EntropyPoint &p, std::uint64_t seed) {
    const auto c = coeffs::to_coefficient_mps(p.spec(seed));
    return {analysis::effective_max_bond(c), analysis::renyi2_profile(c)};
}

/// Grid described by params:
///   mode "parallel": N x L x gamma with L1 = L2 = L;
///   mode "grid": N x L_total x gamma, every split L1 + L2 = L_total with both parts >= 1;
///   mode "reuploading": n_qubits x R x L x gamma.
inline std::vector<EntropyPoint> entropy_points(const ExperimentConfig &cfg) {
    const std::string mode = cfg.get<std::string>("mode", "parallel");
    const auto gammas = cfg.get<std::vector<double>>("gamma", {0.0});
    const auto max_n = cfg.get<std::size_t>("max_n", 12);
    std::vector<EntropyPoint> pts;
    if (mode == "parallel" || mode == "grid") {
        const auto ns = cfg.get<std::vector<std::size_t>>("N", {6});
        for (std::size_t n : ns)
            for (double g : gammas) {
                if (mode == "parallel") {
                    for (std::size_t l : cfg.get<std::vector<std::size_t>>("L", {1, 2, 3}))
                        pts.push_back({"parallel", n, 1, l, l, g});
                } else {
                    for (std::size_t t : cfg.get<std::vector<std::size_t>>("L_total", {8}))
                        for (std::size_t l1 = 1; l1 < t; l1++) pts.push_back({"parallel", n, 1, l1, t - l1, g});
                }
            }
    } else if (mode == "reuploading") {
        for (std::size_t nq : cfg.get<std::vector<std::size_t>>("n_qubits", {3}))
            for (std::size_t r : cfg.get<std::vector<std::size_t>>("R", {3}))
                for (std::size_t l : cfg.get<std::vector<std::size_t>>("L", {1, 2, 3}))
                    for (double g : gammas) pts.push_back({"reuploading", nq, r, l, l, g});
    } else {
        throw ConfigError("entropy: unknown mode '" + mode + "'");
    }
    for (const auto &p : pts) {
        if (p.sites() == 0 || p.n_qubits < 2) throw ConfigError("entropy: need at least two qubits");
        if (p.l1 == 0) throw ConfigError("entropy: layer counts must be positive");
        if (!(p.gamma >= 0.0 && p.gamma <= 1.0)) throw ConfigError("entropy: gamma must lie in [0, 1]");
        if (p.sites() > max_n)
            throw ResourceLimitError("entropy: N = " + std::to_string(p.sites()) + " exceeds the cap max_n = " +
                                     std::to_string(max_n));
    }
    return pts;
}

/// Per-seed entanglement profiles of C^q plus seed-averaged summaries with the qutrit Page reference.
inline ExperimentResult run_entropy(const ExperimentConfig &cfg) {
    const auto pts = entropy_points(cfg);
    const std::size_t s = cfg.seeds;
    const auto samples = run_indexed(pts.size() * s, cfg.jobs, [&](std::size_t i) {
        return entropy_sample(pts[i / s], cfg.seed + i % s);
    });
    ExperimentResult r;
    Table prof{{"experiment_id", "structure", "N", "L", "L2", "gamma", "seed", "k", "S2", "page"}, {}};
    Table bonds{{"experiment_id", "structure", "N", "L", "L2", "total_layers", "gamma", "seed", "chi_q", "S2max"}, {}};
    nlohmann::json groups = nlohmann::json::array();
    for (std::size_t p = 0; p < pts.size(); p++) {
        const auto &pt = pts[p];
        const std::size_t n = pt.sites();
        std::vector<double> smax, chis;
        std::vector<std::vector<double>> per_cut(n - 1);
        for (std::size_t j = 0; j < s; j++) {
            const auto &smp = samples[p * s + j];
            const std::uint64_t seed = cfg.seed + j;
            for (std::size_t k = 0; k + 1 < n; k++) {
                prof.add({pt.id(), pt.structure, n, pt.l1, pt.l2, pt.gamma, seed, k + 1, smp.profile.s2[k],
                          analysis::page_reference(n, k + 1)});
                per_cut[k].push_back(smp.profile.s2[k]);
            }
            bonds.add({pt.id(), pt.structure, n, pt.l1, pt.l2, pt.total_layers(), pt.gamma, seed, smp.chi_q, smp.profile.s2_max});
            smax.push_back(smp.profile.s2_max);
            chis.push_back(static_cast<double>(smp.chi_q));
        }
        nlohmann::json cuts = nlohmann::json::array();
        for (std::size_t k = 0; k + 1 < n; k++) {
            nlohmann::json c = summary_json(per_cut[k]);
            c["k"] = k + 1;
            c["page"] = analysis::page_reference(n, k + 1);
            cuts.push_back(c);
        }
        groups.push_back({{"experiment_id", pt.id()},
                          {"structure", pt.structure},
                          {"N", n},
                          {"L", pt.l1},
                          {"L2", pt.l2},
                          {"total_layers", pt.total_layers()},
                          {"gamma", pt.gamma},
                          {"S2max", summary_json(smax)},
                          {"chi_q", summary_json(chis)},
                          {"S2_by_cut", cuts}});
    }
    r.tables["entropy"] = std::move(prof);
    r.tables["bonds"] = std::move(bonds);
    r.summary = {{"command", "entropy"}, {"confidence", "0.95 normal approximation"}, {"groups", groups}};
    return r;
}

}  // namespace vqtn::experiments

#endif
