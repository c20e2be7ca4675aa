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

#ifndef VQTN_EXPERIMENTS_HPP
#define VQTN_EXPERIMENTS_HPP

#include "vqtn/experiments/common.hpp"
#include "vqtn/experiments/entropy.hpp"
#include "vqtn/experiments/kernel.hpp"
#include "vqtn/experiments/regress.hpp"
#include "vqtn/experiments/truncation.hpp"

namespace vqtn::experiments {

inline ExperimentResult run(const ExperimentConfig &cfg) {
    if (cfg.command == "entropy") return run_entropy(cfg);
    if (cfg.command == "truncation") return run_truncation(cfg);
    if (cfg.command == "regress") return run_regress(cfg);
    if (cfg.command == "kernel") return run_kernel(cfg);
    throw ConfigError("unknown experiment '" + cfg.command + "'");
}

}  // namespace vqtn::experiments

#endif
