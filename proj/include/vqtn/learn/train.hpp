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

#ifndef VQTN_LEARN_TRAIN_HPP
#define VQTN_LEARN_TRAIN_HPP

#include <functional>
#include <limits>
#include <optional>

#include "json.hpp"
#include "vqtn/learn/cmps.hpp"

namespace vqtn::learn {

struct TrainConfig {
    double learning_rate = 0.01;
    std::size_t epochs = 500;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double lambda = 0.0;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(lambda >= 0.0)) throw ConfigError("train config: lambda must be non-negative");
        if (epochs < 1) throw ConfigError("train config: epochs must be at least 1");
        if (!(learning_rate > 0.0)) throw ConfigError("train config: learning rate must be positive");
        if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0))
            throw ConfigError("train config: Adam moments must lie in [0, 1)");
    }

    nlohmann::json to_json() const {
        return {{"learning_rate", learning_rate}, {"epochs", epochs}, {"beta1", beta1}, {"beta2", beta2},
                {"epsilon", epsilon},             {"lambda", lambda}, {"seed", seed},   {"batch", "full"}};
    }

    static TrainConfig from_json(const nlohmann::json &j) {
        TrainConfig c;
        c.learning_rate = j.value("learning_rate", c.learning_rate);
        c.epochs = j.value("epochs", c.epochs);
        c.beta1 = j.value("beta1", c.beta1);
        c.beta2 = j.value("beta2", c.beta2);
        c.epsilon = j.value("epsilon", c.epsilon);
        c.lambda = j.value("lambda", c.lambda);
        c.seed = j.value("seed", c.seed);
        c.validate();
        return c;
    }
};

/// Adam on a flat parameter vector.
class Adam {
   public:
    Adam(std::size_t n, const TrainConfig &cfg)
        : cfg_(cfg), m_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))), v_(m_) {
    }

    void step(Eigen::VectorXd &x, const Eigen::VectorXd &g) {
        t_++;
        m_ = cfg_.beta1 * m_ + (1.0 - cfg_.beta1) * g;
        v_ = cfg_.beta2 * v_ + (1.0 - cfg_.beta2) * g.cwiseAbs2();
        const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
        x.array() -= cfg_.learning_rate * (m_.array() / c1) / ((v_.array() / c2).sqrt() + cfg_.epsilon);
    }

    std::size_t steps() const {
        return t_;
    }

   private:
    TrainConfig cfg_;
    Eigen::VectorXd m_, v_;
    std::size_t t_ = 0;
};

/// One row of a loss trace. Epoch 0 is the initial model; `test_mse` is NaN without a test set.
struct EpochRecord {
    std::size_t epoch = 0;
    double train_mse = 0.0;
    double test_mse = std::numeric_limits<double>::quiet_NaN();
    double reg_term = 0.0;
};

struct CmpsTrainResult {
    CmpsParams params;
    std::vector<EpochRecord> trace;
};

inline void check_finite(std::size_t epoch, double loss, const Eigen::VectorXd &g) {
    if (!std::isfinite(loss)) throw TrainingDiverged(epoch, "loss is " + std::to_string(loss));
    if (!g.allFinite()) throw TrainingDiverged(epoch, "gradient has non-finite entries");
}

/// Full-batch Adam on the regularized loss. The bond dimensions of `c0` are kept fixed.
/// Called with (epoch, params) before each update and once after the last one.
using CmpsObserver = std::function<void(std::size_t, const CmpsParams &)>;

inline CmpsTrainResult train_cmps(const CmpsParams &c0, const FeatureBatch &train, const TrainConfig &cfg,
                                  const FeatureBatch *test = nullptr, const CmpsObserver &observe = {}) {
    cfg.validate();
    CmpsTrainResult out{c0, {}};
    Adam opt(c0.parameter_count(), cfg);
    Eigen::VectorXd x = c0.flatten();
    auto record = [&](std::size_t epoch, const CmpsLoss &l) {
        EpochRecord r{epoch, l.mse, std::numeric_limits<double>::quiet_NaN(), l.reg};
        if (test != nullptr && test->samples() > 0) r.test_mse = cmps_loss(out.params, *test, 0.0).mse;
        out.trace.push_back(r);
        if (observe) observe(epoch, out.params);
    };
    for (std::size_t e = 0; e < cfg.epochs; e++) {
        const CmpsGradient g = cmps_gradient(out.params, train, cfg.lambda);
        const Eigen::VectorXd gv = g.grad.flatten();
        check_finite(e, g.loss.total(), gv);
        record(e, g.loss);
        opt.step(x, gv);
        out.params.assign(x);
    }
    const CmpsLoss last = cmps_loss(out.params, train, cfg.lambda);
    if (!std::isfinite(last.total())) throw TrainingDiverged(cfg.epochs, "final loss is not finite");
    record(cfg.epochs, last);
    return out;
}

}  // namespace vqtn::learn

#endif
