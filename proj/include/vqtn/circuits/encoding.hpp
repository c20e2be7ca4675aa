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

#ifndef VQTN_CIRCUITS_ENCODING_HPP
#define VQTN_CIRCUITS_ENCODING_HPP

#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "vqtn/errors.hpp"

namespace vqtn::circuits {

/// Pre-processing functions phi_alpha(x), one per encoding gate.
class EncodingMap {
   public:
    enum class Kind { Naive, Exponential, ElementWise, Iqp1d, IqpVec, ZeroPadded };

    /// phi_alpha(x) = x for every alpha; scalar input.
    static EncodingMap naive(std::size_t n) {
        return EncodingMap(Kind::Naive, n, 1);
    }
    /// phi_alpha(x) = base^alpha x, alpha = 0..n-1; scalar input.
    static EncodingMap exponential(std::size_t n, double base) {
        EncodingMap m(Kind::Exponential, n, 1);
        m.base_ = base;
        return m;
    }
    /// phi_alpha(x) = x_alpha.
    static EncodingMap element_wise(std::size_t d) {
        return EncodingMap(Kind::ElementWise, d, d);
    }
    /// First ceil(n/2) functions are x, the rest (pi - x)^2; scalar input.
    static EncodingMap iqp_1d(std::size_t n) {
        return EncodingMap(Kind::Iqp1d, n, 1);
    }
    /// Angles of the two-repetition IQP circuit on n_q qubits, zero padded to 2 n_q^2.
    /// Per repetition: x_1..x_n, then x_1 x_2, ..., x_{n-1} x_n.
    static EncodingMap iqp_vec(std::size_t n_qubits) {
        if (n_qubits == 0) {
            throw ConfigError("iqp_vec: need at least one qubit");
        }
        return EncodingMap(Kind::IqpVec, 2 * n_qubits * n_qubits, n_qubits);
    }
    /// Places the functions of `inner` into slots; a slot of -1 is the constant 0.
    static EncodingMap zero_padded(const EncodingMap &inner, std::vector<long> slots) {
        for (long s : slots) {
            if (s < -1 || s >= static_cast<long>(inner.size())) {
                throw ConfigError("zero_padded: slot index out of range");
            }
        }
        EncodingMap m(Kind::ZeroPadded, slots.size(), inner.input_dim());
        m.inner_ = std::make_shared<const EncodingMap>(inner);
        m.slots_ = std::move(slots);
        return m;
    }

    Kind kind() const {
        return kind_;
    }
    std::size_t size() const {
        return n_;
    }
    std::size_t input_dim() const {
        return input_dim_;
    }
    double base() const {
        return base_;
    }

    double operator()(std::size_t alpha, std::span<const double> x) const {
        if (alpha >= n_) {
            throw std::out_of_range("EncodingMap: index out of range");
        }
        if (x.size() != input_dim_) {
            throw ConfigError("EncodingMap: expected input of dimension " + std::to_string(input_dim_) + ", got " +
                              std::to_string(x.size()));
        }
        switch (kind_) {
            case Kind::Naive:
                return x[0];
            case Kind::Exponential:
                return std::pow(base_, static_cast<double>(alpha)) * x[0];
            case Kind::ElementWise:
                return x[alpha];
            case Kind::Iqp1d: {
                const std::size_t half = (n_ + 1) / 2;
                if (alpha < half) {
                    return x[0];
                }
                const double d = std::numbers::pi - x[0];
                return d * d;
            }
            case Kind::IqpVec: {
                const std::size_t n = input_dim_;
                const std::size_t per_rep = 2 * n - 1;
                if (alpha >= 2 * per_rep) {
                    return 0.0;
                }
                const std::size_t j = alpha % per_rep;
                return j < n ? x[j] : x[j - n] * x[j - n + 1];
            }
            case Kind::ZeroPadded: {
                const long s = slots_[alpha];
                return s < 0 ? 0.0 : (*inner_)(static_cast<std::size_t>(s), x);
            }
        }
        return 0.0;
    }

    std::vector<double> evaluate(std::span<const double> x) const {
        std::vector<double> out(n_);
        for (std::size_t a = 0; a < n_; a++) {
            out[a] = (*this)(a, x);
        }
        return out;
    }

    /// For scalar encodings of the form phi_alpha(x) = k_alpha x, the factors k_alpha.
    std::optional<std::vector<double>> linear_frequencies() const {
        std::vector<double> k(n_);
        switch (kind_) {
            case Kind::Naive:
                std::fill(k.begin(), k.end(), 1.0);
                return k;
            case Kind::Exponential:
                for (std::size_t a = 0; a < n_; a++) k[a] = std::pow(base_, static_cast<double>(a));
                return k;
            case Kind::ZeroPadded: {
                auto inner = inner_->linear_frequencies();
                if (!inner) return std::nullopt;
                for (std::size_t a = 0; a < n_; a++) k[a] = slots_[a] < 0 ? 0.0 : (*inner)[slots_[a]];
                return k;
            }
            default:
                return std::nullopt;
        }
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        switch (kind_) {
            case Kind::Naive:
                j = {{"kind", "naive"}, {"N", n_}};
                break;
            case Kind::Exponential:
                j = {{"kind", "exponential"}, {"N", n_}, {"base", base_}};
                break;
            case Kind::ElementWise:
                j = {{"kind", "element_wise"}, {"N", n_}};
                break;
            case Kind::Iqp1d:
                j = {{"kind", "iqp_1d"}, {"N", n_}};
                break;
            case Kind::IqpVec:
                j = {{"kind", "iqp_vec"}, {"n_qubits", input_dim_}};
                break;
            case Kind::ZeroPadded:
                j = {{"kind", "zero_padded"}, {"slots", slots_}, {"inner", inner_->to_json()}};
                break;
        }
        return j;
    }

    static EncodingMap from_json(const nlohmann::json &j) {
        try {
            const std::string kind = j.at("kind").get<std::string>();
            if (kind == "naive") return naive(j.at("N").get<std::size_t>());
            if (kind == "exponential") return exponential(j.at("N").get<std::size_t>(), j.value("base", 3.0));
            if (kind == "element_wise") return element_wise(j.at("N").get<std::size_t>());
            if (kind == "iqp_1d") return iqp_1d(j.at("N").get<std::size_t>());
            if (kind == "iqp_vec") return iqp_vec(j.at("n_qubits").get<std::size_t>());
            if (kind == "zero_padded")
                return zero_padded(from_json(j.at("inner")), j.at("slots").get<std::vector<long>>());
            throw ConfigError("unknown encoding kind '" + kind + "'");
        } catch (const nlohmann::json::exception &e) {
            throw ConfigError(std::string("malformed encoding: ") + e.what());
        }
    }

   private:
    EncodingMap(Kind kind, std::size_t n, std::size_t input_dim) : kind_(kind), n_(n), input_dim_(input_dim) {
        if (n == 0) {
            throw ConfigError("EncodingMap: need at least one encoding gate");
        }
    }

    Kind kind_;
    std::size_t n_;
    std::size_t input_dim_;
    double base_ = 3.0;
    std::shared_ptr<const EncodingMap> inner_;
    std::vector<long> slots_;
};

}  // namespace vqtn::circuits

#endif
