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

#ifndef VQTN_DATAKIT_PCA_HPP
#define VQTN_DATAKIT_PCA_HPP

#include <Eigen/Eigenvalues>

#include "vqtn/errors.hpp"

namespace vqtn::datakit {

struct PcaModel {
    Eigen::RowVectorXd mean;
    Eigen::MatrixXd components;  // d x n, orthonormal columns
    std::vector<double> explained_variance;  // descending, length n
    double total_variance = 0.0;

    Eigen::MatrixXd transform(const Eigen::MatrixXd &x) const {
        if (x.cols() != mean.size()) throw ConfigError("pca: input dimension differs from the fitted model");
        return (x.rowwise() - mean) * components;
    }
    Eigen::MatrixXd inverse_transform(const Eigen::MatrixXd &z) const {
        return (z * components.transpose()).rowwise() + mean;
    }
};

/// Principal components of the rows of `x` from the sample covariance.
inline PcaModel fit_pca(const Eigen::MatrixXd &x, std::size_t n) {
    const auto d = static_cast<std::size_t>(x.cols());
    if (x.rows() < 2) throw ConfigError("pca: need at least two samples");
    if (n == 0 || n > d) throw ConfigError("pca: component count must lie in [1, " + std::to_string(d) + "]");
    PcaModel m;
    m.mean = x.colwise().mean();
    const Eigen::MatrixXd c = x.rowwise() - m.mean;
    const Eigen::MatrixXd cov = (c.transpose() * c) / static_cast<double>(x.rows() - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success) throw NumericalError("pca: eigendecomposition failed");
    // Eigenvalues come out ascending.
    m.components.resize(x.cols(), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; k++) {
        const Eigen::Index src = static_cast<Eigen::Index>(d - 1 - k);
        Eigen::VectorXd v = es.eigenvectors().col(src);
        // Sign convention: largest-magnitude entry positive.
        Eigen::Index arg;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0) v = -v;
        m.components.col(static_cast<Eigen::Index>(k)) = v;
        m.explained_variance.push_back(std::max(es.eigenvalues()(src), 0.0));
    }
    m.total_variance = cov.trace();
    return m;
}

}  // namespace vqtn::datakit

#endif
