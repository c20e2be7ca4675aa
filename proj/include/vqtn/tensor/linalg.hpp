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

#ifndef VQTN_TENSOR_LINALG_HPP
#define VQTN_TENSOR_LINALG_HPP

#include <Eigen/QR>
#include <Eigen/SVD>
#include <complex>
#include <limits>
#include <optional>


#include "vqtn/tensor/dense_tensor.hpp"

namespace vqtn {

/// Truncation rule for an SVD. Singular values are kept while they exceed
/// `cutoff` (or `cutoff * s_max` when `relative`) and the count stays within `max_bond`.
struct SvdOptions {
    std::optional<std::size_t> max_bond;
    double cutoff = 0.0;
    bool relative = false;

    static SvdOptions exact(double rel_cutoff = 1e-12) {
        return SvdOptions{std::nullopt, rel_cutoff, true};
    }
    static SvdOptions bond(std::size_t d) {
        return SvdOptions{d, 0.0, false};
    }
};

struct MatrixSvd {
    RowMatrixXcd u;        // m x k
    std::vector<double> s;  // k, descending
    RowMatrixXcd vh;       // k x n
    std::vector<double> discarded;
};

inline std::size_t kept_count(const std::vector<double> &s, const SvdOptions &opts) {
    const double smax = s.empty() ? 0.0 : s.front();
    const double thr = opts.relative ? opts.cutoff * smax : opts.cutoff;
    std::size_t k = 0;
    while (k < s.size() && s[k] > thr) {
        k++;
    }
    if (opts.max_bond) {
        k = std::min(k, *opts.max_bond);
    }
    // A bond of zero width is not representable; keep the leading vector of a null matrix.
    return std::max<std::size_t>(k, 1);
}

template <typename Derived>
bool is_real_valued(const Eigen::MatrixBase<Derived> &m) {
    for (Eigen::Index c = 0; c < m.cols(); c++)
        for (Eigen::Index r = 0; r < m.rows(); r++)
            if (std::imag(m(r, c)) != 0.0) return false;
    return true;
}

namespace detail {

// Thin SVD by one-sided Jacobi with a column-pivoted QR preconditioner. Eigen 3.4.0's
// divide-and-conquer SVD trips an internal index assertion in its deflation step on some
// degenerate operator unfoldings, and Jacobi costs only about 20% more at our sizes.
template <typename M>
void thin_svd(const M &a, std::vector<double> &s, Eigen::MatrixXcd &u, Eigen::MatrixXcd &vh) {
    Eigen::JacobiSVD<M, Eigen::ColPivHouseholderQRPreconditioner> jac(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    s.assign(jac.singularValues().data(), jac.singularValues().data() + jac.singularValues().size());
    u = jac.matrixU().template cast<cplx>();
    vh = jac.matrixV().adjoint().template cast<cplx>();
}

}  // namespace detail

/// SVD of a complex matrix. Inputs with exactly zero imaginary part go through a real
/// decomposition, so real data keeps real factors.
template <typename Derived>
MatrixSvd matrix_svd(const Eigen::MatrixBase<Derived> &m, const SvdOptions &opts) {
    std::vector<double> s;
    Eigen::MatrixXcd u, vh;
    if (is_real_valued(m)) {
        detail::thin_svd(Eigen::MatrixXd(m.real()), s, u, vh);
    } else {
        detail::thin_svd(Eigen::MatrixXcd(m), s, u, vh);
    }
    const std::size_t k = std::min<std::size_t>(kept_count(s, opts), s.size());
    MatrixSvd out;
    out.u = u.leftCols(static_cast<Eigen::Index>(k));
    out.vh = vh.topRows(static_cast<Eigen::Index>(k));
    out.s.assign(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(k));
    out.discarded.assign(s.begin() + static_cast<std::ptrdiff_t>(k), s.end());
    return out;
}

struct SvdSplit {
    DenseTensor u;  // left axes + [k]
    std::vector<double> s;
    DenseTensor v;  // [k] + right axes
    std::vector<double> discarded;
};

/// Splits `t` across the bipartition (left_axes | remaining axes in order).
inline SvdSplit svd_split(const DenseTensor &t, std::span<const std::size_t> left_axes, const SvdOptions &opts = {}) {
    const std::size_t r = t.rank();
    if (left_axes.empty() || left_axes.size() >= r) {
        throw std::invalid_argument("svd_split: left axes must be a proper non-empty subset");
    }
    std::vector<bool> is_left(r, false);
    for (auto ax : left_axes) {
        if (ax >= r || is_left[ax]) {
            throw std::invalid_argument("svd_split: invalid left axis list");
        }
        is_left[ax] = true;
    }
    std::vector<std::size_t> perm(left_axes.begin(), left_axes.end());
    Shape left_shape, right_shape;
    std::size_t rows = 1, cols = 1;
    for (auto ax : left_axes) {
        left_shape.push_back(t.dim(ax));
        rows *= t.dim(ax);
    }
    for (std::size_t k = 0; k < r; k++) {
        if (!is_left[k]) {
            perm.push_back(k);
            right_shape.push_back(t.dim(k));
            cols *= t.dim(k);
        }
    }
    const DenseTensor p = t.permuted(perm);
    MatrixSvd f = matrix_svd(p.as_matrix(rows, cols), opts);
    const std::size_t k = f.s.size();
    Shape ushape = left_shape;
    ushape.push_back(k);
    Shape vshape{k};
    vshape.insert(vshape.end(), right_shape.begin(), right_shape.end());
    SvdSplit out{DenseTensor(ushape), std::move(f.s), DenseTensor(vshape), std::move(f.discarded)};
    out.u.as_matrix(rows, k) = f.u;
    out.v.as_matrix(k, cols) = f.vh;
    return out;
}

inline SvdSplit svd_split(const DenseTensor &t, std::initializer_list<std::size_t> left_axes, const SvdOptions &opts = {}) {
    return svd_split(t, std::span<const std::size_t>(left_axes.begin(), left_axes.size()), opts);
}

/// Thin QR of a row-major matrix: m = q * r with q having min(rows, cols) orthonormal columns.
inline std::pair<RowMatrixXcd, RowMatrixXcd> thin_qr(const Eigen::Ref<const RowMatrixXcd> &m) {
    const Eigen::Index rows = m.rows(), cols = m.cols();
    const Eigen::Index k = std::min(rows, cols);
    if (is_real_valued(m)) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr{Eigen::MatrixXd(m.real())};
        Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, k);
        Eigen::MatrixXd rr = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
        return {q.cast<cplx>(), rr.cast<cplx>()};
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr{Eigen::MatrixXcd(m)};
    RowMatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(rows, k);
    RowMatrixXcd rr = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
    return {std::move(q), std::move(rr)};
}

}  // namespace vqtn

#endif
