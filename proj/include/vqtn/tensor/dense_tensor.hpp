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

#ifndef VQTN_TENSOR_DENSE_TENSOR_HPP
#define VQTN_TENSOR_DENSE_TENSOR_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vqtn {

using cplx = std::complex<double>;
using Shape = std::vector<std::size_t>;
using RowMatrixXcd = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline std::size_t shape_volume(const Shape &shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

inline std::string shape_string(const Shape &shape) {
    std::ostringstream out;
    out << "(";
    for (std::size_t k = 0; k < shape.size(); k++) {
        out << (k ? "," : "") << shape[k];
    }
    out << ")";
    return out.str();
}

/// Row-major complex tensor. Every dimension is at least 1; a rank-0 tensor holds one scalar.
class DenseTensor {
   public:
    DenseTensor() : data_(1, cplx{0.0, 0.0}) {
    }

    explicit DenseTensor(Shape shape) : shape_(std::move(shape)) {
        check_shape();
        data_.assign(shape_volume(shape_), cplx{0.0, 0.0});
    }

    DenseTensor(Shape shape, std::vector<cplx> data) : shape_(std::move(shape)), data_(std::move(data)) {
        check_shape();
        if (data_.size() != shape_volume(shape_)) {
            throw std::invalid_argument(
                "DenseTensor: data length " + std::to_string(data_.size()) + " does not match shape " +
                shape_string(shape_));
        }
    }

    template <typename Derived>
    static DenseTensor from_matrix(const Eigen::MatrixBase<Derived> &m) {
        DenseTensor t({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())});
        for (Eigen::Index r = 0; r < m.rows(); r++) {
            for (Eigen::Index c = 0; c < m.cols(); c++) {
                t.data_[static_cast<std::size_t>(r * m.cols() + c)] = cplx(m(r, c));
            }
        }
        return t;
    }

    std::size_t rank() const {
        return shape_.size();
    }
    const Shape &shape() const {
        return shape_;
    }
    std::size_t dim(std::size_t axis) const {
        return shape_.at(axis);
    }
    std::size_t size() const {
        return data_.size();
    }
    std::span<const cplx> data() const {
        return data_;
    }
    std::span<cplx> data() {
        return data_;
    }
    const std::vector<cplx> &values() const {
        return data_;
    }

    std::size_t offset(std::span<const std::size_t> index) const {
        if (index.size() != shape_.size()) {
            throw std::out_of_range("DenseTensor: index rank mismatch");
        }
        std::size_t off = 0;
        for (std::size_t k = 0; k < index.size(); k++) {
            if (index[k] >= shape_[k]) {
                throw std::out_of_range("DenseTensor: index out of range");
            }
            off = off * shape_[k] + index[k];
        }
        return off;
    }
    cplx operator()(std::initializer_list<std::size_t> index) const {
        return data_[offset(std::span<const std::size_t>(index.begin(), index.size()))];
    }
    cplx &operator()(std::initializer_list<std::size_t> index) {
        return data_[offset(std::span<const std::size_t>(index.begin(), index.size()))];
    }

    DenseTensor reshaped(Shape shape) const & {
        DenseTensor copy = *this;
        return std::move(copy).reshaped(std::move(shape));
    }
    DenseTensor reshaped(Shape shape) && {
        if (shape_volume(shape) != data_.size()) {
            throw std::invalid_argument(
                "DenseTensor::reshaped: cannot reshape " + shape_string(shape_) + " into " + shape_string(shape));
        }
        shape_ = std::move(shape);
        check_shape();
        return std::move(*this);
    }

    DenseTensor permuted(std::span<const std::size_t> perm) const {
        const std::size_t r = rank();
        if (perm.size() != r) {
            throw std::invalid_argument("DenseTensor::permuted: permutation has wrong length");
        }
        std::vector<bool> seen(r, false);
        for (auto p : perm) {
            if (p >= r || seen[p]) {
                throw std::invalid_argument("DenseTensor::permuted: invalid permutation");
            }
            seen[p] = true;
        }
        bool identity = true;
        for (std::size_t k = 0; k < r; k++) {
            identity = identity && perm[k] == k;
        }
        if (identity) {
            return *this;
        }
        Shape new_shape(r);
        for (std::size_t k = 0; k < r; k++) {
            new_shape[k] = shape_[perm[k]];
        }
        // Strides of the source, read in the order of the destination axes.
        std::vector<std::size_t> src_stride(r, 1);
        for (std::size_t k = r; k-- > 1;) {
            src_stride[k - 1] = src_stride[k] * shape_[k];
        }
        std::vector<std::size_t> stride(r);
        for (std::size_t k = 0; k < r; k++) {
            stride[k] = src_stride[perm[k]];
        }
        DenseTensor out(new_shape);
        std::vector<std::size_t> counter(r, 0);
        std::size_t src = 0;
        const std::size_t inner = new_shape[r - 1];
        const std::size_t inner_stride = stride[r - 1];
        for (std::size_t dst = 0; dst < out.data_.size(); dst += inner) {
            for (std::size_t j = 0; j < inner; j++) {
                out.data_[dst + j] = data_[src + j * inner_stride];
            }
            // Advance the multi-index skipping the innermost axis.
            for (std::size_t k = r - 1; k-- > 0;) {
                counter[k]++;
                src += stride[k];
                if (counter[k] < new_shape[k]) {
                    break;
                }
                src -= stride[k] * new_shape[k];
                counter[k] = 0;
            }
        }
        return out;
    }
    DenseTensor permuted(std::initializer_list<std::size_t> perm) const {
        return permuted(std::span<const std::size_t>(perm.begin(), perm.size()));
    }

    Eigen::Map<const RowMatrixXcd> as_matrix(std::size_t rows, std::size_t cols) const {
        if (rows * cols != data_.size()) {
            throw std::invalid_argument("DenseTensor::as_matrix: size mismatch");
        }
        return {data_.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols)};
    }
    Eigen::Map<RowMatrixXcd> as_matrix(std::size_t rows, std::size_t cols) {
        if (rows * cols != data_.size()) {
            throw std::invalid_argument("DenseTensor::as_matrix: size mismatch");
        }
        return {data_.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols)};
    }

    DenseTensor conj() const {
        DenseTensor out = *this;
        for (auto &v : out.data_) {
            v = std::conj(v);
        }
        return out;
    }

    DenseTensor scaled(cplx factor) const {
        DenseTensor out = *this;
        for (auto &v : out.data_) {
            v *= factor;
        }
        return out;
    }

    double norm() const {
        double s = 0.0;
        for (const auto &v : data_) {
            s += std::norm(v);
        }
        return std::sqrt(s);
    }

    double max_abs_imag() const {
        double m = 0.0;
        for (const auto &v : data_) {
            m = std::max(m, std::abs(v.imag()));
        }
        return m;
    }

   private:
    void check_shape() const {
        for (auto d : shape_) {
            if (d == 0) {
                throw std::invalid_argument("DenseTensor: zero-sized dimension in shape " + shape_string(shape_));
            }
        }
    }

    Shape shape_;
    std::vector<cplx> data_;
};

inline double max_abs_diff(const DenseTensor &a, const DenseTensor &b) {
    if (a.shape() != b.shape()) {
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    }
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); k++) {
        m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    }
    return m;
}

/// Sum over the listed axes of `a` against the listed axes of `b`.
/// Result axes: free axes of `a` in order, then free axes of `b` in order.
inline DenseTensor contract(
    const DenseTensor &a,
    std::span<const std::size_t> axes_a,
    const DenseTensor &b,
    std::span<const std::size_t> axes_b) {
    if (axes_a.size() != axes_b.size()) {
        throw std::invalid_argument("contract: axis lists differ in length");
    }
    auto check_axes = [](const DenseTensor &t, std::span<const std::size_t> axes, const char *name) {
        std::vector<bool> seen(t.rank(), false);
        for (auto ax : axes) {
            if (ax >= t.rank() || seen[ax]) {
                throw std::invalid_argument(std::string("contract: invalid axis list for ") + name);
            }
            seen[ax] = true;
        }
        return seen;
    };
    auto used_a = check_axes(a, axes_a, "a");
    auto used_b = check_axes(b, axes_b, "b");
    std::size_t inner = 1;
    for (std::size_t k = 0; k < axes_a.size(); k++) {
        if (a.dim(axes_a[k]) != b.dim(axes_b[k])) {
            throw std::invalid_argument(
                "contract: dimension mismatch on axis pair " + std::to_string(k) + ": " +
                std::to_string(a.dim(axes_a[k])) + " vs " + std::to_string(b.dim(axes_b[k])));
        }
        inner *= a.dim(axes_a[k]);
    }
    std::vector<std::size_t> perm_a, perm_b;
    Shape out_shape;
    std::size_t rows = 1, cols = 1;
    for (std::size_t k = 0; k < a.rank(); k++) {
        if (!used_a[k]) {
            perm_a.push_back(k);
            out_shape.push_back(a.dim(k));
            rows *= a.dim(k);
        }
    }
    perm_a.insert(perm_a.end(), axes_a.begin(), axes_a.end());
    perm_b.assign(axes_b.begin(), axes_b.end());
    for (std::size_t k = 0; k < b.rank(); k++) {
        if (!used_b[k]) {
            perm_b.push_back(k);
            out_shape.push_back(b.dim(k));
            cols *= b.dim(k);
        }
    }
    const DenseTensor pa = a.permuted(perm_a);
    const DenseTensor pb = b.permuted(perm_b);
    DenseTensor out(out_shape);
    out.as_matrix(rows, cols).noalias() = pa.as_matrix(rows, inner) * pb.as_matrix(inner, cols);
    return out;
}

inline DenseTensor contract(
    const DenseTensor &a,
    std::initializer_list<std::size_t> axes_a,
    const DenseTensor &b,
    std::initializer_list<std::size_t> axes_b) {
    return contract(
        a,
        std::span<const std::size_t>(axes_a.begin(), axes_a.size()),
        b,
        std::span<const std::size_t>(axes_b.begin(), axes_b.size()));
}

}  // namespace vqtn

#endif
