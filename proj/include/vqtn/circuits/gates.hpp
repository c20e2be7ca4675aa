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

#ifndef VQTN_CIRCUITS_GATES_HPP
#define VQTN_CIRCUITS_GATES_HPP

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "vqtn/errors.hpp"

namespace vqtn::circuits {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

inline constexpr cplx kI{0.0, 1.0};

/// Pauli matrix by index: 0 = I, 1 = X, 2 = Y, 3 = Z.
inline Mat2 pauli(int k) {
    Mat2 m;
    switch (k) {
        case 0:
            m << 1, 0, 0, 1;
            break;
        case 1:
            m << 0, 1, 1, 0;
            break;
        case 2:
            m << 0, -kI, kI, 0;
            break;
        case 3:
            m << 1, 0, 0, -1;
            break;
        default:
            throw std::invalid_argument("pauli: index must be in 0..3");
    }
    return m;
}

inline int pauli_index(char c) {
    switch (c) {
        case 'I':
            return 0;
        case 'X':
            return 1;
        case 'Y':
            return 2;
        case 'Z':
            return 3;
        default:
            throw ConfigError(std::string("invalid Pauli letter '") + c + "'");
    }
}

/// U(t1, t2, t3) = [[cos(t1/2), -e^{i t3} sin(t1/2)], [e^{i t2} sin(t1/2), e^{i(t2+t3)} cos(t1/2)]].
inline Mat2 single_qubit_unitary(double t1, double t2, double t3) {
    const double c = std::cos(t1 / 2), s = std::sin(t1 / 2);
    Mat2 u;
    u << c, -std::exp(kI * t3) * s, std::exp(kI * t2) * s, std::exp(kI * (t2 + t3)) * c;
    return u;
}

/// Partial derivatives of single_qubit_unitary with respect to t1, t2, t3.
inline std::array<Mat2, 3> single_qubit_unitary_derivatives(double t1, double t2, double t3) {
    const double c = std::cos(t1 / 2), s = std::sin(t1 / 2);
    const cplx e2 = std::exp(kI * t2), e3 = std::exp(kI * t3), e23 = std::exp(kI * (t2 + t3));
    Mat2 d1, d2, d3;
    d1 << -s / 2, -e3 * c / 2.0, e2 * c / 2.0, -e23 * s / 2.0;
    d2 << 0, 0, kI * e2 * s, kI * e23 * c;
    d3 << 0, -kI * e3 * s, 0, kI * e23 * c;
    return {d1, d2, d3};
}

inline Mat2 hadamard() {
    Mat2 h;
    h << 1, 1, 1, -1;
    return h / std::sqrt(2.0);
}

/// Rz(phi) = exp(-i phi Z / 2).
inline Mat2 rz(double phi) {
    Mat2 m = Mat2::Zero();
    m(0, 0) = std::exp(-kI * phi / 2.0);
    m(1, 1) = std::exp(kI * phi / 2.0);
    return m;
}

/// CNOT with the first (more significant) qubit as control.
inline Mat4 cnot() {
    Mat4 m = Mat4::Zero();
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
    return m;
}

inline Mat4 kron2(const Mat2 &a, const Mat2 &b) {
    Mat4 m;
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++)
            for (int k = 0; k < 2; k++)
                for (int l = 0; l < 2; l++) m(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return m;
}

/// Kraus operators of the two-qubit depolarizing channel:
/// sqrt(1 - 15 gamma / 16) I x I and sqrt(gamma / 16) s_a x s_b for the 15 other Pauli pairs.
inline std::vector<Mat4> depolarizing_kraus(double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw ConfigError("depolarizing strength must lie in [0, 1]");
    }
    std::vector<Mat4> ks;
    for (int a = 0; a < 4; a++) {
        for (int b = 0; b < 4; b++) {
            const double w = (a == 0 && b == 0) ? std::sqrt(1.0 - 15.0 * gamma / 16.0) : std::sqrt(gamma / 16.0);
            ks.push_back(w * kron2(pauli(a), pauli(b)));
        }
    }
    return ks;
}

/// Pauli string; position 0 is the first (top) qubit.
class PauliString {
   public:
    PauliString() = default;
    explicit PauliString(std::string letters) : letters_(std::move(letters)) {
        for (char c : letters_) {
            (void)pauli_index(c);
        }
    }
    static PauliString z_on(std::size_t n, std::size_t site) {
        std::string s(n, 'I');
        s.at(site) = 'Z';
        return PauliString(s);
    }
    std::size_t size() const {
        return letters_.size();
    }
    const std::string &str() const {
        return letters_;
    }
    int index(std::size_t site) const {
        return pauli_index(letters_.at(site));
    }
    Mat2 matrix(std::size_t site) const {
        return pauli(index(site));
    }
    bool operator==(const PauliString &) const = default;

   private:
    std::string letters_;
};

}  // namespace vqtn::circuits

#endif
