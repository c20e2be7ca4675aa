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

#ifndef VQTN_COEFFS_FIXED_TENSORS_HPP
#define VQTN_COEFFS_FIXED_TENSORS_HPP

#include <Eigen/Dense>
#include <complex>

namespace vqtn::coeffs {

using cplx = std::complex<double>;
using Mat34 = Eigen::Matrix<cplx, 3, 4, Eigen::RowMajor>;
using Mat43 = Eigen::Matrix<cplx, 4, 3, Eigen::RowMajor>;
using Mat33 = Eigen::Matrix<cplx, 3, 3, Eigen::RowMajor>;

// Site tensors linking the feature kets to the trigonometric basis T = (1, cos phi, sin phi).
// The fused index lj is 2 l + j.

/// P (b x lj): sum_lj P_{b,lj} S*_l S_j = (e^{-i phi}, 1, e^{i phi})_b.
inline Mat34 tensor_p() {
    Mat34 p;
    p << 0, 0, 1, 0, 0.5, 0, 0, 0.5, 0, 1, 0, 0;
    return p;
}

/// R (lj x b).
inline Mat43 tensor_r() {
    Mat43 r;
    r << 0, 1, 0, 0, 0, 1, 1, 0, 0, 0, 1, 0;
    return r;
}

/// Q (b x t): (e^{-i phi}, 1, e^{i phi}) = Q (1, cos phi, sin phi).
inline Mat33 tensor_q() {
    const cplx i{0.0, 1.0};
    Mat33 q;
    q << 0, 1, -i, 1, 0, 0, 0, 1, i;
    return q;
}

/// R Q: maps a site matrix M_{lj} to (Tr M, Tr X M, Tr Y M).
inline Mat43 tensor_rq() {
    return tensor_r() * tensor_q();
}

}  // namespace vqtn::coeffs

#endif
