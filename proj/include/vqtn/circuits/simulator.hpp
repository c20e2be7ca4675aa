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

#ifndef VQTN_CIRCUITS_SIMULATOR_HPP
#define VQTN_CIRCUITS_SIMULATOR_HPP

#include <utility>

#include "vqtn/circuits/gate_sequence.hpp"

namespace vqtn::circuits {

inline constexpr std::size_t kMaxStateVectorQubits = 24;
inline constexpr std::size_t kMaxDenseOperatorQubits = 12;

namespace detail {

inline std::size_t bit_of(std::size_t n, std::size_t q) {
    return std::size_t{1} << (n - 1 - q);
}

// Matrix element <row|P|col> of a Pauli string where P|col> = phase(col) |col ^ flip>.
struct PauliAction {
    std::size_t flip = 0;
    std::vector<std::pair<std::size_t, int>> factors;  // (bit mask, pauli index) for Y and Z sites

    PauliAction(const PauliString &p) {
        const std::size_t n = p.size();
        for (std::size_t q = 0; q < n; q++) {
            const int k = p.index(q);
            const std::size_t b = bit_of(n, q);
            if (k == 1 || k == 2) flip |= b;
            if (k == 2 || k == 3) factors.emplace_back(b, k);
        }
    }

    cplx phase(std::size_t col) const {
        cplx ph = 1.0;
        for (const auto &[b, k] : factors) {
            const bool one = (col & b) != 0;
            if (k == 3) {
                if (one) ph = -ph;
            } else {
                ph *= one ? -kI : kI;  // Y|0> = i|1>, Y|1> = -i|0>
            }
        }
        return ph;
    }
};

}  // namespace detail

class StateVector {
   public:
    explicit StateVector(std::size_t n) : n_(n) {
        if (n == 0 || n > kMaxStateVectorQubits) {
            throw ResourceLimitError("state vector: qubit count " + std::to_string(n) + " outside supported range");
        }
        amp_.assign(std::size_t{1} << n, cplx{0.0, 0.0});
        amp_[0] = 1.0;
    }

    std::size_t qubits() const {
        return n_;
    }
    const std::vector<cplx> &amplitudes() const {
        return amp_;
    }
    std::vector<cplx> &amplitudes() {
        return amp_;
    }

    void apply_1q(const Mat2 &g, std::size_t q) {
        const std::size_t dim = amp_.size(), m = detail::bit_of(n_, q);
        for (std::size_t hi = 0; hi < dim; hi += 2 * m) {
            for (std::size_t lo = hi; lo < hi + m; lo++) {
                const cplx a = amp_[lo], b = amp_[lo + m];
                amp_[lo] = g(0, 0) * a + g(0, 1) * b;
                amp_[lo + m] = g(1, 0) * a + g(1, 1) * b;
            }
        }
    }

    void apply_cnot(std::size_t c, std::size_t t) {
        const std::size_t mc = detail::bit_of(n_, c), mt = detail::bit_of(n_, t);
        for (std::size_t i = 0; i < amp_.size(); i++) {
            if ((i & mc) && !(i & mt)) std::swap(amp_[i], amp_[i | mt]);
        }
    }

    void apply(const Gate &g) {
        switch (g.kind) {
            case Gate::Kind::Unitary:
                apply_1q(g.matrix, g.q0);
                break;
            case Gate::Kind::Cnot:
                apply_cnot(g.q0, g.q1);
                break;
            case Gate::Kind::Depolarize:
                throw std::logic_error("state vector cannot apply a noise channel");
        }
    }

    void apply(const GateSequence &seq) {
        for (const auto &g : seq) apply(g);
    }

    double expectation(const PauliString &p) const {
        detail::PauliAction act(p);
        cplx s = 0.0;
        for (std::size_t i = 0; i < amp_.size(); i++) {
            s += std::conj(amp_[i ^ act.flip]) * act.phase(i) * amp_[i];
        }
        return s.real();
    }

    cplx inner(const StateVector &other) const {
        cplx s = 0.0;
        for (std::size_t i = 0; i < amp_.size(); i++) s += std::conj(amp_[i]) * other.amp_[i];
        return s;
    }

   private:
    std::size_t n_;
    std::vector<cplx> amp_;
};

/// Dense 2^n x 2^n operator, row-major. Serves both as a density matrix (forward evolution)
/// and as an observable (Heisenberg evolution).
class DenseOperator {
   public:
    explicit DenseOperator(std::size_t n) : n_(n) {
        if (n == 0 || n > kMaxDenseOperatorQubits) {
            throw ResourceLimitError("dense operator: qubit count " + std::to_string(n) + " outside supported range");
        }
        dim_ = std::size_t{1} << n;
        m_.assign(dim_ * dim_, cplx{0.0, 0.0});
    }

    static DenseOperator zero_state(std::size_t n) {
        DenseOperator o(n);
        o.m_[0] = 1.0;
        return o;
    }

    static DenseOperator projector(const StateVector &psi) {
        DenseOperator o(psi.qubits());
        const auto &a = psi.amplitudes();
        for (std::size_t r = 0; r < o.dim_; r++) {
            const cplx ar = a[r];
            cplx *row = &o.m_[r * o.dim_];
            for (std::size_t c = 0; c < o.dim_; c++) row[c] = ar * std::conj(a[c]);
        }
        return o;
    }

    static DenseOperator pauli(const PauliString &p) {
        DenseOperator o(p.size());
        detail::PauliAction act(p);
        for (std::size_t c = 0; c < o.dim_; c++) o.m_[(c ^ act.flip) * o.dim_ + c] = act.phase(c);
        return o;
    }

    static DenseOperator from_matrix(const Eigen::MatrixXcd &m) {
        std::size_t n = 0;
        while ((std::size_t{1} << n) < static_cast<std::size_t>(m.rows())) n++;
        DenseOperator o(n);
        if (static_cast<std::size_t>(m.rows()) != o.dim_ || m.cols() != m.rows()) {
            throw std::invalid_argument("DenseOperator::from_matrix: size is not a power of two");
        }
        for (std::size_t r = 0; r < o.dim_; r++)
            for (std::size_t c = 0; c < o.dim_; c++) o.m_[r * o.dim_ + c] = m(r, c);
        return o;
    }

    std::size_t qubits() const {
        return n_;
    }
    std::size_t dim() const {
        return dim_;
    }
    const std::vector<cplx> &data() const {
        return m_;
    }
    std::vector<cplx> &data() {
        return m_;
    }
    cplx operator()(std::size_t r, std::size_t c) const {
        return m_[r * dim_ + c];
    }

    Eigen::MatrixXcd to_matrix() const {
        return Eigen::Map<const RowMatrix>(m_.data(), dim_, dim_);
    }

    /// this <- (g on q) * this
    void left_1q(const Mat2 &g, std::size_t q) {
        const std::size_t m = detail::bit_of(n_, q);
        const cplx g00 = g(0, 0), g01 = g(0, 1), g10 = g(1, 0), g11 = g(1, 1);
        for (std::size_t hi = 0; hi < dim_; hi += 2 * m) {
            for (std::size_t r = hi; r < hi + m; r++) {
                cplx *a = &m_[r * dim_];
                cplx *b = &m_[(r + m) * dim_];
                for (std::size_t c = 0; c < dim_; c++) {
                    const cplx x = a[c], y = b[c];
                    a[c] = g00 * x + g01 * y;
                    b[c] = g10 * x + g11 * y;
                }
            }
        }
    }

    /// this <- this * (g on q)
    void right_1q(const Mat2 &g, std::size_t q) {
        const std::size_t m = detail::bit_of(n_, q);
        const cplx g00 = g(0, 0), g01 = g(0, 1), g10 = g(1, 0), g11 = g(1, 1);
        for (std::size_t r = 0; r < dim_; r++) {
            cplx *row = &m_[r * dim_];
            for (std::size_t hi = 0; hi < dim_; hi += 2 * m) {
                for (std::size_t c = hi; c < hi + m; c++) {
                    const cplx x = row[c], y = row[c + m];
                    row[c] = x * g00 + y * g10;
                    row[c + m] = x * g01 + y * g11;
                }
            }
        }
    }

    void left_cnot(std::size_t c, std::size_t t) {
        const std::size_t mc = detail::bit_of(n_, c), mt = detail::bit_of(n_, t);
        for (std::size_t r = 0; r < dim_; r++) {
            if ((r & mc) && !(r & mt)) {
                std::swap_ranges(m_.begin() + static_cast<std::ptrdiff_t>(r * dim_),
                                 m_.begin() + static_cast<std::ptrdiff_t>((r + 1) * dim_),
                                 m_.begin() + static_cast<std::ptrdiff_t>((r | mt) * dim_));
            }
        }
    }

    void right_cnot(std::size_t c, std::size_t t) {
        const std::size_t mc = detail::bit_of(n_, c), mt = detail::bit_of(n_, t);
        for (std::size_t r = 0; r < dim_; r++) {
            cplx *row = &m_[r * dim_];
            for (std::size_t k = 0; k < dim_; k++) {
                if ((k & mc) && !(k & mt)) std::swap(row[k], row[k | mt]);
            }
        }
    }

    /// (1 - gamma) A + gamma / 4 Tr_{q0 q1}(A) x I on the pair; self-adjoint.
    void depolarize(std::size_t q0, std::size_t q1, double gamma) {
        const std::size_t a = detail::bit_of(n_, q0), b = detail::bit_of(n_, q1);
        const std::size_t pat[4] = {0, b, a, a | b};
        const double keep = 1.0 - gamma, mix = gamma / 4.0;
        for (std::size_t r = 0; r < dim_; r++) {
            if (r & (a | b)) continue;
            for (std::size_t c = 0; c < dim_; c++) {
                if (c & (a | b)) continue;
                cplx tr = 0.0;
                for (auto p : pat) tr += m_[(r | p) * dim_ + (c | p)];
                for (auto p : pat)
                    for (auto pp : pat) m_[(r | p) * dim_ + (c | pp)] *= keep;
                for (auto p : pat) m_[(r | p) * dim_ + (c | p)] += mix * tr;
            }
        }
    }

    /// rho <- G rho G^dagger, or the noise channel.
    void forward(const Gate &g) {
        switch (g.kind) {
            case Gate::Kind::Unitary:
                left_1q(g.matrix, g.q0);
                right_1q(g.matrix.adjoint(), g.q0);
                break;
            case Gate::Kind::Cnot:
                left_cnot(g.q0, g.q1);
                right_cnot(g.q0, g.q1);
                break;
            case Gate::Kind::Depolarize:
                depolarize(g.q0, g.q1, g.gamma);
                break;
        }
    }

    void forward(const GateSequence &seq) {
        for (const auto &g : seq) forward(g);
    }

    /// O <- G^dagger O G, or the (self-adjoint) noise channel.
    void heisenberg(const Gate &g) {
        switch (g.kind) {
            case Gate::Kind::Unitary:
                left_1q(g.matrix.adjoint(), g.q0);
                right_1q(g.matrix, g.q0);
                break;
            case Gate::Kind::Cnot:
                left_cnot(g.q0, g.q1);
                right_cnot(g.q0, g.q1);
                break;
            case Gate::Kind::Depolarize:
                depolarize(g.q0, g.q1, g.gamma);
                break;
        }
    }

    /// Heisenberg picture of a whole sequence: gates are undone in reverse time order.
    void heisenberg(const GateSequence &seq) {
        for (auto it = seq.rbegin(); it != seq.rend(); ++it) heisenberg(*it);
    }

    /// Tr(P A).
    cplx trace_with(const PauliString &p) const {
        detail::PauliAction act(p);
        cplx s = 0.0;
        for (std::size_t r = 0; r < dim_; r++) {
            // (P A)_{rr} = sum_c P_{rc} A_{cr}, P_{rc} nonzero for r = c ^ flip.
            const std::size_t c = r ^ act.flip;
            s += act.phase(c) * m_[c * dim_ + r];
        }
        return s;
    }

    cplx trace() const {
        cplx s = 0.0;
        for (std::size_t r = 0; r < dim_; r++) s += m_[r * dim_ + r];
        return s;
    }

   private:
    using RowMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    std::size_t n_;
    std::size_t dim_;
    std::vector<cplx> m_;
};

}  // namespace vqtn::circuits

#endif
