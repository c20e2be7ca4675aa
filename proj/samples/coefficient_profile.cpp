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


// Builds the coefficient MPS of a small random circuit, checks it against direct simulation and
// prints its bond dimensions and Renyi-2 profile next to the Page reference.

#include <cstdio>
#include <random>

#include "vqtn/analysis.hpp"
#include "vqtn/circuits.hpp"
#include "vqtn/coeffs.hpp"
#include "vqtn/learn/feature_map.hpp"

int main() {
    using namespace vqtn;
    const std::size_t n = 6;
    for (std::size_t layers : {1u, 2u, 3u}) {
        const auto spec = circuits::CircuitSpec::random_parallel(n, layers, layers, 0.0, circuits::EncodingMap::naive(n), 11);
        const auto c = coeffs::to_coefficient_mps(spec);

        circuits::CircuitOracle oracle(spec);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-3.14159, 3.14159);
        double worst = 0.0;
        for (int i = 0; i < 50; i++) {
            const double x = u(rng);
            worst = std::max(worst, std::abs(learn::evaluate(c, learn::feature_map(spec.encoding, x)) - oracle(x)));
        }

        const auto prof = analysis::renyi2_profile(c);
        std::printf("L = %zu: chi_q = %zu, max |C.T - f| = %.2e\n", layers, analysis::effective_max_bond(c), worst);
        for (std::size_t k = 0; k + 1 < n; k++)
            std::printf("  cut %zu  S2 = %.3f  page = %.3f\n", k + 1, prof.s2[k], analysis::page_reference(n, k + 1));
    }
    return 0;
}
