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

#ifndef VQTN_ERRORS_HPP
#define VQTN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vqtn {

/// Malformed or inconsistent user input (circuit specs, configs, datasets).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A request whose size exceeds a configured cap.
struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A numerical postcondition failed (non-real coefficients, non-finite values).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrainingDiverged : NumericalError {
    TrainingDiverged(std::size_t epoch, const std::string &detail)
        : NumericalError("training diverged at epoch " + std::to_string(epoch) + ": " + detail), epoch(epoch) {
    }
    std::size_t epoch;
};

struct SolverFailure : NumericalError {
    SolverFailure(const std::string &detail, std::size_t rank, std::size_t size)
        : NumericalError(detail + " (numerical rank " + std::to_string(rank) + " of " + std::to_string(size) + ")"),
          rank(rank),
          size(size) {
    }
    std::size_t rank;
    std::size_t size;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace vqtn

#endif
