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

#ifndef VQTN_ANALYSIS_HPP
#define VQTN_ANALYSIS_HPP

#include "vqtn/analysis/entropy.hpp"
#include "vqtn/analysis/gram.hpp"
#include "vqtn/analysis/stats.hpp"

#endif
