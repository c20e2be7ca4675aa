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

#ifndef VQTN_DATAKIT_HPP
#define VQTN_DATAKIT_HPP

#include "vqtn/datakit/dataset.hpp"
#include "vqtn/datakit/generators.hpp"
#include "vqtn/datakit/idx.hpp"
#include "vqtn/datakit/pca.hpp"

#endif
