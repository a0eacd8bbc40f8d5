// Copyright 2026 The tsinfo Authors.
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

#ifndef TSINFO_TSINFO_HPP
#define TSINFO_TSINFO_HPP

#include "tsinfo/analysis.hpp"
#include "tsinfo/belief.hpp"
#include "tsinfo/errors.hpp"
#include "tsinfo/generators.hpp"
#include "tsinfo/harness.hpp"
#include "tsinfo/info_math.hpp"
#include "tsinfo/model_family.hpp"
#include "tsinfo/policies.hpp"
#include "tsinfo/prob.hpp"
#include "tsinfo/random.hpp"
#include "tsinfo/serialize.hpp"
#include "tsinfo/verify.hpp"

#endif  // TSINFO_TSINFO_HPP
