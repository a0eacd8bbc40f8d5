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

#ifndef TSINFO_ERRORS_HPP
#define TSINFO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tsinfo {

/// Malformed input: bad probabilities, dimension mismatch, out-of-range value.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// KL divergence requested for p not absolutely continuous w.r.t. q.
class DivergenceUndefined : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A documented precondition was violated (gap-function span, zero-probability
/// conditioning event).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An observation had zero likelihood under every model still in the posterior.
class ImpossibleObservation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal identity that must hold by construction failed; signals a defect.
class InconsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Requested instance exceeds the exact-enumeration size cap.
class InstanceTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A matrix factorization or similar numeric step failed beyond retry.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad experiment configuration or unreadable/unwritable file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tsinfo

#endif  // TSINFO_ERRORS_HPP
