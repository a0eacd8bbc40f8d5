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

#ifndef TSINFO_PROB_HPP
#define TSINFO_PROB_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tsinfo/errors.hpp"

namespace tsinfo {

/// Tolerance for accepting a weight vector as a probability distribution.
/// Inputs whose total is within this of 1 are renormalized; others rejected.
inline constexpr double kProbTolerance = 1e-9;

/// Probability distribution over a finite support, stored in nats-friendly
/// double precision. Always normalized after construction.
class ProbVector {
 public:
  ProbVector() = default;

  explicit ProbVector(std::vector<double> weights) : w_(std::move(weights)) {
    if (w_.empty()) throw ValidationError("ProbVector: empty support");
    double total = 0.0;
    for (double x : w_) {
      if (!std::isfinite(x)) throw ValidationError("ProbVector: non-finite weight");
      if (x < 0.0) {
        if (x < -kProbTolerance) throw ValidationError("ProbVector: negative weight");
        x = 0.0;
      }
      total += x;
    }
    if (std::abs(total - 1.0) > kProbTolerance)
      throw ValidationError("ProbVector: weights sum to " + std::to_string(total));
    for (double& x : w_) {
      if (x < 0.0) x = 0.0;
      x /= total;
    }
  }

  int dim() const { return static_cast<int>(w_.size()); }
  double operator[](int i) const { return w_[i]; }
  const std::vector<double>& weights() const { return w_; }

  bool is_point_mass() const {
    for (double x : w_)
      if (x == 1.0) return true;
    return false;
  }

 private:
  std::vector<double> w_;
};

/// Joint distribution over a pair of finite supports, row-major in x.
class JointTable {
 public:
  JointTable(std::vector<double> entries, int x_dim, int y_dim)
      : p_(std::move(entries)), nx_(x_dim), ny_(y_dim) {
    if (nx_ < 1 || ny_ < 1 || p_.size() != static_cast<std::size_t>(nx_) * ny_)
      throw ValidationError("JointTable: dimension mismatch");
    double total = 0.0;
    for (double x : p_) {
      if (!std::isfinite(x)) throw ValidationError("JointTable: non-finite entry");
      if (x < -kProbTolerance) throw ValidationError("JointTable: negative entry");
      total += x;
    }
    if (std::abs(total - 1.0) > kProbTolerance)
      throw ValidationError("JointTable: entries sum to " + std::to_string(total));
    for (double& x : p_) {
      if (x < 0.0) x = 0.0;
      x /= total;
    }
  }

  int x_dim() const { return nx_; }
  int y_dim() const { return ny_; }
  double operator()(int x, int y) const { return p_[static_cast<std::size_t>(x) * ny_ + y]; }

  std::vector<double> x_marginal() const {
    std::vector<double> m(nx_, 0.0);
    for (int x = 0; x < nx_; ++x)
      for (int y = 0; y < ny_; ++y) m[x] += (*this)(x, y);
    return m;
  }

  std::vector<double> y_marginal() const {
    std::vector<double> m(ny_, 0.0);
    for (int x = 0; x < nx_; ++x)
      for (int y = 0; y < ny_; ++y) m[y] += (*this)(x, y);
    return m;
  }

 private:
  std::vector<double> p_;
  int nx_ = 0;
  int ny_ = 0;
};

}  // namespace tsinfo

#endif  // TSINFO_PROB_HPP
