// Copyright 2026 The noisytree Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace noisytree {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Largest support size accepted anywhere in the library.
inline constexpr int kMaxSupport = 16;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A matrix that must be inverted (or whose distance must be finite) is
// numerically singular. Carries the offending node pair when known.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, int first = -1, int second = -1)
      : Error(what), first_(first), second_(second) {}
  int first() const { return first_; }
  int second() const { return second_; }

 private:
  int first_;
  int second_;
};

inline Matrix ones(int k) { return Matrix::Ones(k, k); }

// (1 - q) I + (q / k) O
inline Matrix error_matrix(int k, double q) {
  Matrix e = Matrix::Constant(k, k, q / k);
  e.diagonal().array() += 1.0 - q;
  return e;
}

// log |det(m)| via partially pivoted LU; -inf when a pivot is exactly zero.
inline double log_abs_det(const Matrix& m) {
  Eigen::PartialPivLU<Matrix> lu(m);
  const Matrix& packed = lu.matrixLU();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < packed.rows(); ++i) {
    const double pivot = std::abs(packed(i, i));
    if (pivot == 0.0) return -std::numeric_limits<double>::infinity();
    acc += std::log(pivot);
  }
  return acc;
}

inline double abs_det(const Matrix& m) { return std::exp(log_abs_det(m)); }

}  // namespace noisytree
