// Copyright (C) 2026 The advrank Authors
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

#ifndef ADVRANK_CORE_TENSOR_HPP
#define ADVRANK_CORE_TENSOR_HPP

#include <Eigen/Dense>

#include <sstream>
#include <string>

#include "advrank/common/errors.hpp"

namespace advrank {

// Dense row-major matrix. Every activation in the ranker is a 2-D
// [rows x features] block, so this is the only tensor shape needed.
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using MatrixF = Matrix<float>;
using MatrixD = Matrix<double>;

template <typename Derived>
std::string shape_string(const Eigen::MatrixBase<Derived>& m) {
  std::ostringstream os;
  os << "[" << m.rows() << "x" << m.cols() << "]";
  return os.str();
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* op) {
  if (!m.allFinite()) {
    throw NumericError(std::string(op) + ": non-finite value in output " +
                       shape_string(m));
  }
}

}  // namespace advrank

#endif  // ADVRANK_CORE_TENSOR_HPP
