// Copyright 2026 The fwscale Authors
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

#ifndef FWSCALE_TESTS_TEST_UTIL_H_
#define FWSCALE_TESTS_TEST_UTIL_H_

#include <cstddef>

#include <Eigen/Dense>

#include "fwscale/types.hpp"

namespace fws {

// Column-major flattening, the layout used for matrix points.
inline Vector flatten(const DenseMatrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

inline DenseMatrix unflatten(const Vector& x, std::size_t rows,
                             std::size_t cols) {
  return Eigen::Map<const DenseMatrix>(x.data(),
                                       static_cast<Eigen::Index>(rows),
                                       static_cast<Eigen::Index>(cols));
}

inline DenseMatrix random_symmetric(std::size_t n, Rng& rng) {
  const DenseMatrix b = gaussian_matrix(n, n, rng);
  return 0.5 * (b + b.transpose());
}

inline DenseMatrix random_orthonormal(std::size_t rows, std::size_t cols,
                                      Rng& rng) {
  Eigen::HouseholderQR<DenseMatrix> qr(gaussian_matrix(rows, cols, rng));
  return qr.householderQ() * DenseMatrix::Identity(rows, cols);
}

}  // namespace fws

#endif  // FWSCALE_TESTS_TEST_UTIL_H_
