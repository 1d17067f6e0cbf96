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

// Numeric carriers shared by every module. Dense data is Eigen (column-major
// doubles); sparse data is an explicit (i, j, value) list.

#ifndef FWSCALE_TYPES_HPP_
#define FWSCALE_TYPES_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace fws {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

// Shape of a point. Vectors use cols == 1. Matrices are flattened column-major
// when a point is held as a Vector.
struct Shape {
  std::size_t rows = 0;
  std::size_t cols = 1;

  std::size_t size() const { return rows * cols; }
  bool is_matrix() const { return cols > 1; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

struct SparseEntry {
  std::size_t i;
  std::size_t j;
  double value;
};

// Entries with distinct (i, j). When `symmetric` is set every off-diagonal
// entry has its mirror with an equal value.
struct SparseEntries {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<SparseEntry> entries;
  bool symmetric = false;

  // Throws InputError on out-of-range or duplicate indices, non-finite values,
  // or a broken symmetry tag.
  void validate() const;

  // y = M x and y = M^T x.
  void matvec(const Vector& x, Vector& y) const;
  void rmatvec(const Vector& x, Vector& y) const;

  DenseMatrix to_dense() const;
  double frobenius_norm() const;
};

// splitmix64 finalizer; used to derive independent stream seeds from a base
// seed and a tuple of small integers (cell index, epoch, iteration, ...).
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = mix_seed(base);
  s = mix_seed(s ^ a);
  s = mix_seed(s ^ b);
  return mix_seed(s ^ c);
}

using Rng = std::mt19937_64;

inline DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols,
                                   Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = normal(rng);
  return m;
}

inline Vector gaussian_vector(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
  return v;
}

}  // namespace fws

#endif  // FWSCALE_TYPES_HPP_
