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

// Two-sided randomized sketch of an m x n matrix X that is only ever seen
// through rank-one updates X <- b1 X + b2 u v^T:
//
//   Y^C = X Psi   (m x (2r+1)),   Y^R = Phi X   ((4r+3) x n)
//
// Reconstruction: Y^C = QR, B = (Phi Q)^+ Y^R, X_hat = Q [B]_r.

#ifndef FWSCALE_SKETCH_HPP_
#define FWSCALE_SKETCH_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "fwscale/spectral.hpp"
#include "fwscale/types.hpp"

namespace fws {

class SketchState {
 public:
  // Psi and Phi i.i.d. standard normal from `seed`; Y^C, Y^R zero.
  SketchState(std::size_t rows, std::size_t cols, std::size_t rank,
              std::uint64_t seed);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t rank() const { return rank_; }
  std::size_t range_size() const { return 2 * rank_ + 1; }    // k
  std::size_t corange_size() const { return 4 * rank_ + 3; }  // l

  const DenseMatrix& psi() const { return psi_; }
  const DenseMatrix& phi() const { return phi_; }
  const DenseMatrix& range_sketch() const { return yc_; }    // Y^C
  const DenseMatrix& corange_sketch() const { return yr_; }  // Y^R

  // Y^C <- b1 Y^C + b2 u (v^T Psi),  Y^R <- b1 Y^R + b2 (Phi u) v^T.
  // Throws InputError on a dimension mismatch.
  void update(double beta1, double beta2, const Vector& u, const Vector& v);

  // Floats held by Y^C and Y^R.
  std::size_t buffer_floats() const {
    return static_cast<std::size_t>(yc_.size() + yr_.size());
  }

  // Debug facility: a dense copy of X updated alongside the sketch.
  void enable_shadow();
  bool has_shadow() const { return shadow_.has_value(); }
  const DenseMatrix& shadow() const { return *shadow_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t rank_;
  DenseMatrix psi_;
  DenseMatrix phi_;
  DenseMatrix yc_;
  DenseMatrix yr_;
  std::optional<DenseMatrix> shadow_;
};

SketchState sketch_init(std::size_t rows, std::size_t cols, std::size_t rank,
                        std::uint64_t seed);

inline void sketch_update(SketchState& state, double beta1, double beta2,
                          const Vector& u, const Vector& v) {
  state.update(beta1, beta2, u, v);
}

// Rank <= r factorization (Q U_B, Sigma_B, V_B). The R factor of Y^C is not
// used.
SvdFactors sketch_reconstruct(const SketchState& state, std::size_t r);

// Plain-text factor export: U (m x k), Sigma (k), V (n x k), one matrix row
// per line, %.17g.
void save_factors(const SvdFactors& f, const std::string& u_path,
                  const std::string& sigma_path, const std::string& v_path);
SvdFactors load_factors(const std::string& u_path,
                        const std::string& sigma_path,
                        const std::string& v_path);

}  // namespace fws

#endif  // FWSCALE_SKETCH_HPP_
