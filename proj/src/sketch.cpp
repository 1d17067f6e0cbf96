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

#include "fwscale/sketch.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "fwscale/errors.hpp"

namespace fws {

SketchState::SketchState(std::size_t rows, std::size_t cols, std::size_t rank,
                         std::uint64_t seed)
    : rows_(rows), cols_(cols), rank_(rank) {
  if (rows == 0 || cols == 0) throw ParameterError("sketch of an empty matrix");
  if (rank < 1) throw ParameterError("sketch rank must be >= 1");
  Rng rng(seed);
  psi_ = gaussian_matrix(cols, range_size(), rng);
  phi_ = gaussian_matrix(corange_size(), rows, rng);
  yc_ = DenseMatrix::Zero(rows, range_size());
  yr_ = DenseMatrix::Zero(corange_size(), cols);
}

void SketchState::update(double beta1, double beta2, const Vector& u,
                         const Vector& v) {
  if (static_cast<std::size_t>(u.size()) != rows_ ||
      static_cast<std::size_t>(v.size()) != cols_)
    throw InputError("sketch update: factor dimensions do not match");
  const Eigen::RowVectorXd vpsi = v.transpose() * psi_;
  const Vector phiu = phi_ * u;
  yc_ = beta1 * yc_ + beta2 * u * vpsi;
  yr_ = beta1 * yr_ + beta2 * phiu * v.transpose();
  if (shadow_) *shadow_ = beta1 * *shadow_ + beta2 * u * v.transpose();
}

void SketchState::enable_shadow() {
  if (!yc_.isZero(0.0) || !yr_.isZero(0.0))
    throw InputError("shadow must be enabled before the first update");
  shadow_ = DenseMatrix::Zero(rows_, cols_);
}

SketchState sketch_init(std::size_t rows, std::size_t cols, std::size_t rank,
                        std::uint64_t seed) {
  return SketchState(rows, cols, rank, seed);
}

SvdFactors sketch_reconstruct(const SketchState& state, std::size_t r) {
  if (r < 1) throw ParameterError("reconstruction rank must be >= 1");
  const DenseMatrix& yc = state.range_sketch();
  // With fewer rows than sketch columns the range is all of R^m.
  const DenseMatrix q = yc.rows() >= yc.cols()
                            ? thin_qr(yc).q
                            : DenseMatrix::Identity(yc.rows(), yc.rows());
  const DenseMatrix b = pinv_solve(state.phi() * q, state.corange_sketch());
  SvdFactors f = truncated_svd(b, r);
  f.u = q * f.u;
  return f;
}

namespace {

void write_matrix(const DenseMatrix& m, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      std::fprintf(f, j ? " %.17g" : "%.17g", m(i, j));
    std::fputc('\n', f);
  }
  const bool ok = std::ferror(f) == 0;
  if (std::fclose(f) != 0 || !ok) throw IoError("error writing '" + path + "'");
}

DenseMatrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!ls.eof()) throw InputError(path + ": malformed number");
    rows.push_back(std::move(row));
  }
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  DenseMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw InputError(path + ": ragged rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

}  // namespace

void save_factors(const SvdFactors& f, const std::string& u_path,
                  const std::string& sigma_path, const std::string& v_path) {
  write_matrix(f.u, u_path);
  write_matrix(f.sigma, sigma_path);
  write_matrix(f.v, v_path);
}

SvdFactors load_factors(const std::string& u_path,
                        const std::string& sigma_path,
                        const std::string& v_path) {
  SvdFactors f;
  f.u = read_matrix(u_path);
  const DenseMatrix s = read_matrix(sigma_path);
  f.v = read_matrix(v_path);
  if (s.cols() > 1) throw InputError(sigma_path + ": expected one value per line");
  f.sigma = s.rows() ? Vector(s.col(0)) : Vector();
  if (f.u.cols() != f.sigma.size() || f.v.cols() != f.sigma.size()) {
    // An empty factorization is written as blank lines.
    if (f.sigma.size() == 0) {
      f.u = DenseMatrix::Zero(f.u.rows(), 0);
      f.v = DenseMatrix::Zero(f.v.rows(), 0);
    } else {
      throw InputError("factor files disagree on the rank");
    }
  }
  return f;
}

}  // namespace fws
