// Copyright 2026 The zeno-lab authors
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

#include "zeno/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "zeno/errors.hpp"

namespace zeno {

HermitianMatrix::HermitianMatrix(std::size_t dim, std::vector<Complex> row_major)
    : dim_(dim), data_(std::move(row_major)) {
  if (dim_ == 0) throw DimensionError("HermitianMatrix: dimension must be >= 1");
  if (data_.size() != dim_ * dim_) {
    throw DimensionError("HermitianMatrix: entry count does not match dimension");
  }
  double max_abs = 0.0;
  for (const Complex& v : data_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw NumericsError("HermitianMatrix: non-finite entry");
    }
    max_abs = std::max(max_abs, std::abs(v));
  }
  const double tol = 1e-12 * std::max(1.0, max_abs);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i; j < dim_; ++j) {
      if (std::abs(at(i, j) - std::conj(at(j, i))) > tol) {
        throw NumericsError("HermitianMatrix: matrix is not Hermitian within 1e-12");
      }
    }
  }
}

HermitianMatrix HermitianMatrix::diagonal(std::vector<double> eigenvalues) {
  const std::size_t k = eigenvalues.size();
  std::vector<Complex> data(k * k, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < k; ++i) data[i * k + i] = Complex{eigenvalues[i], 0.0};
  return HermitianMatrix(k, std::move(data));
}

void HermitianMatrix::apply(std::span<const Complex> x, std::span<Complex> out) const {
  for (std::size_t i = 0; i < dim_; ++i) {
    Complex s{0.0, 0.0};
    const Complex* row = data_.data() + i * dim_;
    for (std::size_t j = 0; j < dim_; ++j) s += row[j] * x[j];
    out[i] = s;
  }
}

std::vector<Complex> HermitianMatrix::apply(const std::vector<Complex>& x) const {
  std::vector<Complex> out(dim_);
  apply(x, out);
  return out;
}

}  // namespace zeno
