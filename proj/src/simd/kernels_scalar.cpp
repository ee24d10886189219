// Copyright 2026 The svckit Authors.
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

#include <cmath>
#include <cstddef>

#include "svckit/simd/kernels.hpp"

namespace svckit::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += a[i] * b[i];
  }
  return acc;
}

double sum_abs_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += std::fabs(x[i]);
  }
  return acc;
}

double sum_squares_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += x[i] * x[i];
  }
  return acc;
}

void scale_add_scalar(double* out, const double* a, const double* b, double k,
                      std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = a[i] + k * b[i];
  }
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels table{"scalar", dot_scalar, sum_abs_scalar,
                             sum_squares_scalar, scale_add_scalar};
  return table;
}

}  // namespace svckit::simd
