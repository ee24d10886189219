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

#pragma once

#include <cstddef>
#include <span>

namespace svckit::simd {

// The arithmetic inner loops of the toolkit, in one table so a scalar
// reference and vectorized variants stay interchangeable. Every variant
// of a kernel must agree with the scalar one within floating-point
// reassociation error; tests/test_simd_kernels.cpp enforces this.
struct Kernels {
  const char* name;

  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);

  // sum_i |x[i]|
  double (*sum_abs)(const double* x, std::size_t n);

  // sum_i x[i]^2
  double (*sum_squares)(const double* x, std::size_t n);

  // out[i] = a[i] + k * b[i]; out may alias a or b
  void (*scale_add)(double* out, const double* a, const double* b, double k,
                    std::size_t n);
};

/// Portable reference implementation; plain serial loops.
const Kernels& scalar_kernels();

/// AVX2+FMA implementation, or nullptr when the CPU lacks support
/// (or the build targets a non-x86 architecture).
const Kernels* avx2_kernels();

/// The table selected for this process. Picks the widest supported
/// variant once; the SVCKIT_SIMD environment variable ("scalar" or
/// "avx2") pins the choice, falling back to scalar when the requested
/// variant is unavailable.
const Kernels& active();

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline double sum_abs(std::span<const double> x) {
  return active().sum_abs(x.data(), x.size());
}

inline double sum_squares(std::span<const double> x) {
  return active().sum_squares(x.data(), x.size());
}

}  // namespace svckit::simd
