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

#include <cstdlib>
#include <cstring>

#include "svckit/simd/kernels.hpp"

namespace svckit::simd {

// Defined in kernels_avx2.cpp; the table exists whenever the build
// targets x86, independent of what the host CPU supports.
const Kernels* avx2_kernels_impl();

namespace {

bool cpu_has_avx2_fma() {
#if (defined(__x86_64__) || defined(__i386__)) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Kernels& resolve() {
  const Kernels* avx2 = avx2_kernels();
  const char* pin = std::getenv("SVCKIT_SIMD");
  if (pin != nullptr) {
    if (std::strcmp(pin, "scalar") == 0) return scalar_kernels();
    if (std::strcmp(pin, "avx2") == 0 && avx2 != nullptr) return *avx2;
    // Unknown or unavailable request: take the portable path.
    return scalar_kernels();
  }
  return avx2 != nullptr ? *avx2 : scalar_kernels();
}

}  // namespace

const Kernels* avx2_kernels() {
  return cpu_has_avx2_fma() ? avx2_kernels_impl() : nullptr;
}

const Kernels& active() {
  static const Kernels& picked = resolve();
  return picked;
}

}  // namespace svckit::simd
