/*
 * Copyright (C) 2026 The dexsieve Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// NEON kernel variants for aarch64. Same rounding discipline as the scalar
// reference: separate multiply and add, never fused.

#include <arm_neon.h>

#include <cmath>

#include "dexsieve/kernels.hpp"

namespace dexsieve::kernels::detail {

void neon_add_u64(std::uint64_t* acc, const std::uint64_t* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    uint64x2_t a = vld1q_u64(acc + i);
    uint64x2_t b = vld1q_u64(x + i);
    vst1q_u64(acc + i, vaddq_u64(a, b));
  }
  for (; i < n; ++i) acc[i] += x[i];
}

void neon_axpy_f64(double* acc, const double* x, double s, std::size_t n) {
  const float64x2_t vs = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t a = vld1q_f64(acc + i);
    float64x2_t b = vld1q_f64(x + i);
    vst1q_f64(acc + i, vaddq_f64(a, vmulq_f64(b, vs)));
  }
  for (; i < n; ++i) acc[i] = acc[i] + x[i] * s;
}

void neon_abs_diff_f64(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    vst1q_f64(out + i, vabsq_f64(d));
  }
  for (; i < n; ++i) out[i] = std::fabs(a[i] - b[i]);
}

void neon_scale_f64(double* out, const double* x, double s, std::size_t n) {
  const float64x2_t vs = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i, vmulq_f64(vld1q_f64(x + i), vs));
  }
  for (; i < n; ++i) out[i] = x[i] * s;
}

}  // namespace dexsieve::kernels::detail
