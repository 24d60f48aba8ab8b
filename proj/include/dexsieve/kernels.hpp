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

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Bucketwise vector kernels behind the histogram and class-profile math.
// Every kernel has a scalar reference implementation plus SIMD variants
// (AVX2 on x86-64, NEON on aarch64) selected once at runtime. All variants
// are bit-exact equivalents of the scalar path: integer lanes are exact by
// construction and the floating-point kernels perform the same elementwise
// operations in the same rounding order (multiply then add, never fused),
// so dispatch never changes results.
namespace dexsieve::kernels {

// acc[i] += x[i]
void add_u64(std::uint64_t* acc, const std::uint64_t* x, std::size_t n);

// acc[i] += x[i] * s
void axpy_f64(double* acc, const double* x, double s, std::size_t n);

// out[i] = |a[i] - b[i]|
void abs_diff_f64(double* out, const double* a, const double* b, std::size_t n);

// out[i] = x[i] * s
void scale_f64(double* out, const double* x, double s, std::size_t n);

// Currently dispatched backend: "scalar", "avx2", or "neon".
const char* active_backend();

// Forces a backend ("auto" re-probes the CPU). Returns false and leaves the
// dispatch unchanged when the requested backend is unavailable. Not safe to
// call concurrently with kernel use; intended for startup and tests.
bool select_backend(std::string_view name);

namespace detail {

void scalar_add_u64(std::uint64_t* acc, const std::uint64_t* x, std::size_t n);
void scalar_axpy_f64(double* acc, const double* x, double s, std::size_t n);
void scalar_abs_diff_f64(double* out, const double* a, const double* b, std::size_t n);
void scalar_scale_f64(double* out, const double* x, double s, std::size_t n);

#if defined(DEXSIEVE_WITH_AVX2)
void avx2_add_u64(std::uint64_t* acc, const std::uint64_t* x, std::size_t n);
void avx2_axpy_f64(double* acc, const double* x, double s, std::size_t n);
void avx2_abs_diff_f64(double* out, const double* a, const double* b, std::size_t n);
void avx2_scale_f64(double* out, const double* x, double s, std::size_t n);
#endif

#if defined(DEXSIEVE_WITH_NEON)
void neon_add_u64(std::uint64_t* acc, const std::uint64_t* x, std::size_t n);
void neon_axpy_f64(double* acc, const double* x, double s, std::size_t n);
void neon_abs_diff_f64(double* out, const double* a, const double* b, std::size_t n);
void neon_scale_f64(double* out, const double* x, double s, std::size_t n);
#endif

}  // namespace detail

}  // namespace dexsieve::kernels
