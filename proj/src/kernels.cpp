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

#include "dexsieve/kernels.hpp"

#include <cmath>

namespace dexsieve::kernels {

namespace detail {

void scalar_add_u64(std::uint64_t* acc, const std::uint64_t* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += x[i];
}

void scalar_axpy_f64(double* acc, const double* x, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double p = x[i] * s;
    acc[i] = acc[i] + p;
  }
}

void scalar_abs_diff_f64(double* out, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(a[i] - b[i]);
}

void scalar_scale_f64(double* out, const double* x, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * s;
}

}  // namespace detail

namespace {

struct Backend {
  const char* name;
  void (*add_u64)(std::uint64_t*, const std::uint64_t*, std::size_t);
  void (*axpy_f64)(double*, const double*, double, std::size_t);
  void (*abs_diff_f64)(double*, const double*, const double*, std::size_t);
  void (*scale_f64)(double*, const double*, double, std::size_t);
};

constexpr Backend kScalarBackend = {
    "scalar",
    detail::scalar_add_u64,
    detail::scalar_axpy_f64,
    detail::scalar_abs_diff_f64,
    detail::scalar_scale_f64,
};

#if defined(DEXSIEVE_WITH_AVX2)
constexpr Backend kAvx2Backend = {
    "avx2",
    detail::avx2_add_u64,
    detail::avx2_axpy_f64,
    detail::avx2_abs_diff_f64,
    detail::avx2_scale_f64,
};
#endif

#if defined(DEXSIEVE_WITH_NEON)
constexpr Backend kNeonBackend = {
    "neon",
    detail::neon_add_u64,
    detail::neon_axpy_f64,
    detail::neon_abs_diff_f64,
    detail::neon_scale_f64,
};
#endif

const Backend* probe_backend() {
#if defined(DEXSIEVE_WITH_AVX2)
  if (__builtin_cpu_supports("avx2")) return &kAvx2Backend;
#endif
#if defined(DEXSIEVE_WITH_NEON)
  return &kNeonBackend;  // NEON is baseline on aarch64
#endif
  return &kScalarBackend;
}

const Backend* g_backend = probe_backend();

}  // namespace

void add_u64(std::uint64_t* acc, const std::uint64_t* x, std::size_t n) {
  g_backend->add_u64(acc, x, n);
}

void axpy_f64(double* acc, const double* x, double s, std::size_t n) {
  g_backend->axpy_f64(acc, x, s, n);
}

void abs_diff_f64(double* out, const double* a, const double* b, std::size_t n) {
  g_backend->abs_diff_f64(out, a, b, n);
}

void scale_f64(double* out, const double* x, double s, std::size_t n) {
  g_backend->scale_f64(out, x, s, n);
}

const char* active_backend() { return g_backend->name; }

bool select_backend(std::string_view name) {
  if (name == "auto") {
    g_backend = probe_backend();
    return true;
  }
  if (name == "scalar") {
    g_backend = &kScalarBackend;
    return true;
  }
#if defined(DEXSIEVE_WITH_AVX2)
  if (name == "avx2" && __builtin_cpu_supports("avx2")) {
    g_backend = &kAvx2Backend;
    return true;
  }
#endif
#if defined(DEXSIEVE_WITH_NEON)
  if (name == "neon") {
    g_backend = &kNeonBackend;
    return true;
  }
#endif
  return false;
}

}  // namespace dexsieve::kernels
