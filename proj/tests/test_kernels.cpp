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

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "dexsieve/kernels.hpp"

using namespace dexsieve;

namespace {

struct BackendGuard {
  ~BackendGuard() { kernels::select_backend("auto"); }
};

std::vector<double> random_doubles(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) {
    // mix of magnitudes and signs, including exact zeros
    std::uint64_t bits = rng();
    switch (bits % 5) {
      case 0: x = 0.0; break;
      case 1: x = -0.0; break;
      case 2: x = static_cast<double>(static_cast<std::int64_t>(rng() % 2000) - 1000); break;
      default: x = std::ldexp(static_cast<double>(rng() % (1ull << 52)), -(int)(rng() % 60) - 1);
    }
  }
  return v;
}

}  // namespace

TEST_CASE("kernels: scalar reference behaves") {
  std::uint64_t acc[5] = {1, 2, 3, 4, 5};
  std::uint64_t x[5] = {10, 20, 30, 40, 50};
  kernels::detail::scalar_add_u64(acc, x, 5);
  CHECK(acc[0] == 11);
  CHECK(acc[4] == 55);

  double d[3] = {1.0, -2.0, 0.5};
  double out[3];
  kernels::detail::scalar_scale_f64(out, d, 2.0, 3);
  CHECK(out[0] == 2.0);
  CHECK(out[1] == -4.0);

  double a[2] = {3.0, -7.0};
  double b[2] = {5.0, -4.0};
  kernels::detail::scalar_abs_diff_f64(out, a, b, 2);
  CHECK(out[0] == 2.0);
  CHECK(out[1] == 3.0);
}

TEST_CASE("kernels: every available backend matches the scalar reference bit for bit") {
  BackendGuard guard;
  std::mt19937_64 rng(0x5eed);

  for (const char* backend : {"avx2", "neon"}) {
    if (!kernels::select_backend(backend)) continue;
    INFO("backend: ", backend);

    for (int round = 0; round < 50; ++round) {
      const std::size_t n = 1 + rng() % 300;  // covers remainders around lane widths

      std::vector<std::uint64_t> acc_ref(n), xs(n);
      for (std::size_t i = 0; i < n; ++i) {
        acc_ref[i] = rng();
        xs[i] = rng();
      }
      auto acc_simd = acc_ref;
      kernels::detail::scalar_add_u64(acc_ref.data(), xs.data(), n);
      kernels::add_u64(acc_simd.data(), xs.data(), n);
      CHECK(acc_ref == acc_simd);

      auto a = random_doubles(rng, n);
      auto b = random_doubles(rng, n);
      const double s = random_doubles(rng, 1)[0];

      auto axpy_ref = a;
      auto axpy_simd = a;
      kernels::detail::scalar_axpy_f64(axpy_ref.data(), b.data(), s, n);
      kernels::axpy_f64(axpy_simd.data(), b.data(), s, n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::memcmp(&axpy_ref[i], &axpy_simd[i], 8) == 0);
      }

      std::vector<double> diff_ref(n), diff_simd(n);
      kernels::detail::scalar_abs_diff_f64(diff_ref.data(), a.data(), b.data(), n);
      kernels::abs_diff_f64(diff_simd.data(), a.data(), b.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::memcmp(&diff_ref[i], &diff_simd[i], 8) == 0);
      }

      std::vector<double> scale_ref(n), scale_simd(n);
      kernels::detail::scalar_scale_f64(scale_ref.data(), a.data(), s, n);
      kernels::scale_f64(scale_simd.data(), a.data(), s, n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::memcmp(&scale_ref[i], &scale_simd[i], 8) == 0);
      }
    }
  }
}

TEST_CASE("kernels: backend selection") {
  BackendGuard guard;
  CHECK(kernels::select_backend("scalar"));
  CHECK(std::string(kernels::active_backend()) == "scalar");
  CHECK_FALSE(kernels::select_backend("no-such-backend"));
  CHECK(std::string(kernels::active_backend()) == "scalar");
  CHECK(kernels::select_backend("auto"));
}
