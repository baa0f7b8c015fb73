// Copyright 2026 The polyce Authors.
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

#include "polyce/kernels.h"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#endif

namespace polyce::kernels::avx2 {

#if defined(__AVX2__) && defined(__FMA__)

double Dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  __m128d lo = _mm256_castpd256_pd128(acc0);
  __m128d hi = _mm256_extractf128_pd(acc0, 1);
  lo = _mm_add_pd(lo, hi);
  double sum = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void Axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void PolyEvalMany(const double* coeffs, std::size_t num_coeffs,
                  const double* points, double* out, std::size_t n) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d t = _mm256_loadu_pd(points + k);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = num_coeffs; j-- > 0;) {
      acc = _mm256_fmadd_pd(acc, t, _mm256_set1_pd(coeffs[j]));
    }
    _mm256_storeu_pd(out + k, acc);
  }
  if (k < n) scalar::PolyEvalMany(coeffs, num_coeffs, points + k, out + k, n - k);
}

#else  // Built without AVX2 code generation; never selected at runtime.

double Dot(const double* a, const double* b, std::size_t n) {
  return scalar::Dot(a, b, n);
}
void Axpy(double alpha, const double* x, double* y, std::size_t n) {
  scalar::Axpy(alpha, x, y, n);
}
void PolyEvalMany(const double* coeffs, std::size_t num_coeffs,
                  const double* points, double* out, std::size_t n) {
  scalar::PolyEvalMany(coeffs, num_coeffs, points, out, n);
}

#endif

}  // namespace polyce::kernels::avx2
