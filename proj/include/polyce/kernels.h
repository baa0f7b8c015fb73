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

#ifndef POLYCE_KERNELS_H_
#define POLYCE_KERNELS_H_

// Data-parallel inner loops. Every kernel has a portable scalar reference
// implementation and an AVX2/FMA variant; the variant is chosen once at
// runtime from the CPU feature bits. The two variants agree up to
// floating-point reassociation (FMA contraction and lane-wise partial sums).

#include <cstddef>
#include <span>
#include <string_view>

namespace polyce::kernels {

enum class Isa { kScalar, kAvx2 };

// Sum_i a[i] * b[i]. Spans must have equal length.
double Dot(std::span<const double> a, std::span<const double> b);

// y += alpha * x.
void Axpy(double alpha, std::span<const double> x, std::span<double> y);

// out[k] = sum_j coeffs[j] * points[k]^j (ascending coefficients, Horner).
void PolyEvalMany(std::span<const double> coeffs,
                  std::span<const double> points, std::span<double> out);

// The variant currently used by the dispatching entry points above.
Isa ActiveIsa();

// True if the running CPU (and this build) can execute the AVX2 variant.
bool Avx2Available();

// Overrides the dispatch choice (tests and benchmarking). Requesting kAvx2 on
// a machine without it falls back to kScalar; returns the ISA now in effect.
Isa SetIsa(Isa isa);

std::string_view IsaName(Isa isa);

namespace scalar {
double Dot(const double* a, const double* b, std::size_t n);
void Axpy(double alpha, const double* x, double* y, std::size_t n);
void PolyEvalMany(const double* coeffs, std::size_t num_coeffs,
                  const double* points, double* out, std::size_t n);
}  // namespace scalar

namespace avx2 {
double Dot(const double* a, const double* b, std::size_t n);
void Axpy(double alpha, const double* x, double* y, std::size_t n);
void PolyEvalMany(const double* coeffs, std::size_t num_coeffs,
                  const double* points, double* out, std::size_t n);
}  // namespace avx2

}  // namespace polyce::kernels

#endif  // POLYCE_KERNELS_H_
