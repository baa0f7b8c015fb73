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

#include <atomic>
#include <cassert>
#include <cstdlib>
#include <cstring>

#include "polyce/kernels.h"

namespace polyce::kernels {
namespace {

bool DetectAvx2() {
#if defined(POLYCE_HAVE_AVX2_TU) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa InitialIsa() {
  if (const char* env = std::getenv("POLYCE_ISA"); env != nullptr &&
                                                   std::strcmp(env, "scalar") == 0) {
    return Isa::kScalar;
  }
  return DetectAvx2() ? Isa::kAvx2 : Isa::kScalar;
}

std::atomic<Isa>& Current() {
  static std::atomic<Isa> isa{InitialIsa()};
  return isa;
}

}  // namespace

bool Avx2Available() {
  static const bool available = DetectAvx2();
  return available;
}

Isa ActiveIsa() { return Current().load(std::memory_order_relaxed); }

Isa SetIsa(Isa isa) {
  if (isa == Isa::kAvx2 && !Avx2Available()) isa = Isa::kScalar;
  Current().store(isa, std::memory_order_relaxed);
  return isa;
}

std::string_view IsaName(Isa isa) {
  return isa == Isa::kAvx2 ? "avx2" : "scalar";
}

double Dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  if (ActiveIsa() == Isa::kAvx2) return avx2::Dot(a.data(), b.data(), a.size());
  return scalar::Dot(a.data(), b.data(), a.size());
}

void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  if (ActiveIsa() == Isa::kAvx2) {
    avx2::Axpy(alpha, x.data(), y.data(), x.size());
  } else {
    scalar::Axpy(alpha, x.data(), y.data(), x.size());
  }
}

void PolyEvalMany(std::span<const double> coeffs,
                  std::span<const double> points, std::span<double> out) {
  assert(points.size() == out.size());
  if (ActiveIsa() == Isa::kAvx2) {
    avx2::PolyEvalMany(coeffs.data(), coeffs.size(), points.data(), out.data(),
                       points.size());
  } else {
    scalar::PolyEvalMany(coeffs.data(), coeffs.size(), points.data(),
                         out.data(), points.size());
  }
}

}  // namespace polyce::kernels
