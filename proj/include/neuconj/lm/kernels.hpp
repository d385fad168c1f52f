#pragma once

// Inner-loop kernels for the transformer. Every kernel has a scalar
// reference implementation; x86-64 builds also carry AVX2+FMA variants for
// float and double that are chosen at runtime when the CPU supports them.
// Other element types (long double, used for gradient checking) always take
// the scalar path.

#include <cstddef>
#include <span>
#include <string_view>
#include <type_traits>

namespace neuconj::lm::kernels {

enum class Backend { Scalar, Avx2 };

std::string_view to_string(Backend b);

bool avx2_supported();

// Defaults to Avx2 when supported, unless NEUCONJ_KERNELS=scalar is set in
// the environment. Selecting an unsupported backend throws neuconj::Error.
Backend active_backend();
void set_backend(Backend b);

namespace scalar {

template <class T>
T dot(const T* a, const T* b, std::size_t n) {
  T acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

template <class T>
void axpy(T alpha, const T* x, T* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

template <class T>
void scale(T alpha, T* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

}  // namespace scalar

namespace avx2 {

float dot(const float* a, const float* b, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
void axpy(float alpha, const float* x, float* y, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(float alpha, float* x, std::size_t n);
void scale(double alpha, double* x, std::size_t n);

}  // namespace avx2

namespace detail {
template <class T>
inline constexpr bool has_simd = std::is_same_v<T, float> || std::is_same_v<T, double>;
bool use_avx2();
}  // namespace detail

template <class T>
T dot(std::span<const T> a, std::span<const T> b) {
  if constexpr (detail::has_simd<T>) {
    if (detail::use_avx2()) return avx2::dot(a.data(), b.data(), a.size());
  }
  return scalar::dot(a.data(), b.data(), a.size());
}

// y += alpha * x
template <class T>
void axpy(T alpha, std::span<const T> x, std::span<T> y) {
  if constexpr (detail::has_simd<T>) {
    if (detail::use_avx2()) return avx2::axpy(alpha, x.data(), y.data(), x.size());
  }
  scalar::axpy(alpha, x.data(), y.data(), x.size());
}

template <class T>
void scale(T alpha, std::span<T> x) {
  if constexpr (detail::has_simd<T>) {
    if (detail::use_avx2()) return avx2::scale(alpha, x.data(), x.size());
  }
  scalar::scale(alpha, x.data(), x.size());
}

}  // namespace neuconj::lm::kernels
