// Non-x86 stand-ins for the AVX2 entry points; never selected at runtime
// because avx2_supported() is false there.

#include "neuconj/lm/kernels.hpp"

namespace neuconj::lm::kernels::avx2 {

float dot(const float* a, const float* b, std::size_t n) { return scalar::dot(a, b, n); }
double dot(const double* a, const double* b, std::size_t n) { return scalar::dot(a, b, n); }
void axpy(float alpha, const float* x, float* y, std::size_t n) { scalar::axpy(alpha, x, y, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { scalar::axpy(alpha, x, y, n); }
void scale(float alpha, float* x, std::size_t n) { scalar::scale(alpha, x, n); }
void scale(double alpha, double* x, std::size_t n) { scalar::scale(alpha, x, n); }

}  // namespace neuconj::lm::kernels::avx2
