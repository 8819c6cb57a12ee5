#pragma once

#include "lexshift/kernels.hpp"

namespace lexshift::kernels {

namespace scalar {
double dot_f32(const float* u, const float* v, std::size_t n);
double dot_f64(const double* u, const double* v, std::size_t n);
double squared_distance_f32(const float* u, const float* v, std::size_t n);
CosineTerms cosine_terms_f32(const float* u, const float* v, std::size_t n);
CosineTerms cosine_terms_f64(const double* u, const double* v, std::size_t n);
void accumulate_f32(double* acc, const float* x, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define LEXSHIFT_HAVE_AVX2_KERNELS 1
namespace avx2 {
double dot_f32(const float* u, const float* v, std::size_t n);
double dot_f64(const double* u, const double* v, std::size_t n);
double squared_distance_f32(const float* u, const float* v, std::size_t n);
CosineTerms cosine_terms_f32(const float* u, const float* v, std::size_t n);
CosineTerms cosine_terms_f64(const double* u, const double* v, std::size_t n);
void accumulate_f32(double* acc, const float* x, std::size_t n);
}  // namespace avx2
#else
#define LEXSHIFT_HAVE_AVX2_KERNELS 0
#endif

}  // namespace lexshift::kernels
