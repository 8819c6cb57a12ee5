#include "kernels_impl.hpp"

#if LEXSHIFT_HAVE_AVX2_KERNELS

#include <immintrin.h>

#define LEXSHIFT_AVX2 __attribute__((target("avx2,fma")))

namespace lexshift::kernels::avx2 {

namespace {

LEXSHIFT_AVX2 inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

LEXSHIFT_AVX2 inline __m256d load4(const float* p) { return _mm256_cvtps_pd(_mm_loadu_ps(p)); }

}  // namespace

LEXSHIFT_AVX2 double dot_f32(const float* u, const float* v, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_fmadd_pd(load4(u + i), load4(v + i), a0);
    a1 = _mm256_fmadd_pd(load4(u + i + 4), load4(v + i + 4), a1);
  }
  if (i + 4 <= n) {
    a0 = _mm256_fmadd_pd(load4(u + i), load4(v + i), a0);
    i += 4;
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += static_cast<double>(u[i]) * static_cast<double>(v[i]);
  return s;
}

LEXSHIFT_AVX2 double dot_f64(const double* u, const double* v, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(u + i), _mm256_loadu_pd(v + i), a0);
    a1 = _mm256_fmadd_pd(_mm256_loadu_pd(u + i + 4), _mm256_loadu_pd(v + i + 4), a1);
  }
  if (i + 4 <= n) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(u + i), _mm256_loadu_pd(v + i), a0);
    i += 4;
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += u[i] * v[i];
  return s;
}

LEXSHIFT_AVX2 double squared_distance_f32(const float* u, const float* v, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(load4(u + i), load4(v + i));
    const __m256d d1 = _mm256_sub_pd(load4(u + i + 4), load4(v + i + 4));
    a0 = _mm256_fmadd_pd(d0, d0, a0);
    a1 = _mm256_fmadd_pd(d1, d1, a1);
  }
  if (i + 4 <= n) {
    const __m256d d0 = _mm256_sub_pd(load4(u + i), load4(v + i));
    a0 = _mm256_fmadd_pd(d0, d0, a0);
    i += 4;
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) {
    const double d = static_cast<double>(u[i]) - static_cast<double>(v[i]);
    s += d * d;
  }
  return s;
}

LEXSHIFT_AVX2 CosineTerms cosine_terms_f32(const float* u, const float* v, std::size_t n) {
  __m256d uv = _mm256_setzero_pd();
  __m256d uu = _mm256_setzero_pd();
  __m256d vv = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = load4(u + i);
    const __m256d b = load4(v + i);
    uv = _mm256_fmadd_pd(a, b, uv);
    uu = _mm256_fmadd_pd(a, a, uu);
    vv = _mm256_fmadd_pd(b, b, vv);
  }
  CosineTerms t{hsum(uv), hsum(uu), hsum(vv)};
  for (; i < n; ++i) {
    const double a = u[i];
    const double b = v[i];
    t.dot += a * b;
    t.norm_u += a * a;
    t.norm_v += b * b;
  }
  return t;
}

LEXSHIFT_AVX2 CosineTerms cosine_terms_f64(const double* u, const double* v, std::size_t n) {
  __m256d uv = _mm256_setzero_pd();
  __m256d uu = _mm256_setzero_pd();
  __m256d vv = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(u + i);
    const __m256d b = _mm256_loadu_pd(v + i);
    uv = _mm256_fmadd_pd(a, b, uv);
    uu = _mm256_fmadd_pd(a, a, uu);
    vv = _mm256_fmadd_pd(b, b, vv);
  }
  CosineTerms t{hsum(uv), hsum(uu), hsum(vv)};
  for (; i < n; ++i) {
    t.dot += u[i] * v[i];
    t.norm_u += u[i] * u[i];
    t.norm_v += v[i] * v[i];
  }
  return t;
}

LEXSHIFT_AVX2 void accumulate_f32(double* acc, const float* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), load4(x + i)));
  }
  for (; i < n; ++i) acc[i] += x[i];
}

}  // namespace lexshift::kernels::avx2

#endif
