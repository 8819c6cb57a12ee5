#include "kernels_impl.hpp"

namespace lexshift::kernels::scalar {

double dot_f32(const float* u, const float* v, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += static_cast<double>(u[i]) * static_cast<double>(v[i]);
  return s;
}

double dot_f64(const double* u, const double* v, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += u[i] * v[i];
  return s;
}

double squared_distance_f32(const float* u, const float* v, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(u[i]) - static_cast<double>(v[i]);
    s += d * d;
  }
  return s;
}

CosineTerms cosine_terms_f32(const float* u, const float* v, std::size_t n) {
  CosineTerms t;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = u[i];
    const double b = v[i];
    t.dot += a * b;
    t.norm_u += a * a;
    t.norm_v += b * b;
  }
  return t;
}

CosineTerms cosine_terms_f64(const double* u, const double* v, std::size_t n) {
  CosineTerms t;
  for (std::size_t i = 0; i < n; ++i) {
    t.dot += u[i] * v[i];
    t.norm_u += u[i] * u[i];
    t.norm_v += v[i] * v[i];
  }
  return t;
}

void accumulate_f32(double* acc, const float* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += x[i];
}

}  // namespace lexshift::kernels::scalar
