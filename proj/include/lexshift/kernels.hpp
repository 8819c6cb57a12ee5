#pragma once

// Data-parallel inner loops shared by every distance computation. Each kernel
// has a scalar reference implementation and, on x86-64, an AVX2+FMA variant.
// The variant is selected once at startup from CPUID; LEXSHIFT_SIMD=scalar in
// the environment forces the reference path.
//
// All kernels accumulate in double regardless of the input element type. The
// variants differ from the reference only in summation order.

#include <cstddef>
#include <span>
#include <string_view>

namespace lexshift::kernels {

enum class Backend { scalar, avx2 };

struct CosineTerms {
  double dot = 0.0;
  double norm_u = 0.0;  // squared
  double norm_v = 0.0;  // squared
};

struct Table {
  double (*dot_f32)(const float*, const float*, std::size_t);
  double (*dot_f64)(const double*, const double*, std::size_t);
  double (*squared_distance_f32)(const float*, const float*, std::size_t);
  CosineTerms (*cosine_terms_f32)(const float*, const float*, std::size_t);
  CosineTerms (*cosine_terms_f64)(const double*, const double*, std::size_t);
  void (*accumulate_f32)(double*, const float*, std::size_t);
};

bool backend_supported(Backend b);
Backend active_backend();
// Throws std::invalid_argument if the CPU cannot run `b`.
void set_backend(Backend b);
const Table& table(Backend b);
std::string_view backend_name(Backend b);

// Dispatched entry points. Callers check lengths; these assume equal sizes.
inline double dot(std::span<const float> u, std::span<const float> v) {
  return table(active_backend()).dot_f32(u.data(), v.data(), u.size());
}
inline double dot(std::span<const double> u, std::span<const double> v) {
  return table(active_backend()).dot_f64(u.data(), v.data(), u.size());
}
inline double squared_distance(std::span<const float> u, std::span<const float> v) {
  return table(active_backend()).squared_distance_f32(u.data(), v.data(), u.size());
}
inline CosineTerms cosine_terms(std::span<const float> u, std::span<const float> v) {
  return table(active_backend()).cosine_terms_f32(u.data(), v.data(), u.size());
}
inline CosineTerms cosine_terms(std::span<const double> u, std::span<const double> v) {
  return table(active_backend()).cosine_terms_f64(u.data(), v.data(), u.size());
}
// acc[i] += x[i]
inline void accumulate(std::span<double> acc, std::span<const float> x) {
  table(active_backend()).accumulate_f32(acc.data(), x.data(), x.size());
}

}  // namespace lexshift::kernels
