#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace lexshift::kernels {

namespace {

constexpr Table kScalar{scalar::dot_f32,          scalar::dot_f64,          scalar::squared_distance_f32,
                        scalar::cosine_terms_f32, scalar::cosine_terms_f64, scalar::accumulate_f32};

#if LEXSHIFT_HAVE_AVX2_KERNELS
constexpr Table kAvx2{avx2::dot_f32,          avx2::dot_f64,          avx2::squared_distance_f32,
                      avx2::cosine_terms_f32, avx2::cosine_terms_f64, avx2::accumulate_f32};
#endif

Backend detect() {
  if (const char* env = std::getenv("LEXSHIFT_SIMD"); env && std::strcmp(env, "scalar") == 0) {
    return Backend::scalar;
  }
  return backend_supported(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

}  // namespace

bool backend_supported(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if LEXSHIFT_HAVE_AVX2_KERNELS
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (!backend_supported(b)) {
    throw std::invalid_argument("SIMD backend not supported on this CPU: " + std::string(backend_name(b)));
  }
  current().store(b, std::memory_order_relaxed);
}

const Table& table(Backend b) {
#if LEXSHIFT_HAVE_AVX2_KERNELS
  if (b == Backend::avx2) return kAvx2;
#endif
  (void)b;
  return kScalar;
}

std::string_view backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

}  // namespace lexshift::kernels
