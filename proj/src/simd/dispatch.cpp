#include <atomic>
#include <cstdlib>
#include <string>

#include "modecenter/error.hpp"
#include "modecenter/simd.hpp"

namespace modecenter::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(MODECENTER_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() noexcept {
  if (const char* env = std::getenv("MODECENTER_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Backend::Scalar;
    if (v == "avx2" && cpu_has_avx2()) return Backend::Avx2;
  }
  return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() noexcept {
  static std::atomic<Backend> backend{initial_backend()};
  return backend;
}

}  // namespace

std::string_view backend_name(Backend b) noexcept {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
  }
  return "unknown";
}

bool backend_available(Backend b) noexcept {
  return b == Backend::Scalar || (b == Backend::Avx2 && cpu_has_avx2());
}

const Ops& ops_for(Backend b) {
  if (!backend_available(b)) {
    throw ConfigError("SIMD backend '" + std::string(backend_name(b)) +
                      "' is not available on this CPU/build");
  }
#if defined(MODECENTER_HAVE_AVX2)
  if (b == Backend::Avx2) return detail::kAvx2Ops;
#endif
  return detail::kScalarOps;
}

Backend active_backend() noexcept { return current().load(std::memory_order_relaxed); }

const Ops& ops() noexcept {
#if defined(MODECENTER_HAVE_AVX2)
  if (active_backend() == Backend::Avx2) return detail::kAvx2Ops;
#endif
  return detail::kScalarOps;
}

void set_backend(Backend b) {
  if (!backend_available(b)) {
    throw ConfigError("SIMD backend '" + std::string(backend_name(b)) +
                      "' is not available on this CPU/build");
  }
  current().store(b, std::memory_order_relaxed);
}

}  // namespace modecenter::simd
