#include "pathint/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace pathint::kernels {

bool avx2_supported() {
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

const Backend* pick_default() {
  if (const char* env = std::getenv("PATHINT_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_backend();
    if (std::strcmp(env, "avx2") == 0 && avx2_supported()) return &avx2_backend();
  }
  return avx2_supported() ? &avx2_backend() : &scalar_backend();
}

std::atomic<const Backend*> g_active{nullptr};

}  // namespace

const Backend& active() {
  const Backend* b = g_active.load(std::memory_order_acquire);
  if (!b) {
    b = pick_default();
    g_active.store(b, std::memory_order_release);
  }
  return *b;
}

void force(const char* name) {
  if (std::strcmp(name, "scalar") == 0) {
    g_active.store(&scalar_backend(), std::memory_order_release);
  } else if (std::strcmp(name, "avx2") == 0) {
    if (!avx2_supported()) throw std::runtime_error("avx2 not supported on this CPU");
    g_active.store(&avx2_backend(), std::memory_order_release);
  } else if (std::strcmp(name, "auto") == 0) {
    g_active.store(pick_default(), std::memory_order_release);
  } else {
    throw std::invalid_argument("unknown kernel backend name");
  }
}

}  // namespace pathint::kernels
