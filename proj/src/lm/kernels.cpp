#include "neuconj/lm/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "neuconj/error.hpp"

namespace neuconj::lm::kernels {

namespace {

Backend initial_backend() {
  const char* env = std::getenv("NEUCONJ_KERNELS");
  if (env && std::string(env) == "scalar") return Backend::Scalar;
  return avx2_supported() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{initial_backend()};
  return backend;
}

}  // namespace

std::string_view to_string(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (b == Backend::Avx2 && !avx2_supported()) {
    throw Error("AVX2/FMA kernels are not supported on this CPU");
  }
  current().store(b, std::memory_order_relaxed);
}

namespace detail {
bool use_avx2() { return current().load(std::memory_order_relaxed) == Backend::Avx2; }
}  // namespace detail

}  // namespace neuconj::lm::kernels
