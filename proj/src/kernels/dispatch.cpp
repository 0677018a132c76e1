#include <cstdlib>
#include <cstring>

#include "irsense/kernels/bm25_kernel.hpp"

namespace irsense::kernels {

bool cpu_supports_avx2() {
#if defined(IRSENSE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

struct selection {
  bm25_accumulate_fn fn;
  const char* name;
};

selection select() {
  const char* forced = std::getenv("IRSENSE_KERNEL");
  if (forced && std::strcmp(forced, "scalar") == 0) {
    return {bm25_accumulate_scalar, "scalar"};
  }
#if defined(IRSENSE_HAVE_AVX2)
  if (forced && std::strcmp(forced, "avx2") == 0) {
    return {bm25_accumulate_avx2, "avx2"};
  }
  if (cpu_supports_avx2()) {
    return {bm25_accumulate_avx2, "avx2"};
  }
#endif
  return {bm25_accumulate_scalar, "scalar"};
}

const selection& cached() {
  static const selection s = select();
  return s;
}

}  // namespace

bm25_accumulate_fn bm25_accumulate() { return cached().fn; }

const char* bm25_kernel_name() { return cached().name; }

}  // namespace irsense::kernels
