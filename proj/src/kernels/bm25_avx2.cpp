#include "irsense/kernels/bm25_kernel.hpp"

#if defined(IRSENSE_HAVE_AVX2)

#include <immintrin.h>

namespace irsense::kernels {

// Four documents per iteration: convert tf to double, gather norms, then one
// mul/add/div each, matching the scalar kernel's operation order lane-wise.
// AVX2 has no scatter, so the accumulate stores go through a staging buffer;
// dense ids are unique within a posting block, so lane order cannot alias.
void bm25_accumulate_avx2(const std::uint32_t* docs, const std::uint32_t* tfs, std::size_t n,
                          double weight, const double* norms, double* accum) {
  const __m256d w = _mm256_set1_pd(weight);
  std::size_t i = 0;
  alignas(32) double contrib[4];
  for (; i + 4 <= n; i += 4) {
    const __m128i d32 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(docs + i));
    const __m128i t32 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(tfs + i));
    const __m256d tf = _mm256_cvtepi32_pd(t32);
    const __m256d norm = _mm256_i32gather_pd(norms, d32, 8);
    const __m256d num = _mm256_mul_pd(w, tf);
    const __m256d den = _mm256_add_pd(tf, norm);
    _mm256_store_pd(contrib, _mm256_div_pd(num, den));
    accum[docs[i + 0]] += contrib[0];
    accum[docs[i + 1]] += contrib[1];
    accum[docs[i + 2]] += contrib[2];
    accum[docs[i + 3]] += contrib[3];
  }
  for (; i < n; ++i) {
    const double tf = static_cast<double>(tfs[i]);
    accum[docs[i]] += weight * tf / (tf + norms[docs[i]]);
  }
}

}  // namespace irsense::kernels

#endif  // IRSENSE_HAVE_AVX2
