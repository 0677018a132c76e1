#pragma once

#include <cstddef>
#include <cstdint>

namespace irsense::kernels {

// Posting-block accumulation, the scoring hot loop:
//
//   accum[docs[i]] += weight * tfs[i] / (tfs[i] + norms[docs[i]])   for i in [0, n)
//
// `docs` holds dense document ids (unique within one call), `tfs` the term
// frequencies, `norms` the per-document BM25 length normalizers, and `weight`
// the per-term weight idf * (k1 + 1) * query_multiplicity.
//
// Every variant must produce bit-identical results: one multiply, one add,
// one divide per element, accumulated in input order. The equivalence suite
// asserts exact equality, which keeps written artifacts byte-stable no matter
// which variant the dispatcher picks.
using bm25_accumulate_fn = void (*)(const std::uint32_t* docs, const std::uint32_t* tfs,
                                    std::size_t n, double weight, const double* norms,
                                    double* accum);

void bm25_accumulate_scalar(const std::uint32_t* docs, const std::uint32_t* tfs, std::size_t n,
                            double weight, const double* norms, double* accum);

#if defined(IRSENSE_HAVE_AVX2)
void bm25_accumulate_avx2(const std::uint32_t* docs, const std::uint32_t* tfs, std::size_t n,
                          double weight, const double* norms, double* accum);
#endif

bool cpu_supports_avx2();

// Runtime-selected variant. IRSENSE_KERNEL={auto,scalar,avx2} overrides.
bm25_accumulate_fn bm25_accumulate();
const char* bm25_kernel_name();

}  // namespace irsense::kernels
