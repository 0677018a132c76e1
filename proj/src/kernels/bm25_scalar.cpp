#include "irsense/kernels/bm25_kernel.hpp"

namespace irsense::kernels {

// Reference kernel. Compiled with -ffp-contract=off so no FMA contraction can
// change rounding relative to the vector variants.
void bm25_accumulate_scalar(const std::uint32_t* docs, const std::uint32_t* tfs, std::size_t n,
                            double weight, const double* norms, double* accum) {
  for (std::size_t i = 0; i < n; ++i) {
    const double tf = static_cast<double>(tfs[i]);
    accum[docs[i]] += weight * tf / (tf + norms[docs[i]]);
  }
}

}  // namespace irsense::kernels
