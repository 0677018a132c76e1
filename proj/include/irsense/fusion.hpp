#pragma once

#include <vector>

#include "irsense/types.hpp"

namespace irsense {

struct rbc_params {
  double phi = 0.98;
  std::size_t depth = 100;

  void validate() const;
};

// Geometric rank weight (1 - phi) * phi^(rank-1). Computed by iterated
// multiplication, which pins the exact IEEE result everywhere.
double rbc_weight(std::uint32_t rank, double phi);

// Rank-biased centroid fusion: each passage's fused score is the sum of its
// rank weights across the input lists; absent means zero. Output is sorted by
// fused score (passage id on ties) and truncated to params.depth.
//
// Per-passage weights are summed in ascending rank order regardless of input
// list order, so fusion is exactly permutation invariant.
ranked_list rbc_fuse(const std::vector<ranked_list>& lists, const rbc_params& params,
                     std::string tag = "rbc");

}  // namespace irsense
