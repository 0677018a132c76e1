#pragma once

#include <map>
#include <vector>

#include "irsense/types.hpp"

namespace irsense {

// Systems ordered best-first by mean score; exact score ties are ordered by
// ascending tag, so orderings are always total.
struct system_ordering {
  std::vector<std::pair<std::string, double>> entries;

  std::size_t size() const { return entries.size(); }
};

system_ordering rank_systems(const std::vector<std::pair<std::string, double>>& means);

struct tau_result {
  double tau = 0.0;
  bool weighted = false;
  std::size_t n_systems = 0;
};

// Unweighted Kendall's tau: (C - D) / (n(n-1)/2), counted by inversions.
tau_result kendall_tau(const system_ordering& reference, const system_ordering& other);

// Top-weighted variant: pair (i,j) carries weight 1/(r_i+1) + 1/(r_j+1) with
// ranks taken from the reference ordering (1-based), tau = sum of signed
// weights over total weight. `symmetrize` averages with the other-anchored
// value instead of anchoring to the reference only.
tau_result weighted_tau(const system_ordering& reference, const system_ordering& other,
                        bool symmetrize = false);

std::vector<std::pair<int, tau_result>> tau_curve(const system_ordering& reference,
                                                  const std::map<int, system_ordering>& by_d,
                                                  bool weighted);

}  // namespace irsense
