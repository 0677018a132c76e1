#include "irsense/correlate.hpp"

#include <algorithm>
#include <unordered_map>

namespace irsense {

system_ordering rank_systems(const std::vector<std::pair<std::string, double>>& means) {
  if (means.size() < 2) throw data_error("need at least 2 systems to build an ordering");
  system_ordering ordering;
  ordering.entries = means;
  std::sort(ordering.entries.begin(), ordering.entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  for (std::size_t i = 1; i < ordering.entries.size(); ++i) {
    if (ordering.entries[i - 1].first == ordering.entries[i].first)
      throw data_error("duplicate system tag: " + ordering.entries[i].first);
  }
  return ordering;
}

namespace {

// Positions of the reference's systems inside `other`; throws when the two
// orderings do not cover the same system set.
std::vector<std::size_t> other_positions(const system_ordering& reference,
                                         const system_ordering& other) {
  if (reference.size() != other.size())
    throw data_error("orderings cover different numbers of systems");
  if (reference.size() < 2) throw data_error("need at least 2 systems to compare orderings");
  std::unordered_map<std::string, std::size_t> pos;
  pos.reserve(other.size());
  for (std::size_t i = 0; i < other.entries.size(); ++i) {
    pos.emplace(other.entries[i].first, i);
  }
  std::vector<std::size_t> mapped;
  mapped.reserve(reference.size());
  for (const auto& [tag, mean] : reference.entries) {
    (void)mean;
    auto it = pos.find(tag);
    if (it == pos.end()) throw data_error("system '" + tag + "' missing from other ordering");
    mapped.push_back(it->second);
  }
  return mapped;
}

// Merge-sort inversion count.
std::uint64_t count_inversions(std::vector<std::size_t>& a) {
  const std::size_t n = a.size();
  std::vector<std::size_t> buf(n);
  std::uint64_t inversions = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
      const std::size_t mid = lo + width;
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (a[i] <= a[j]) {
          buf[k++] = a[i++];
        } else {
          inversions += mid - i;
          buf[k++] = a[j++];
        }
      }
      while (i < mid) buf[k++] = a[i++];
      while (j < hi) buf[k++] = a[j++];
      std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
                buf.begin() + static_cast<std::ptrdiff_t>(hi),
                a.begin() + static_cast<std::ptrdiff_t>(lo));
    }
  }
  return inversions;
}

// Anchored weighted tau; weights come from the anchor's ranks.
double weighted_tau_anchored(const system_ordering& anchor, const system_ordering& other) {
  auto pos = other_positions(anchor, other);
  const std::size_t n = pos.size();
  double numerator = 0.0;
  double denominator = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double wi = 1.0 / static_cast<double>(i + 2);  // reference rank i+1
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = wi + 1.0 / static_cast<double>(j + 2);
      const bool concordant = pos[i] < pos[j];
      numerator += concordant ? w : -w;
      denominator += w;
    }
  }
  return numerator / denominator;
}

}  // namespace

tau_result kendall_tau(const system_ordering& reference, const system_ordering& other) {
  auto pos = other_positions(reference, other);
  const std::size_t n = pos.size();
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const std::uint64_t discordant = count_inversions(pos);
  const std::uint64_t concordant = total - discordant;
  tau_result result;
  result.tau = (static_cast<double>(concordant) - static_cast<double>(discordant)) /
               static_cast<double>(total);
  result.weighted = false;
  result.n_systems = n;
  return result;
}

tau_result weighted_tau(const system_ordering& reference, const system_ordering& other,
                        bool symmetrize) {
  tau_result result;
  result.tau = weighted_tau_anchored(reference, other);
  if (symmetrize) {
    result.tau = (result.tau + weighted_tau_anchored(other, reference)) / 2.0;
  }
  result.weighted = true;
  result.n_systems = reference.size();
  return result;
}

std::vector<std::pair<int, tau_result>> tau_curve(const system_ordering& reference,
                                                  const std::map<int, system_ordering>& by_d,
                                                  bool weighted) {
  std::vector<std::pair<int, tau_result>> curve;
  curve.reserve(by_d.size());
  for (const auto& [d, ordering] : by_d) {
    curve.emplace_back(d, weighted ? weighted_tau(reference, ordering)
                                   : kendall_tau(reference, ordering));
  }
  return curve;
}

}  // namespace irsense
