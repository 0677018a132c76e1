#include "irsense/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace irsense {

void rbc_params::validate() const {
  if (!(phi >= 0.0 && phi < 1.0)) throw config_error("rbc phi must be in [0,1)");
  if (depth < 1) throw config_error("rbc depth must be >= 1");
}

double rbc_weight(std::uint32_t rank, double phi) {
  double w = 1.0 - phi;
  for (std::uint32_t r = 1; r < rank; ++r) w *= phi;
  return w;
}

ranked_list rbc_fuse(const std::vector<ranked_list>& lists, const rbc_params& params,
                     std::string tag) {
  params.validate();
  if (lists.empty()) throw data_error("rbc fusion requires at least one input list");
  const topic_id& topic = lists.front().topic;
  std::uint32_t max_rank = 0;
  for (const auto& list : lists) {
    if (list.topic != topic)
      throw data_error("topic mismatch in fusion inputs: '" + list.topic + "' vs '" + topic + "'");
    for (const auto& e : list.entries) max_rank = std::max(max_rank, e.rank);
  }

  // weights[r-1] = (1-phi) * phi^(r-1)
  std::vector<double> weights(max_rank);
  if (max_rank > 0) {
    weights[0] = 1.0 - params.phi;
    for (std::uint32_t r = 1; r < max_rank; ++r) weights[r] = weights[r - 1] * params.phi;
  }

  std::unordered_map<passage_id, std::vector<std::uint32_t>> ranks_by_passage;
  for (const auto& list : lists) {
    for (const auto& e : list.entries) ranks_by_passage[e.passage].push_back(e.rank);
  }

  std::vector<std::pair<passage_id, double>> fused;
  fused.reserve(ranks_by_passage.size());
  for (auto& [pid, ranks] : ranks_by_passage) {
    std::sort(ranks.begin(), ranks.end());
    double score = 0.0;
    for (std::uint32_t r : ranks) score += weights[r - 1];
    fused.emplace_back(pid, score);
  }

  return ranked_list::from_scores(topic, std::move(tag), std::move(fused), params.depth);
}

}  // namespace irsense
