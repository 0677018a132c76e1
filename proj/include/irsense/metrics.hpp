#pragma once

#include <iosfwd>
#include <set>
#include <string_view>

#include "irsense/types.hpp"

namespace irsense {

enum class metric_kind { rr, ap, ndcg };

struct metric_id {
  metric_kind kind = metric_kind::rr;
  std::uint32_t cutoff = 10;

  std::string name() const;       // "RR@10"
  std::string kind_name() const;  // "RR"
  static metric_id parse(std::string_view text);

  auto operator<=>(const metric_id&) const = default;
};

using relevance_set = std::set<passage_id>;
using grade_map = std::map<passage_id, int>;

// All three return 0 for an empty relevance set; callers skip unjudged topics.
double rr_at_k(const ranked_list& list, const relevance_set& rel, std::uint32_t k);

// Normalized by min(|rel|, k) so truncated runs stay in [0,1].
double ap_at_k(const ranked_list& list, const relevance_set& rel, std::uint32_t k);

// Gain is the grade itself; discount 1/log2(rank+1); ideal arrangement over
// all judged passages, truncated at k.
double ndcg_at_k(const ranked_list& list, const grade_map& rel_grades, std::uint32_t k);

// Binary relevance = judged (grades are strictly positive).
double metric_score(const ranked_list& list, const grade_map& judged, metric_id metric);

struct score_table {
  metric_id metric;
  std::map<std::string, std::map<topic_id, double>> values;  // system -> topic -> score

  double system_mean(const std::string& system) const;
  std::vector<std::pair<std::string, double>> system_means() const;
};

// One score per judged topic; topics absent from the run score 0.
score_table evaluate(const run& r, const qrels& judgments, metric_id metric);

void write_scores_csv(const score_table& table, std::ostream& out);  // system,topic,metric,k,score
void write_means_csv(const score_table& table, std::ostream& out);   // system,metric,k,mean

}  // namespace irsense
