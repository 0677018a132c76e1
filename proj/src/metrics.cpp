#include "irsense/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "irsense/text_util.hpp"

namespace irsense {

std::string metric_id::kind_name() const {
  return kind == metric_kind::rr ? "RR" : kind == metric_kind::ap ? "AP" : "NDCG";
}

std::string metric_id::name() const { return kind_name() + "@" + std::to_string(cutoff); }

metric_id metric_id::parse(std::string_view text) {
  auto at = text.find('@');
  if (at == std::string_view::npos) throw config_error("bad metric '" + std::string(text) + "' (expected KIND@k)");
  std::string kind_str;
  for (char c : text.substr(0, at)) kind_str.push_back(static_cast<char>(std::toupper(c)));
  metric_id m;
  if (kind_str == "RR" || kind_str == "MRR") m.kind = metric_kind::rr;
  else if (kind_str == "AP" || kind_str == "MAP") m.kind = metric_kind::ap;
  else if (kind_str == "NDCG") m.kind = metric_kind::ndcg;
  else throw config_error("unknown metric kind '" + kind_str + "'");
  auto k = parse_int(text.substr(at + 1));
  if (!k || *k < 1) throw config_error("bad metric cutoff in '" + std::string(text) + "'");
  m.cutoff = static_cast<std::uint32_t>(*k);
  return m;
}

double rr_at_k(const ranked_list& list, const relevance_set& rel, std::uint32_t k) {
  const std::size_t limit = std::min<std::size_t>(k, list.entries.size());
  for (std::size_t i = 0; i < limit; ++i) {
    if (rel.count(list.entries[i].passage)) {
      return 1.0 / static_cast<double>(i + 1);
    }
  }
  return 0.0;
}

double ap_at_k(const ranked_list& list, const relevance_set& rel, std::uint32_t k) {
  if (rel.empty()) return 0.0;
  const std::size_t limit = std::min<std::size_t>(k, list.entries.size());
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < limit; ++i) {
    if (rel.count(list.entries[i].passage)) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  const double norm = static_cast<double>(std::min<std::size_t>(rel.size(), k));
  return sum / norm;
}

double ndcg_at_k(const ranked_list& list, const grade_map& rel_grades, std::uint32_t k) {
  if (rel_grades.empty()) return 0.0;
  const std::size_t limit = std::min<std::size_t>(k, list.entries.size());
  double dcg = 0.0;
  for (std::size_t i = 0; i < limit; ++i) {
    auto it = rel_grades.find(list.entries[i].passage);
    if (it == rel_grades.end()) continue;
    dcg += static_cast<double>(it->second) / std::log2(static_cast<double>(i) + 2.0);
  }
  std::vector<int> grades;
  grades.reserve(rel_grades.size());
  for (const auto& [pid, grade] : rel_grades) {
    (void)pid;
    grades.push_back(grade);
  }
  std::sort(grades.begin(), grades.end(), std::greater<>());
  double idcg = 0.0;
  const std::size_t ideal_limit = std::min<std::size_t>(k, grades.size());
  for (std::size_t i = 0; i < ideal_limit; ++i) {
    idcg += static_cast<double>(grades[i]) / std::log2(static_cast<double>(i) + 2.0);
  }
  return idcg > 0.0 ? dcg / idcg : 0.0;
}

double metric_score(const ranked_list& list, const grade_map& judged, metric_id metric) {
  switch (metric.kind) {
    case metric_kind::ndcg:
      return ndcg_at_k(list, judged, metric.cutoff);
    case metric_kind::rr:
    case metric_kind::ap: {
      relevance_set rel;
      for (const auto& [pid, grade] : judged) {
        (void)grade;
        rel.insert(pid);
      }
      return metric.kind == metric_kind::rr ? rr_at_k(list, rel, metric.cutoff)
                                            : ap_at_k(list, rel, metric.cutoff);
    }
  }
  return 0.0;
}

double score_table::system_mean(const std::string& system) const {
  auto it = values.find(system);
  if (it == values.end() || it->second.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [topic, score] : it->second) {
    (void)topic;
    sum += score;
  }
  return sum / static_cast<double>(it->second.size());
}

std::vector<std::pair<std::string, double>> score_table::system_means() const {
  std::vector<std::pair<std::string, double>> means;
  means.reserve(values.size());
  for (const auto& [system, scores] : values) {
    (void)scores;
    means.emplace_back(system, system_mean(system));
  }
  return means;
}

score_table evaluate(const run& r, const qrels& judgments, metric_id metric) {
  bool overlap = false;
  for (const auto& [topic, passages] : judgments.judgments) {
    (void)passages;
    if (r.lists.count(topic)) {
      overlap = true;
      break;
    }
  }
  if (!overlap) throw data_error("run '" + r.tag + "' shares no topics with the qrels");

  static const ranked_list empty_list{};
  score_table table;
  table.metric = metric;
  auto& scores = table.values[r.tag];
  for (const auto& [topic, judged] : judgments.judgments) {
    auto it = r.lists.find(topic);
    const ranked_list& list = it == r.lists.end() ? empty_list : it->second;
    scores.emplace(topic, metric_score(list, judged, metric));
  }
  return table;
}

void write_scores_csv(const score_table& table, std::ostream& out) {
  out << "system,topic,metric,k,score\n";
  for (const auto& [system, scores] : table.values) {
    for (const auto& [topic, score] : scores) {
      out << system << ',' << topic << ',' << table.metric.kind_name() << ','
          << table.metric.cutoff << ',' << format_double(score) << '\n';
    }
  }
}

void write_means_csv(const score_table& table, std::ostream& out) {
  out << "system,metric,k,mean\n";
  for (const auto& [system, mean] : table.system_means()) {
    out << system << ',' << table.metric.kind_name() << ',' << table.metric.cutoff << ','
        << format_double(mean) << '\n';
  }
}

}  // namespace irsense
