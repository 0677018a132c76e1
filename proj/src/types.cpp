#include "irsense/types.hpp"

#include <algorithm>
#include <cmath>

#include "irsense/text_util.hpp"

namespace irsense {

ranked_list ranked_list::from_scores(topic_id topic, std::string tag,
                                     std::vector<std::pair<passage_id, double>> scores,
                                     std::optional<std::size_t> depth) {
  for (const auto& [pid, score] : scores) {
    if (!std::isfinite(score)) throw data_error("non-finite score for passage " + pid);
  }
  std::sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (depth && scores.size() > *depth) scores.resize(*depth);

  ranked_list list;
  list.topic = std::move(topic);
  list.tag = std::move(tag);
  list.entries.reserve(scores.size());
  std::uint32_t rank = 1;
  for (auto& [pid, score] : scores) {
    list.entries.push_back(scored_entry{std::move(pid), rank++, score});
  }
  for (std::size_t i = 1; i < list.entries.size(); ++i) {
    if (list.entries[i - 1].passage == list.entries[i].passage)
      throw data_error("duplicate passage " + list.entries[i].passage + " in topic " +
                       list.topic);
  }
  return list;
}

void ranked_list::truncate(std::size_t depth) {
  if (entries.size() > depth) entries.resize(depth);
}

void ranked_list::validate() const {
  if (topic.empty() || has_whitespace(topic)) throw data_error("bad topic id: '" + topic + "'");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.passage.empty() || has_whitespace(e.passage))
      throw data_error("bad passage id in topic " + topic);
    if (!std::isfinite(e.score)) throw data_error("non-finite score in topic " + topic);
    if (e.rank != i + 1) throw data_error("ranks not 1..n in topic " + topic);
    if (i > 0) {
      const auto& prev = entries[i - 1];
      if (prev.score < e.score) throw data_error("scores not non-increasing in topic " + topic);
      if (prev.score == e.score && !(prev.passage < e.passage))
        throw data_error("score tie not broken by passage id in topic " + topic);
      if (prev.passage == e.passage)
        throw data_error("duplicate passage " + e.passage + " in topic " + topic);
    }
  }
}

void run::validate() const {
  for (const auto& [topic, list] : lists) {
    if (topic != list.topic) throw data_error("list keyed under wrong topic: " + topic);
    if (list.tag != tag) throw data_error("inconsistent run tag in topic " + topic);
    list.validate();
  }
}

void qrels::validate() const {
  for (const auto& [topic, passages] : judgments) {
    if (topic.empty() || has_whitespace(topic)) throw data_error("bad topic id: '" + topic + "'");
    if (passages.empty()) throw data_error("topic " + topic + " has no judged passages");
    for (const auto& [pid, grade] : passages) {
      if (pid.empty() || has_whitespace(pid)) throw data_error("bad passage id in topic " + topic);
      if (grade < 1) throw data_error("non-positive grade in topic " + topic);
    }
  }
}

}  // namespace irsense
