#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace irsense {

using topic_id = std::string;
using passage_id = std::string;

// Error taxonomy, mirrored by CLI exit codes: config errors are bad
// settings/flags, parse errors are malformed input bytes, data errors are
// well-formed inputs that violate a contract.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct parse_error : data_error {
  parse_error(std::size_t line_no, const std::string& msg)
      : data_error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
  std::size_t line;
};

struct scored_entry {
  passage_id passage;
  std::uint32_t rank = 0;
  double score = 0.0;

  bool operator==(const scored_entry&) const = default;
};

// One topic's ranking. Ranks run 1..n, scores are non-increasing, score ties
// are ordered by ascending passage id, and no passage appears twice.
struct ranked_list {
  topic_id topic;
  std::string tag;
  std::vector<scored_entry> entries;

  // Sorts, breaks ties, assigns ranks, and truncates to `depth` if given.
  static ranked_list from_scores(topic_id topic, std::string tag,
                                 std::vector<std::pair<passage_id, double>> scores,
                                 std::optional<std::size_t> depth = std::nullopt);

  // Keeps the first `depth` entries; ranks are already 1..n so they survive.
  void truncate(std::size_t depth);

  void validate() const;

  bool operator==(const ranked_list&) const = default;
};

struct run {
  std::string tag;
  std::map<topic_id, ranked_list> lists;

  void validate() const;

  bool operator==(const run&) const = default;
};

// Relevance judgments. Grades are strictly positive; unjudged passages are
// treated as non-relevant by every consumer.
struct qrels {
  std::map<topic_id, std::map<passage_id, int>> judgments;

  void validate() const;

  bool operator==(const qrels&) const = default;
};

struct passage_collection {
  std::unordered_map<passage_id, std::string> entries;

  std::size_t size() const { return entries.size(); }

  const std::string* find(const passage_id& id) const {
    auto it = entries.find(id);
    return it == entries.end() ? nullptr : &it->second;
  }
};

struct topic_set {
  std::map<topic_id, std::string> entries;

  std::size_t size() const { return entries.size(); }
};

}  // namespace irsense
