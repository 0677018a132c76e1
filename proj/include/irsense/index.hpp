#pragma once

#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

#include "irsense/tokenizer.hpp"
#include "irsense/types.hpp"

namespace irsense {

// Postings as parallel arrays, sorted by dense document id. Dense ids are
// assigned in ascending passage-id order, so dense-id order and passage-id
// order agree everywhere (including tie-breaks).
struct posting_list {
  std::vector<std::uint32_t> docs;
  std::vector<std::uint32_t> tfs;

  std::size_t size() const { return docs.size(); }
};

class inverted_index {
 public:
  static inverted_index build(const passage_collection& coll, const tokenizer_config& cfg = {});

  std::size_t doc_count() const { return doc_ids_.size(); }
  double avg_doc_length() const { return avg_doc_length_; }
  std::uint64_t total_tokens() const { return total_tokens_; }
  const tokenizer_config& tokenizer() const { return cfg_; }

  const std::vector<passage_id>& doc_ids() const { return doc_ids_; }
  const std::vector<std::uint32_t>& doc_lengths() const { return doc_lengths_; }
  std::optional<std::uint32_t> dense_id(const passage_id& id) const;

  std::size_t vocabulary_size() const { return postings_.size(); }
  const posting_list* postings(const std::string& term) const;

  // Inspection helper: (passage id, tf) pairs in passage-id order.
  std::vector<std::pair<passage_id, std::uint32_t>> term_postings(const std::string& term) const;

  // Versioned binary layout; see save() for the field order.
  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;
  static inverted_index load(std::istream& in);
  static inverted_index load_file(const std::string& path);

 private:
  tokenizer_config cfg_;
  std::vector<passage_id> doc_ids_;
  std::unordered_map<passage_id, std::uint32_t> dense_;
  std::vector<std::uint32_t> doc_lengths_;
  std::uint64_t total_tokens_ = 0;
  double avg_doc_length_ = 0.0;
  std::unordered_map<std::string, posting_list> postings_;
};

}  // namespace irsense
