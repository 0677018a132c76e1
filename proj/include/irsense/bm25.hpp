#pragma once

#include <string_view>

#include "irsense/index.hpp"
#include "irsense/kernels/bm25_kernel.hpp"
#include "irsense/types.hpp"

namespace irsense {

struct bm25_params {
  // Anserini-style defaults.
  double k1 = 0.9;
  double b = 0.4;

  void validate() const;
};

// idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5)); positive for every df <= N.
double bm25_idf(std::size_t n_docs, std::size_t df);

struct searcher_options {
  // Cap on query-by-passage token streams (prefix of the token multiset).
  std::optional<std::size_t> max_qbp_terms;
};

// Reusable scorer holding per-document length normalizers and scratch space.
// The index is shared read-only; use one searcher per thread.
class searcher {
 public:
  searcher(const inverted_index& idx, bm25_params params, searcher_options opts = {},
           kernels::bm25_accumulate_fn kernel = nullptr);

  // `topic` only labels the returned list.
  ranked_list search(std::string_view query, std::size_t depth, std::string tag = "bm25",
                     topic_id topic = "query");

  // Issues the seed passage's full text as the query.
  ranked_list query_by_passage(const passage_collection& coll, const passage_id& seed,
                               std::size_t depth, std::string tag = "bm25-qbp",
                               std::optional<topic_id> topic = std::nullopt);

  double score(const std::vector<std::string>& query_terms, const passage_id& doc) const;

  const inverted_index& index() const { return idx_; }
  const bm25_params& params() const { return params_; }

 private:
  ranked_list ranked_from_tokens(const std::vector<std::string>& tokens, const topic_id& topic,
                                 std::size_t depth, std::string tag);

  const inverted_index& idx_;
  bm25_params params_;
  searcher_options opts_;
  kernels::bm25_accumulate_fn kernel_;
  std::vector<double> norms_;
  std::vector<double> accum_;
  std::vector<std::uint8_t> seen_;
  std::vector<std::uint32_t> touched_;
};

// One-off conveniences.
double bm25_score(const inverted_index& idx, const bm25_params& params,
                  const std::vector<std::string>& query_terms, const passage_id& doc);
ranked_list bm25_search(const inverted_index& idx, const bm25_params& params,
                        std::string_view query, std::size_t depth, std::string tag = "bm25");

}  // namespace irsense
