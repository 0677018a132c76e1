#include "irsense/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace irsense {

void bm25_params::validate() const {
  if (!(k1 >= 0.0) || !std::isfinite(k1)) throw config_error("bm25 k1 must be >= 0");
  if (!(b >= 0.0 && b <= 1.0)) throw config_error("bm25 b must be in [0,1]");
}

double bm25_idf(std::size_t n_docs, std::size_t df) {
  const double n = static_cast<double>(n_docs);
  const double d = static_cast<double>(df);
  return std::log1p((n - d + 0.5) / (d + 0.5));
}

namespace {

// Distinct terms with multiplicities, in first-occurrence order so the
// accumulation sequence is fixed by the query alone.
std::vector<std::pair<std::string, std::uint32_t>> term_bag(
    const std::vector<std::string>& tokens) {
  std::vector<std::pair<std::string, std::uint32_t>> bag;
  std::unordered_map<std::string_view, std::size_t> pos;
  bag.reserve(tokens.size());
  for (const auto& tok : tokens) {
    auto it = pos.find(tok);
    if (it == pos.end()) {
      pos.emplace(std::string_view(tok), bag.size());
      bag.emplace_back(tok, 1);
    } else {
      bag[it->second].second += 1;
    }
  }
  return bag;
}

}  // namespace

searcher::searcher(const inverted_index& idx, bm25_params params, searcher_options opts,
                   kernels::bm25_accumulate_fn kernel)
    : idx_(idx), params_(params), opts_(opts),
      kernel_(kernel ? kernel : kernels::bm25_accumulate()) {
  params_.validate();
  const std::size_t n = idx_.doc_count();
  norms_.resize(n);
  const double avg = idx_.avg_doc_length();
  for (std::size_t d = 0; d < n; ++d) {
    const double len = static_cast<double>(idx_.doc_lengths()[d]);
    norms_[d] = params_.k1 * (1.0 - params_.b + params_.b * len / avg);
  }
  accum_.assign(n, 0.0);
  seen_.assign(n, 0);
}

ranked_list searcher::ranked_from_tokens(const std::vector<std::string>& tokens,
                                         const topic_id& topic, std::size_t depth,
                                         std::string tag) {
  auto bag = term_bag(tokens);
  for (const auto& [term, count] : bag) {
    const posting_list* plist = idx_.postings(term);
    if (!plist) continue;
    const double idf = bm25_idf(idx_.doc_count(), plist->size());
    const double weight = static_cast<double>(count) * idf * (params_.k1 + 1.0);
    kernel_(plist->docs.data(), plist->tfs.data(), plist->size(), weight, norms_.data(),
            accum_.data());
    for (std::uint32_t d : plist->docs) {
      if (!seen_[d]) {
        seen_[d] = 1;
        touched_.push_back(d);
      }
    }
  }

  std::vector<std::pair<double, std::uint32_t>> candidates;
  candidates.reserve(touched_.size());
  for (std::uint32_t d : touched_) candidates.emplace_back(accum_[d], d);
  auto better = [](const std::pair<double, std::uint32_t>& a,
                   const std::pair<double, std::uint32_t>& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;  // dense order equals passage-id order
  };
  if (candidates.size() > depth) {
    std::nth_element(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(depth),
                     candidates.end(), better);
    candidates.resize(depth);
  }
  std::sort(candidates.begin(), candidates.end(), better);

  ranked_list list;
  list.topic = topic;
  list.tag = std::move(tag);
  list.entries.reserve(candidates.size());
  std::uint32_t rank = 1;
  for (const auto& [score, d] : candidates) {
    list.entries.push_back(scored_entry{idx_.doc_ids()[d], rank++, score});
  }

  for (std::uint32_t d : touched_) {
    accum_[d] = 0.0;
    seen_[d] = 0;
  }
  touched_.clear();
  return list;
}

ranked_list searcher::search(std::string_view query, std::size_t depth, std::string tag,
                             topic_id topic) {
  auto tokens = tokenize(query, idx_.tokenizer());
  return ranked_from_tokens(tokens, topic, depth, std::move(tag));
}

ranked_list searcher::query_by_passage(const passage_collection& coll, const passage_id& seed,
                                       std::size_t depth, std::string tag,
                                       std::optional<topic_id> topic) {
  const std::string* text = coll.find(seed);
  if (!text) throw data_error("unknown seed passage: " + seed);
  auto tokens = tokenize(*text, idx_.tokenizer());
  if (opts_.max_qbp_terms && tokens.size() > *opts_.max_qbp_terms) {
    tokens.resize(*opts_.max_qbp_terms);
  }
  return ranked_from_tokens(tokens, topic.value_or(seed), depth, std::move(tag));
}

double searcher::score(const std::vector<std::string>& query_terms, const passage_id& doc) const {
  auto dense = idx_.dense_id(doc);
  if (!dense) throw data_error("unknown passage: " + doc);
  double total = 0.0;
  for (const auto& [term, count] : term_bag(query_terms)) {
    const posting_list* plist = idx_.postings(term);
    if (!plist) continue;
    auto it = std::lower_bound(plist->docs.begin(), plist->docs.end(), *dense);
    if (it == plist->docs.end() || *it != *dense) continue;
    const std::uint32_t tf_raw = plist->tfs[static_cast<std::size_t>(it - plist->docs.begin())];
    const double idf = bm25_idf(idx_.doc_count(), plist->size());
    const double weight = static_cast<double>(count) * idf * (params_.k1 + 1.0);
    const double tf = static_cast<double>(tf_raw);
    total += weight * tf / (tf + norms_[*dense]);
  }
  return total;
}

double bm25_score(const inverted_index& idx, const bm25_params& params,
                  const std::vector<std::string>& query_terms, const passage_id& doc) {
  searcher s(idx, params);
  return s.score(query_terms, doc);
}

ranked_list bm25_search(const inverted_index& idx, const bm25_params& params,
                        std::string_view query, std::size_t depth, std::string tag) {
  searcher s(idx, params);
  return s.search(query, depth, std::move(tag));
}

}  // namespace irsense
