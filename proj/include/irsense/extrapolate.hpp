#pragma once

#include <map>
#include <string_view>

#include "irsense/bm25.hpp"
#include "irsense/fusion.hpp"
#include "irsense/types.hpp"

namespace irsense {

// Per-topic gold answers plus the designated member used to seed rankings.
// Singleton topics are forced; multi-gold topics get a seed-deterministic
// uniform pick keyed by the topic id.
struct gold_set {
  struct entry {
    std::vector<passage_id> members;       // ascending
    std::map<passage_id, int> grades;      // original gold grades
    passage_id designated;
  };
  std::map<topic_id, entry> topics;
};

gold_set select_gold(const qrels& gold, std::uint64_t rng_seed);

enum class seed_family { bm, tct, fus };

std::string family_label(seed_family f);            // "BM" / "TCT" / "FUS"
seed_family family_from_label(std::string_view s);  // case-insensitive

// Materialized per-topic seed rankings.
struct seed_source {
  seed_family kind = seed_family::bm;
  std::map<topic_id, ranked_list> rankings;
};

// Internal BM25 query-by-passage ranking of the designated gold, per topic.
seed_source make_bm25_seed(const inverted_index& idx, const passage_collection& coll,
                           const bm25_params& params, const gold_set& gold, std::size_t depth,
                           const searcher_options& opts = {}, unsigned threads = 0);

// External run whose per-topic list is the query-by-passage ranking for the
// designated gold; stands in for a neural seed system.
seed_source make_external_seed(const run& first_stage, const gold_set& gold);

struct fused_seed_stats {
  std::size_t fan_out = 0;
  std::size_t second_stage_runs_per_topic = 0;  // 2*fan_out (BM25-only) or 4*fan_out
  bool external_second_stage = false;
};

struct fused_seed_options {
  std::size_t fan_out = 5;
  std::size_t rerun_depth = 100;   // depth of each second-stage run
  std::size_t fused_depth = 100;   // depth of the fused output
  double phi = 0.98;
  bool exclude_gold_from_fan_out = false;
  unsigned threads = 0;
};

// First-stage seeds per topic: top fan_out passages from the internal BM25
// ranking followed by the top fan_out from the external first-stage run.
std::map<topic_id, std::vector<passage_id>> collect_fan_out_seeds(
    const gold_set& gold, const std::map<topic_id, ranked_list>& first_bm,
    const run& first_external, std::size_t fan_out, bool exclude_gold);

// Two-stage fused seed: every fan-out seed is reissued as a query to BM25
// and, when `external_second` is given (a run keyed by seed passage id), to
// the external system as well; all second-stage runs are RBC-fused.
seed_source make_fused_seed(const gold_set& gold, const inverted_index& idx,
                            const passage_collection& coll, const bm25_params& params,
                            const run& first_external, const run* external_second,
                            const fused_seed_options& opts = {},
                            const searcher_options& search_opts = {},
                            fused_seed_stats* stats = nullptr);

// Gold judgments plus, per topic, the first d non-gold passages of the seed
// ranking in rank order. Prefixes nest: the additions at d are the first d
// entries of the additions at any larger d.
struct extrapolated_qrels {
  qrels base;  // gold
  seed_family family = seed_family::bm;
  int d = 0;
  std::map<topic_id, std::vector<passage_id>> additions;  // exactly d per topic
  std::vector<topic_id> excluded;                         // allow_partial casualties

  // Gold plus the first dd additions (grade 1); dd defaults to this->d.
  qrels materialize() const;
  qrels materialize(int dd) const;
};

struct extrapolate_options {
  bool allow_partial = false;  // drop starved topics instead of failing
};

extrapolated_qrels extrapolate_seed(const gold_set& gold, const seed_source& source, int d,
                                    const extrapolate_options& opts = {});

}  // namespace irsense
