#pragma once

#include <iosfwd>

#include "irsense/correlate.hpp"
#include "irsense/extrapolate.hpp"
#include "irsense/metrics.hpp"
#include "irsense/types.hpp"

namespace irsense {

struct experiment_config {
  std::string collection_path;
  std::string topics_path;
  std::string gold_qrels_path;
  std::string runs_dir;
  std::optional<std::string> external_first_stage;
  std::optional<std::string> external_second_stage;
  std::string output_dir;

  std::vector<metric_id> metrics;     // default RR@10, AP@10, NDCG@10
  std::vector<seed_family> families;  // default BM
  int d_max = 20;
  double rbc_phi = 0.98;
  std::uint32_t run_depth = 10;  // system runs truncated on load
  std::size_t seed_depth = 100;
  std::size_t fused_depth = 100;
  std::size_t fan_out = 5;
  std::uint64_t rng_seed = 1;
  bm25_params bm25;
  bool stemming = true;
  std::optional<std::size_t> qbp_max_terms;
  bool exclude_gold_fan_out = false;
  bool allow_partial = false;
  unsigned threads = 0;

  static experiment_config from_json_file(const std::string& path);
  std::string to_json_string() const;

  // Checks everything that does not require reading input files.
  void validate() const;
};

struct sweep_cell {
  seed_family family;
  metric_id metric;
  int d = 0;
  double mean_score = 0.0;  // over systems and topics
  double tau_unweighted = 1.0;
  double tau_weighted = 1.0;
};

struct system_mean_row {
  seed_family family;
  metric_id metric;
  int d = 0;
  std::string system;
  double mean = 0.0;
};

struct sweep_result {
  std::vector<sweep_cell> cells;              // family-major, then metric, then d
  std::vector<system_mean_row> system_means;  // same order, one row per system
  std::vector<std::string> systems;
  std::map<std::string, std::vector<topic_id>> excluded_topics;  // family label -> topics
};

// Full experiment: ingest, seed rankings, extrapolation sweep, evaluation,
// tau curves. Writes the extrapolated qrels (plus sidecar manifests) and the
// gold-selection table under config.output_dir as it goes.
sweep_result run_sweep(const experiment_config& config);

// scores.csv, tau.csv, means.csv, long.tsv, manifest.json under out_dir.
// The manifest is the only artifact carrying a timestamp.
void emit_report(const sweep_result& result, const experiment_config& config,
                 const std::string& out_dir);

struct judgment_row {
  topic_id topic;
  std::uint32_t rank = 0;
  passage_id passage;
  passage_id gold;
  bool gold_identical = false;
  std::string query_text;
  std::string passage_text;
  std::string gold_text;
};

// Deterministic sample of n topics; for each, the passages at the requested
// fused-ranking ranks, with the query and the designated gold as the anchor.
std::vector<judgment_row> sample_for_judgment(const seed_source& fused, const gold_set& gold,
                                              const topic_set& topics,
                                              const passage_collection& coll,
                                              std::size_t n_topics,
                                              const std::vector<std::uint32_t>& ranks,
                                              std::uint64_t rng_seed);

// TSV with a blank consensus column to be filled during judging.
void write_worksheet(const std::vector<judgment_row>& rows, std::ostream& out);

// Per-rank "yes/total" fractions from a filled worksheet.
std::string summarize_worksheet(std::istream& in);

}  // namespace irsense
