#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "irsense/types.hpp"

namespace irsense::trec {

struct run_parse_options {
  // Keep at most this many entries per topic, applied after sorting.
  std::optional<std::uint32_t> depth_cap;
};

// 6-column TREC run lines: topic Q0 passage rank score tag. Lists are
// re-sorted by descending score (passage id breaks ties) and ranks rewritten.
run parse_run(std::istream& in, const run_parse_options& opt = {});
run parse_run(std::string_view text, const run_parse_options& opt = {});

void write_run(const run& r, std::ostream& out);
std::string write_run_string(const run& r);

struct qrels_parse_options {
  // Accept and drop non-positive grades instead of rejecting the file.
  bool lenient = false;
};

// 4-column qrels lines: topic iteration passage grade. The iteration column
// is ignored. Grades must be positive unless `lenient` drops offenders.
qrels parse_qrels(std::istream& in, const qrels_parse_options& opt = {});
qrels parse_qrels(std::string_view text, const qrels_parse_options& opt = {});

void write_qrels(const qrels& q, std::ostream& out);
std::string write_qrels_string(const qrels& q);

struct collection_load_options {
  bool allow_empty_text = false;
};

// Two-field TSV: id <TAB> text. Text may itself contain tabs; the split is on
// the first tab only.
passage_collection load_collection(std::istream& in, const collection_load_options& opt = {});
passage_collection load_collection(std::string_view text, const collection_load_options& opt = {});
void write_collection(const passage_collection& c, std::ostream& out);

topic_set load_topics(std::istream& in);
topic_set load_topics(std::string_view text);
void write_topics(const topic_set& t, std::ostream& out);

struct qrels_stats_report {
  std::size_t n_topics = 0;
  std::map<std::size_t, std::size_t> label_histogram;  // labels-per-topic -> topics

  double single_label_fraction() const;
};

qrels_stats_report qrels_stats(const qrels& q);

// File helpers; wrap parse errors with the file path.
run load_run_file(const std::string& path, const run_parse_options& opt = {});
qrels load_qrels_file(const std::string& path, const qrels_parse_options& opt = {});
passage_collection load_collection_file(const std::string& path,
                                        const collection_load_options& opt = {});
topic_set load_topics_file(const std::string& path);
void save_run_file(const run& r, const std::string& path);
void save_qrels_file(const qrels& q, const std::string& path);

}  // namespace irsense::trec
