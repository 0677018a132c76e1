#include "irsense/trec_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "irsense/text_util.hpp"

namespace irsense::trec {

namespace {

// Line iteration shared by all parsers; skips blank lines, strips CR.
template <class Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = strip_cr(raw);
    if (is_blank(line)) continue;
    fn(line_no, line);
  }
}

template <class T>
T parse_string(std::string_view text, T (*parser)(std::istream&)) {
  std::istringstream in{std::string(text)};
  return parser(in);
}

}  // namespace

run parse_run(std::istream& in, const run_parse_options& opt) {
  struct topic_bucket {
    std::vector<std::pair<passage_id, double>> entries;
    std::unordered_set<std::string> seen;
  };
  std::map<topic_id, topic_bucket> by_topic;
  std::string tag;
  bool tag_set = false;

  for_each_line(in, [&](std::size_t line_no, std::string_view line) {
    auto fields = split_whitespace(line);
    if (fields.size() != 6)
      throw parse_error(line_no, "expected 6 columns, got " + std::to_string(fields.size()));
    if (fields[1] != "Q0") throw parse_error(line_no, "second column must be Q0");
    auto rank = parse_int(fields[3]);
    if (!rank || *rank < 0) throw parse_error(line_no, "bad rank field '" + std::string(fields[3]) + "'");
    auto score = parse_double(fields[4]);
    if (!score || !std::isfinite(*score))
      throw parse_error(line_no, "bad score field '" + std::string(fields[4]) + "'");

    std::string topic(fields[0]);
    std::string pid(fields[2]);
    std::string line_tag(fields[5]);
    if (!tag_set) {
      tag = line_tag;
      tag_set = true;
    } else if (tag != line_tag) {
      throw parse_error(line_no, "inconsistent run tag '" + line_tag + "' (expected '" + tag + "')");
    }

    auto& bucket = by_topic[topic];
    if (!bucket.seen.insert(pid).second)
      throw parse_error(line_no, "duplicate entry topic=" + topic + " passage=" + pid);
    bucket.entries.emplace_back(std::move(pid), *score);
  });

  run r;
  r.tag = tag;
  std::optional<std::size_t> depth;
  if (opt.depth_cap) depth = *opt.depth_cap;
  for (auto& [topic, bucket] : by_topic) {
    r.lists.emplace(topic, ranked_list::from_scores(topic, tag, std::move(bucket.entries), depth));
  }
  return r;
}

run parse_run(std::string_view text, const run_parse_options& opt) {
  std::istringstream in{std::string(text)};
  return parse_run(in, opt);
}

void write_run(const run& r, std::ostream& out) {
  for (const auto& [topic, list] : r.lists) {
    for (const auto& e : list.entries) {
      out << topic << " Q0 " << e.passage << ' ' << e.rank << ' ' << format_double(e.score)
          << ' ' << r.tag << '\n';
    }
  }
}

std::string write_run_string(const run& r) {
  std::ostringstream out;
  write_run(r, out);
  return out.str();
}

qrels parse_qrels(std::istream& in, const qrels_parse_options& opt) {
  qrels q;
  for_each_line(in, [&](std::size_t line_no, std::string_view line) {
    auto fields = split_whitespace(line);
    if (fields.size() != 4)
      throw parse_error(line_no, "expected 4 columns, got " + std::to_string(fields.size()));
    auto grade = parse_int(fields[3]);
    if (!grade) throw parse_error(line_no, "bad grade field '" + std::string(fields[3]) + "'");
    if (*grade < 1) {
      if (opt.lenient) return;  // dropped
      throw parse_error(line_no, "non-positive grade for topic " + std::string(fields[0]));
    }
    std::string topic(fields[0]);
    std::string pid(fields[2]);
    auto& passages = q.judgments[topic];
    auto it = passages.find(pid);
    if (it != passages.end()) {
      if (it->second != static_cast<int>(*grade))
        throw parse_error(line_no, "conflicting grades for topic=" + topic + " passage=" + pid);
      return;  // exact duplicate, idempotent
    }
    passages.emplace(std::move(pid), static_cast<int>(*grade));
  });
  return q;
}

qrels parse_qrels(std::string_view text, const qrels_parse_options& opt) {
  std::istringstream in{std::string(text)};
  return parse_qrels(in, opt);
}

void write_qrels(const qrels& q, std::ostream& out) {
  for (const auto& [topic, passages] : q.judgments) {
    for (const auto& [pid, grade] : passages) {
      out << topic << " 0 " << pid << ' ' << grade << '\n';
    }
  }
}

std::string write_qrels_string(const qrels& q) {
  std::ostringstream out;
  write_qrels(q, out);
  return out.str();
}

passage_collection load_collection(std::istream& in, const collection_load_options& opt) {
  passage_collection c;
  for_each_line(in, [&](std::size_t line_no, std::string_view line) {
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw parse_error(line_no, "missing tab separator");
    std::string_view id = line.substr(0, tab);
    std::string_view text = line.substr(tab + 1);
    if (id.empty() || has_whitespace(id)) throw parse_error(line_no, "bad passage id");
    if (text.empty() && !opt.allow_empty_text)
      throw parse_error(line_no, "empty passage text for id " + std::string(id));
    auto [it, inserted] = c.entries.emplace(std::string(id), std::string(text));
    (void)it;
    if (!inserted) throw parse_error(line_no, "duplicate passage id " + std::string(id));
  });
  return c;
}

passage_collection load_collection(std::string_view text, const collection_load_options& opt) {
  std::istringstream in{std::string(text)};
  return load_collection(in, opt);
}

void write_collection(const passage_collection& c, std::ostream& out) {
  std::map<passage_id, const std::string*> sorted;
  for (const auto& [id, text] : c.entries) sorted.emplace(id, &text);
  for (const auto& [id, text] : sorted) out << id << '\t' << *text << '\n';
}

topic_set load_topics(std::istream& in) {
  topic_set t;
  for_each_line(in, [&](std::size_t line_no, std::string_view line) {
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw parse_error(line_no, "missing tab separator");
    std::string_view id = line.substr(0, tab);
    std::string_view text = line.substr(tab + 1);
    if (id.empty() || has_whitespace(id)) throw parse_error(line_no, "bad topic id");
    if (text.empty()) throw parse_error(line_no, "empty query text for topic " + std::string(id));
    auto [it, inserted] = t.entries.emplace(std::string(id), std::string(text));
    (void)it;
    if (!inserted) throw parse_error(line_no, "duplicate topic id " + std::string(id));
  });
  return t;
}

topic_set load_topics(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_topics(in);
}

void write_topics(const topic_set& t, std::ostream& out) {
  for (const auto& [id, text] : t.entries) out << id << '\t' << text << '\n';
}

double qrels_stats_report::single_label_fraction() const {
  if (n_topics == 0) return 0.0;
  auto it = label_histogram.find(1);
  std::size_t singles = it == label_histogram.end() ? 0 : it->second;
  return static_cast<double>(singles) / static_cast<double>(n_topics);
}

qrels_stats_report qrels_stats(const qrels& q) {
  qrels_stats_report report;
  report.n_topics = q.judgments.size();
  for (const auto& [topic, passages] : q.judgments) {
    (void)topic;
    report.label_histogram[passages.size()] += 1;
  }
  return report;
}

namespace {

template <class Fn>
auto with_file(const std::string& path, Fn&& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open file: " + path);
  try {
    return fn(in);
  } catch (const parse_error& e) {
    throw data_error(path + ": " + e.what());
  }
}

}  // namespace

run load_run_file(const std::string& path, const run_parse_options& opt) {
  return with_file(path, [&](std::istream& in) { return parse_run(in, opt); });
}

qrels load_qrels_file(const std::string& path, const qrels_parse_options& opt) {
  return with_file(path, [&](std::istream& in) { return parse_qrels(in, opt); });
}

passage_collection load_collection_file(const std::string& path,
                                        const collection_load_options& opt) {
  return with_file(path, [&](std::istream& in) { return load_collection(in, opt); });
}

topic_set load_topics_file(const std::string& path) {
  return with_file(path, [&](std::istream& in) { return load_topics(in); });
}

void save_run_file(const run& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write file: " + path);
  write_run(r, out);
}

void save_qrels_file(const qrels& q, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write file: " + path);
  write_qrels(q, out);
}

}  // namespace irsense::trec
