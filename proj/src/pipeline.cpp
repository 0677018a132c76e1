#include "irsense/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

#include "irsense/parallel.hpp"
#include "irsense/rng.hpp"
#include "irsense/text_util.hpp"
#include "irsense/trec_io.hpp"

namespace irsense {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

json config_to_json(const experiment_config& c) {
  json j;
  j["collection"] = c.collection_path;
  j["topics"] = c.topics_path;
  j["gold_qrels"] = c.gold_qrels_path;
  j["runs_dir"] = c.runs_dir;
  if (c.external_first_stage) j["external_first_stage"] = *c.external_first_stage;
  if (c.external_second_stage) j["external_second_stage"] = *c.external_second_stage;
  j["output_dir"] = c.output_dir;
  j["metrics"] = json::array();
  for (const auto& m : c.metrics) j["metrics"].push_back(m.name());
  j["families"] = json::array();
  for (auto f : c.families) j["families"].push_back(family_label(f));
  j["d_max"] = c.d_max;
  j["rbc_phi"] = c.rbc_phi;
  j["run_depth"] = c.run_depth;
  j["seed_depth"] = c.seed_depth;
  j["fused_depth"] = c.fused_depth;
  j["fan_out"] = c.fan_out;
  j["rng_seed"] = c.rng_seed;
  j["k1"] = c.bm25.k1;
  j["b"] = c.bm25.b;
  j["stemming"] = c.stemming;
  if (c.qbp_max_terms) j["qbp_max_terms"] = *c.qbp_max_terms;
  j["exclude_gold_fan_out"] = c.exclude_gold_fan_out;
  j["allow_partial"] = c.allow_partial;
  j["threads"] = c.threads;
  return j;
}

template <class T>
void read_field(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

experiment_config experiment_config::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw config_error("bad config JSON in " + path + ": " + e.what());
  }

  experiment_config c;
  c.metrics = {metric_id{metric_kind::rr, 10}, metric_id{metric_kind::ap, 10},
               metric_id{metric_kind::ndcg, 10}};
  c.families = {seed_family::bm};
  try {
    read_field(j, "collection", c.collection_path);
    read_field(j, "topics", c.topics_path);
    read_field(j, "gold_qrels", c.gold_qrels_path);
    read_field(j, "runs_dir", c.runs_dir);
    if (j.contains("external_first_stage") && !j.at("external_first_stage").is_null())
      c.external_first_stage = j.at("external_first_stage").get<std::string>();
    if (j.contains("external_second_stage") && !j.at("external_second_stage").is_null())
      c.external_second_stage = j.at("external_second_stage").get<std::string>();
    read_field(j, "output_dir", c.output_dir);
    if (j.contains("metrics")) {
      c.metrics.clear();
      for (const auto& m : j.at("metrics")) c.metrics.push_back(metric_id::parse(m.get<std::string>()));
    }
    if (j.contains("families")) {
      c.families.clear();
      for (const auto& f : j.at("families"))
        c.families.push_back(family_from_label(f.get<std::string>()));
    }
    read_field(j, "d_max", c.d_max);
    read_field(j, "rbc_phi", c.rbc_phi);
    read_field(j, "run_depth", c.run_depth);
    read_field(j, "seed_depth", c.seed_depth);
    read_field(j, "fused_depth", c.fused_depth);
    read_field(j, "fan_out", c.fan_out);
    read_field(j, "rng_seed", c.rng_seed);
    read_field(j, "k1", c.bm25.k1);
    read_field(j, "b", c.bm25.b);
    read_field(j, "stemming", c.stemming);
    if (j.contains("qbp_max_terms") && !j.at("qbp_max_terms").is_null())
      c.qbp_max_terms = j.at("qbp_max_terms").get<std::size_t>();
    read_field(j, "exclude_gold_fan_out", c.exclude_gold_fan_out);
    read_field(j, "allow_partial", c.allow_partial);
    read_field(j, "threads", c.threads);
  } catch (const json::exception& e) {
    throw config_error("bad config value in " + path + ": " + e.what());
  }
  return c;
}

std::string experiment_config::to_json_string() const { return config_to_json(*this).dump(2); }

void experiment_config::validate() const {
  if (families.empty()) throw config_error("nothing to sweep: no families configured");
  if (metrics.empty()) throw config_error("nothing to sweep: no metrics configured");
  if (d_max < 0) throw config_error("d_max must be >= 0");
  if (run_depth < 1) throw config_error("run_depth must be >= 1");
  if (seed_depth < 1) throw config_error("seed_depth must be >= 1");
  if (fused_depth < 1) throw config_error("fused_depth must be >= 1");
  if (fan_out < 1) throw config_error("fan_out must be >= 1");
  if (!(rbc_phi >= 0.0 && rbc_phi < 1.0)) throw config_error("rbc_phi must be in [0,1)");
  bm25.validate();
  for (const auto& m : metrics) {
    if (m.cutoff < 1) throw config_error("metric cutoff must be >= 1");
  }
  {
    std::unordered_set<std::string> seen;
    for (auto f : families) {
      if (!seen.insert(family_label(f)).second)
        throw config_error("duplicate family: " + family_label(f));
    }
  }
  if (gold_qrels_path.empty()) throw config_error("gold_qrels path is required");
  if (runs_dir.empty()) throw config_error("runs_dir is required");
  if (output_dir.empty()) throw config_error("output_dir is required");
  const bool needs_index =
      std::find(families.begin(), families.end(), seed_family::bm) != families.end() ||
      std::find(families.begin(), families.end(), seed_family::fus) != families.end();
  if (needs_index && collection_path.empty())
    throw config_error("collection path is required for the BM and FUS families");
  const bool needs_external =
      std::find(families.begin(), families.end(), seed_family::tct) != families.end() ||
      std::find(families.begin(), families.end(), seed_family::fus) != families.end();
  if (needs_external && !external_first_stage)
    throw config_error("external_first_stage run is required for the TCT and FUS families");
}

namespace {

std::vector<run> load_system_runs(const std::string& dir, std::uint32_t depth_cap) {
  if (!fs::is_directory(dir)) throw data_error("runs_dir is not a directory: " + dir);
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().filename().string().starts_with(".")) continue;
    paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  if (paths.size() < 2) throw data_error("need at least 2 system runs in " + dir);

  std::vector<run> runs;
  std::map<std::string, std::string> tag_to_file;
  trec::run_parse_options opt;
  opt.depth_cap = depth_cap;
  for (const auto& p : paths) {
    run r = trec::load_run_file(p.string(), opt);
    if (r.lists.empty()) throw data_error("empty run file: " + p.string());
    auto [it, inserted] = tag_to_file.emplace(r.tag, p.string());
    if (!inserted)
      throw data_error("duplicate system tag '" + r.tag + "' in " + p.string() + " and " +
                       it->second);
    runs.push_back(std::move(r));
  }
  return runs;
}

// Mean per metric for one system over all judged topics; topics missing from
// the run score 0. Matches evaluate()'s accounting exactly.
std::vector<double> system_metric_means(const run& r, const qrels& judged,
                                        const std::vector<relevance_set>& rel_sets,
                                        const std::vector<const grade_map*>& grade_maps,
                                        const std::vector<metric_id>& metrics) {
  static const ranked_list empty_list{};
  std::vector<double> sums(metrics.size(), 0.0);
  std::size_t t = 0;
  std::size_t overlap = 0;
  for (const auto& [topic, grades] : judged.judgments) {
    (void)grades;
    auto it = r.lists.find(topic);
    const ranked_list& list = it == r.lists.end() ? empty_list : it->second;
    if (it != r.lists.end()) ++overlap;
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      switch (metrics[m].kind) {
        case metric_kind::rr:
          sums[m] += rr_at_k(list, rel_sets[t], metrics[m].cutoff);
          break;
        case metric_kind::ap:
          sums[m] += ap_at_k(list, rel_sets[t], metrics[m].cutoff);
          break;
        case metric_kind::ndcg:
          sums[m] += ndcg_at_k(list, *grade_maps[t], metrics[m].cutoff);
          break;
      }
    }
    ++t;
  }
  if (overlap == 0) throw data_error("run '" + r.tag + "' shares no topics with the qrels");
  const double n = static_cast<double>(judged.judgments.size());
  for (auto& s : sums) s /= n;
  return sums;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write file: " + path.string());
  out << text;
  if (!out) throw data_error("failed writing file: " + path.string());
}

std::string iso8601_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

sweep_result run_sweep(const experiment_config& config) {
  config.validate();

  qrels gold = trec::load_qrels_file(config.gold_qrels_path);
  gold.validate();
  std::size_t max_gold = 0;
  for (const auto& [topic, passages] : gold.judgments) {
    (void)topic;
    max_gold = std::max(max_gold, passages.size());
  }
  const std::size_t min_seed_depth = static_cast<std::size_t>(config.d_max) + max_gold;
  if (config.seed_depth < min_seed_depth)
    throw config_error("seed_depth " + std::to_string(config.seed_depth) +
                       " < d_max + largest gold set (" + std::to_string(min_seed_depth) + ")");
  const bool wants_fus =
      std::find(config.families.begin(), config.families.end(), seed_family::fus) !=
      config.families.end();
  if (wants_fus && config.fused_depth < min_seed_depth)
    throw config_error("fused_depth " + std::to_string(config.fused_depth) +
                       " < d_max + largest gold set (" + std::to_string(min_seed_depth) + ")");

  std::vector<run> systems = load_system_runs(config.runs_dir, config.run_depth);
  gold_set gold_sel = select_gold(gold, config.rng_seed);

  const bool needs_index =
      wants_fus || std::find(config.families.begin(), config.families.end(), seed_family::bm) !=
                       config.families.end();
  passage_collection collection;
  std::optional<inverted_index> index;
  if (needs_index) {
    collection = trec::load_collection_file(config.collection_path);
    index = inverted_index::build(collection, tokenizer_config{config.stemming});
  }
  std::optional<run> external_first;
  if (config.external_first_stage)
    external_first = trec::load_run_file(*config.external_first_stage);
  std::optional<run> external_second;
  if (config.external_second_stage)
    external_second = trec::load_run_file(*config.external_second_stage);

  fs::create_directories(fs::path(config.output_dir) / "qrels");
  {
    std::ostringstream gold_tsv;
    for (const auto& [topic, entry] : gold_sel.topics) {
      gold_tsv << topic << '\t' << entry.designated << '\n';
    }
    write_text_file(fs::path(config.output_dir) / "gold_selection.tsv", gold_tsv.str());
  }

  searcher_options search_opts;
  search_opts.max_qbp_terms = config.qbp_max_terms;

  // Reference orderings from the gold qrels, one per metric.
  std::vector<std::vector<double>> gold_means(systems.size());
  {
    std::vector<relevance_set> rel_sets;
    std::vector<const grade_map*> grade_maps;
    rel_sets.reserve(gold.judgments.size());
    for (const auto& [topic, grades] : gold.judgments) {
      (void)topic;
      relevance_set rel;
      for (const auto& [pid, g] : grades) {
        (void)g;
        rel.insert(pid);
      }
      rel_sets.push_back(std::move(rel));
      grade_maps.push_back(&grades);
    }
    parallel_for(
        systems.size(),
        [&](std::size_t i) {
          gold_means[i] =
              system_metric_means(systems[i], gold, rel_sets, grade_maps, config.metrics);
        },
        config.threads);
  }
  std::vector<system_ordering> reference(config.metrics.size());
  for (std::size_t m = 0; m < config.metrics.size(); ++m) {
    std::vector<std::pair<std::string, double>> means;
    means.reserve(systems.size());
    for (std::size_t i = 0; i < systems.size(); ++i)
      means.emplace_back(systems[i].tag, gold_means[i][m]);
    reference[m] = rank_systems(means);
  }

  sweep_result result;
  for (const auto& r : systems) result.systems.push_back(r.tag);

  for (seed_family family : config.families) {
    seed_source source;
    switch (family) {
      case seed_family::bm:
        source = make_bm25_seed(*index, collection, config.bm25, gold_sel, config.seed_depth,
                                search_opts, config.threads);
        break;
      case seed_family::tct:
        source = make_external_seed(*external_first, gold_sel);
        break;
      case seed_family::fus: {
        fused_seed_options fopts;
        fopts.fan_out = config.fan_out;
        fopts.rerun_depth = config.seed_depth;
        fopts.fused_depth = config.fused_depth;
        fopts.phi = config.rbc_phi;
        fopts.exclude_gold_from_fan_out = config.exclude_gold_fan_out;
        fopts.threads = config.threads;
        source = make_fused_seed(gold_sel, *index, collection, config.bm25, *external_first,
                                 external_second ? &*external_second : nullptr, fopts,
                                 search_opts);
        break;
      }
    }

    extrapolate_options xopts;
    xopts.allow_partial = config.allow_partial;
    extrapolated_qrels extr = extrapolate_seed(gold_sel, source, config.d_max, xopts);
    const std::string label = family_label(family);
    if (!extr.excluded.empty()) {
      result.excluded_topics[label] = extr.excluded;
      std::cerr << "[irsense] warning: family " << label << " excluded "
                << extr.excluded.size() << " topic(s) with shallow seed rankings\n";
    }

    qrels current = extr.materialize(0);
    for (int d = 0; d <= config.d_max; ++d) {
      if (d > 0) {
        for (const auto& [topic, added] : extr.additions) {
          current.judgments[topic].emplace(added[static_cast<std::size_t>(d - 1)], 1);
        }
      }

      std::vector<relevance_set> rel_sets;
      std::vector<const grade_map*> grade_maps;
      rel_sets.reserve(current.judgments.size());
      for (const auto& [topic, grades] : current.judgments) {
        (void)topic;
        relevance_set rel;
        for (const auto& [pid, g] : grades) {
          (void)g;
          rel.insert(pid);
        }
        rel_sets.push_back(std::move(rel));
        grade_maps.push_back(&grades);
      }

      std::vector<std::vector<double>> means(systems.size());
      parallel_for(
          systems.size(),
          [&](std::size_t i) {
            means[i] =
                system_metric_means(systems[i], current, rel_sets, grade_maps, config.metrics);
          },
          config.threads);

      for (std::size_t m = 0; m < config.metrics.size(); ++m) {
        std::vector<std::pair<std::string, double>> per_system;
        per_system.reserve(systems.size());
        double grand = 0.0;
        for (std::size_t i = 0; i < systems.size(); ++i) {
          per_system.emplace_back(systems[i].tag, means[i][m]);
          grand += means[i][m];
          result.system_means.push_back(
              system_mean_row{family, config.metrics[m], d, systems[i].tag, means[i][m]});
        }
        grand /= static_cast<double>(systems.size());
        system_ordering ordering = rank_systems(per_system);

        sweep_cell cell;
        cell.family = family;
        cell.metric = config.metrics[m];
        cell.d = d;
        cell.mean_score = grand;
        cell.tau_unweighted = kendall_tau(reference[m], ordering).tau;
        cell.tau_weighted = weighted_tau(reference[m], ordering).tau;
        result.cells.push_back(cell);
      }

      // qrels artifact plus a timestamp-free sidecar manifest.
      const fs::path qrels_path =
          fs::path(config.output_dir) / "qrels" /
          ("qrels_" + label + "_d" + std::to_string(d) + ".txt");
      trec::save_qrels_file(current, qrels_path.string());
      json sidecar;
      sidecar["family"] = label;
      sidecar["d"] = d;
      sidecar["rng_seed"] = config.rng_seed;
      sidecar["rbc_phi"] = config.rbc_phi;
      sidecar["seed_depth"] = config.seed_depth;
      sidecar["fused_depth"] = config.fused_depth;
      sidecar["fan_out"] = config.fan_out;
      sidecar["run_depth"] = config.run_depth;
      sidecar["excluded_topics"] = extr.excluded;
      write_text_file(qrels_path.string() + ".manifest.json", sidecar.dump(2) + "\n");
    }
  }

  // family-major order with metric then d inside, for readable CSVs
  std::stable_sort(result.cells.begin(), result.cells.end(), [](const auto& a, const auto& b) {
    if (a.family != b.family) return family_label(a.family) < family_label(b.family);
    if (a.metric != b.metric) return a.metric.name() < b.metric.name();
    return a.d < b.d;
  });
  std::stable_sort(result.system_means.begin(), result.system_means.end(),
                   [](const auto& a, const auto& b) {
                     if (a.family != b.family)
                       return family_label(a.family) < family_label(b.family);
                     if (a.metric != b.metric) return a.metric.name() < b.metric.name();
                     if (a.d != b.d) return a.d < b.d;
                     return a.system < b.system;
                   });
  return result;
}

void emit_report(const sweep_result& result, const experiment_config& config,
                 const std::string& out_dir) {
  if (result.cells.empty()) throw data_error("nothing to sweep: no result rows");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw data_error("cannot create output directory " + out_dir + ": " + ec.message());

  std::ostringstream scores;
  scores << "family,metric,d,mean\n";
  for (const auto& c : result.cells) {
    scores << family_label(c.family) << ',' << c.metric.name() << ',' << c.d << ','
           << format_double(c.mean_score) << '\n';
  }
  write_text_file(fs::path(out_dir) / "scores.csv", scores.str());

  std::ostringstream tau;
  tau << "family,metric,d,tau_unweighted,tau_weighted\n";
  for (const auto& c : result.cells) {
    tau << family_label(c.family) << ',' << c.metric.name() << ',' << c.d << ','
        << format_double(c.tau_unweighted) << ',' << format_double(c.tau_weighted) << '\n';
  }
  write_text_file(fs::path(out_dir) / "tau.csv", tau.str());

  std::ostringstream means;
  means << "family,metric,d,system,mean\n";
  for (const auto& row : result.system_means) {
    means << family_label(row.family) << ',' << row.metric.name() << ',' << row.d << ','
          << row.system << ',' << format_double(row.mean) << '\n';
  }
  write_text_file(fs::path(out_dir) / "means.csv", means.str());

  std::ostringstream longtsv;
  longtsv << "family\tmetric\td\tquantity\tvalue\n";
  for (const auto& c : result.cells) {
    const std::string prefix =
        family_label(c.family) + "\t" + c.metric.name() + "\t" + std::to_string(c.d) + "\t";
    longtsv << prefix << "mean_score\t" << format_double(c.mean_score) << '\n';
    longtsv << prefix << "tau_unweighted\t" << format_double(c.tau_unweighted) << '\n';
    longtsv << prefix << "tau_weighted\t" << format_double(c.tau_weighted) << '\n';
  }
  write_text_file(fs::path(out_dir) / "long.tsv", longtsv.str());

  json manifest;
  manifest["tool"] = "irsense";
  manifest["version"] = kToolVersion;
  manifest["created"] = iso8601_now();
  manifest["config"] = config_to_json(config);
  manifest["systems"] = result.systems;
  write_text_file(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");
}

namespace {

std::string sanitize_tsv(std::string text) {
  for (char& c : text) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

}  // namespace

std::vector<judgment_row> sample_for_judgment(const seed_source& fused, const gold_set& gold,
                                              const topic_set& topics,
                                              const passage_collection& coll,
                                              std::size_t n_topics,
                                              const std::vector<std::uint32_t>& ranks,
                                              std::uint64_t rng_seed) {
  if (fused.kind != seed_family::fus)
    throw config_error("judgment sampling requires a fused seed source");
  if (n_topics < 1) throw config_error("sample size must be >= 1");
  if (ranks.empty()) throw config_error("at least one rank is required");
  std::vector<std::uint32_t> sorted_ranks = ranks;
  std::sort(sorted_ranks.begin(), sorted_ranks.end());
  sorted_ranks.erase(std::unique(sorted_ranks.begin(), sorted_ranks.end()), sorted_ranks.end());
  if (sorted_ranks.front() < 1) throw config_error("ranks are 1-based");

  std::vector<const topic_id*> eligible;
  eligible.reserve(fused.rankings.size());
  for (const auto& [topic, list] : fused.rankings) {
    (void)list;
    if (gold.topics.count(topic)) eligible.push_back(&topic);
  }
  if (n_topics > eligible.size())
    throw config_error("sample size " + std::to_string(n_topics) + " exceeds " +
                       std::to_string(eligible.size()) + " eligible topics");

  auto eng = keyed_engine(rng_seed, "judgment-sample");
  auto picks = sample_indices(eng, eligible.size(), n_topics);
  std::vector<const topic_id*> chosen;
  chosen.reserve(picks.size());
  for (auto i : picks) chosen.push_back(eligible[i]);
  std::sort(chosen.begin(), chosen.end(),
            [](const topic_id* a, const topic_id* b) { return *a < *b; });

  std::vector<judgment_row> rows;
  rows.reserve(chosen.size() * sorted_ranks.size());
  for (const topic_id* topic : chosen) {
    const ranked_list& list = fused.rankings.at(*topic);
    const gold_set::entry& entry = gold.topics.at(*topic);
    auto topic_text = topics.entries.find(*topic);
    if (topic_text == topics.entries.end())
      throw data_error("no query text for topic " + *topic);
    const std::string* gold_text = coll.find(entry.designated);
    if (!gold_text) throw data_error("gold passage " + entry.designated + " not in collection");

    for (std::uint32_t r : sorted_ranks) {
      if (r > list.entries.size())
        throw data_error("rank " + std::to_string(r) + " exceeds fused ranking depth " +
                         std::to_string(list.entries.size()) + " for topic " + *topic);
      const passage_id& pid = list.entries[r - 1].passage;
      const std::string* passage_text = coll.find(pid);
      if (!passage_text) throw data_error("passage " + pid + " not in collection");

      judgment_row row;
      row.topic = *topic;
      row.rank = r;
      row.passage = pid;
      row.gold = entry.designated;
      row.gold_identical =
          std::binary_search(entry.members.begin(), entry.members.end(), pid);
      row.query_text = topic_text->second;
      row.passage_text = *passage_text;
      row.gold_text = *gold_text;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_worksheet(const std::vector<judgment_row>& rows, std::ostream& out) {
  out << "topic\trank\tpassage\tgold_passage\tgold_identical\tconsensus\tquery_text\t"
         "passage_text\tgold_text\n";
  for (const auto& row : rows) {
    out << row.topic << '\t' << row.rank << '\t' << row.passage << '\t' << row.gold << '\t'
        << (row.gold_identical ? "yes" : "no") << '\t' << '\t' << sanitize_tsv(row.query_text)
        << '\t' << sanitize_tsv(row.passage_text) << '\t' << sanitize_tsv(row.gold_text) << '\n';
  }
}

std::string summarize_worksheet(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw parse_error(1, "empty worksheet");
  std::vector<std::string> columns;
  {
    std::string_view rest = strip_cr(header);
    while (!rest.empty()) {
      auto tab = rest.find('\t');
      columns.emplace_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
  }
  auto find_col = [&](std::string_view name) {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw parse_error(1, "worksheet missing column '" + std::string(name) + "'");
  };
  const std::size_t rank_col = find_col("rank");
  const std::size_t consensus_col = find_col("consensus");

  std::map<std::uint32_t, std::pair<std::size_t, std::size_t>> tally;  // rank -> (yes, total)
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = strip_cr(line);
    if (is_blank(rest)) continue;
    std::vector<std::string_view> fields;
    while (true) {
      auto tab = rest.find('\t');
      fields.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (fields.size() <= std::max(rank_col, consensus_col))
      throw parse_error(line_no, "too few worksheet columns");
    auto rank = parse_int(fields[rank_col]);
    if (!rank || *rank < 1) throw parse_error(line_no, "bad rank value");
    std::string consensus;
    for (char c : fields[consensus_col])
      consensus.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    auto& [yes, total] = tally[static_cast<std::uint32_t>(*rank)];
    ++total;
    if (consensus == "yes" || consensus == "y") ++yes;
  }
  if (tally.empty()) throw parse_error(line_no, "worksheet has no data rows");

  std::ostringstream out;
  out << "rank\tjudged-as-relevant-as-gold\n";
  for (const auto& [rank, counts] : tally) {
    out << rank << '\t' << counts.first << '/' << counts.second << '\n';
  }
  return out.str();
}

}  // namespace irsense
