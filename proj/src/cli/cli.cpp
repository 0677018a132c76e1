#include "irsense/cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "irsense/bm25.hpp"
#include "irsense/extrapolate.hpp"
#include "irsense/fusion.hpp"
#include "irsense/kernels/bm25_kernel.hpp"
#include "irsense/metrics.hpp"
#include "irsense/parallel.hpp"
#include "irsense/pipeline.hpp"
#include "irsense/text_util.hpp"
#include "irsense/trec_io.hpp"

namespace irsense::cli {

namespace fs = std::filesystem;

namespace {

void write_or_print(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write file: " + path);
  out << text;
}

std::vector<std::pair<std::string, double>> read_means_csv(const std::string& path,
                                                           const std::string& metric_filter) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open file: " + path);
  std::vector<std::pair<std::string, double>> means;
  std::string line;
  std::size_t line_no = 0;
  bool four_col = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = strip_cr(line);
    if (is_blank(sv)) continue;
    std::vector<std::string> fields;
    {
      std::string_view rest = sv;
      while (true) {
        auto comma = rest.find(',');
        fields.emplace_back(rest.substr(0, comma));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
      }
    }
    if (line_no == 1 && (fields.size() >= 2 && fields[0] == "system")) {
      four_col = fields.size() >= 4 && fields[1] == "metric";
      continue;  // header
    }
    if (four_col) {
      if (fields.size() != 4) throw parse_error(line_no, "expected 4 CSV columns");
      if (!metric_filter.empty()) {
        const std::string name = fields[1] + "@" + fields[2];
        if (name != metric_filter) continue;
      }
      auto v = parse_double(fields[3]);
      if (!v) throw parse_error(line_no, "bad mean value");
      means.emplace_back(fields[0], *v);
    } else {
      if (fields.size() != 2) throw parse_error(line_no, "expected 2 CSV columns (system,mean)");
      auto v = parse_double(fields[1]);
      if (!v) throw parse_error(line_no, "bad mean value");
      means.emplace_back(fields[0], *v);
    }
  }
  if (means.empty()) throw data_error("no system means found in " + path);
  return means;
}

std::vector<std::string> read_id_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open file: " + path);
  std::vector<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = strip_cr(line);
    if (is_blank(sv)) continue;
    auto fields = split_whitespace(sv);
    if (fields.size() != 1) throw parse_error(line_no, "expected one id per line");
    ids.emplace_back(fields[0]);
  }
  return ids;
}

struct sweep_overrides {
  std::string output_dir;
  int d_max = -1;
  std::int64_t rng_seed = -1;
  unsigned threads = 0;
  bool threads_set = false;
  std::vector<std::string> families;
  std::vector<std::string> metrics;
};

experiment_config load_config(const std::string& path, const sweep_overrides& ov) {
  experiment_config cfg = experiment_config::from_json_file(path);
  if (!ov.output_dir.empty()) cfg.output_dir = ov.output_dir;
  if (ov.d_max >= 0) cfg.d_max = ov.d_max;
  if (ov.rng_seed >= 0) cfg.rng_seed = static_cast<std::uint64_t>(ov.rng_seed);
  if (ov.threads_set) cfg.threads = ov.threads;
  if (!ov.families.empty()) {
    cfg.families.clear();
    for (const auto& f : ov.families) cfg.families.push_back(family_from_label(f));
  }
  if (!ov.metrics.empty()) {
    cfg.metrics.clear();
    for (const auto& m : ov.metrics) cfg.metrics.push_back(metric_id::parse(m));
  }
  return cfg;
}

// Loads everything the FUS pipeline needs and builds the fused seed source.
struct fused_inputs {
  passage_collection collection;
  topic_set topics;
  qrels gold;
  gold_set gold_sel;
  seed_source fused;
};

fused_inputs build_fused_from_config(const experiment_config& cfg, bool need_topics) {
  if (cfg.collection_path.empty())
    throw config_error("config needs a collection for the fused pipeline");
  if (!cfg.external_first_stage)
    throw config_error("config needs external_first_stage for the fused pipeline");
  fused_inputs in;
  in.collection = trec::load_collection_file(cfg.collection_path);
  if (need_topics) {
    if (cfg.topics_path.empty()) throw config_error("config needs a topics file");
    in.topics = trec::load_topics_file(cfg.topics_path);
  }
  in.gold = trec::load_qrels_file(cfg.gold_qrels_path);
  in.gold_sel = select_gold(in.gold, cfg.rng_seed);
  inverted_index idx = inverted_index::build(in.collection, tokenizer_config{cfg.stemming});
  irsense::run first = trec::load_run_file(*cfg.external_first_stage);
  std::optional<irsense::run> second;
  if (cfg.external_second_stage) second = trec::load_run_file(*cfg.external_second_stage);

  fused_seed_options fopts;
  fopts.fan_out = cfg.fan_out;
  fopts.rerun_depth = cfg.seed_depth;
  fopts.fused_depth = cfg.fused_depth;
  fopts.phi = cfg.rbc_phi;
  fopts.exclude_gold_from_fan_out = cfg.exclude_gold_fan_out;
  fopts.threads = cfg.threads;
  searcher_options sopts;
  sopts.max_qbp_terms = cfg.qbp_max_terms;
  in.fused = make_fused_seed(in.gold_sel, idx, in.collection, cfg.bm25, first,
                             second ? &*second : nullptr, fopts, sopts);
  return in;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"irsense: qrels-sensitivity toolkit for TREC-style test collections"};
  app.require_subcommand(1);
  app.footer("Exit codes: 0 ok, 2 config/usage error, 3 data error, 4 internal error.");

  std::function<int()> action;

  // ---- index ----
  {
    auto* cmd = app.add_subcommand("index", "Build an inverted index from a collection TSV");
    auto collection = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto no_stem = std::make_shared<bool>(false);
    auto allow_empty = std::make_shared<bool>(false);
    cmd->add_option("--collection", *collection, "Collection TSV (id<TAB>text)")->required();
    cmd->add_option("--out", *out, "Output index file")->required();
    cmd->add_flag("--no-stem", *no_stem, "Disable the s-stemmer");
    cmd->add_flag("--allow-empty-text", *allow_empty, "Accept passages with empty text");
    cmd->callback([=, &action] {
      action = [=]() {
        trec::collection_load_options copt;
        copt.allow_empty_text = *allow_empty;
        passage_collection coll = trec::load_collection_file(*collection, copt);
        inverted_index idx = inverted_index::build(coll, tokenizer_config{!*no_stem});
        idx.save_file(*out);
        std::cerr << "[irsense] indexed " << idx.doc_count() << " passages, "
                  << idx.vocabulary_size() << " terms, avg length " << idx.avg_doc_length()
                  << " (kernel: " << kernels::bm25_kernel_name() << ")\n";
        return exit_ok;
      };
    });
  }

  // ---- search ----
  {
    auto* cmd = app.add_subcommand("search", "BM25 search over an index");
    auto index_path = std::make_shared<std::string>();
    auto topics_path = std::make_shared<std::string>();
    auto query = std::make_shared<std::string>();
    auto depth = std::make_shared<std::size_t>(100);
    auto k1 = std::make_shared<double>(0.9);
    auto b = std::make_shared<double>(0.4);
    auto tag = std::make_shared<std::string>("bm25");
    auto out = std::make_shared<std::string>();
    auto threads = std::make_shared<unsigned>(0);
    cmd->add_option("--index", *index_path, "Index file")->required();
    auto* topics_opt = cmd->add_option("--topics", *topics_path, "Topics TSV (id<TAB>query)");
    auto* query_opt = cmd->add_option("--query", *query, "Single ad-hoc query");
    topics_opt->excludes(query_opt);
    cmd->add_option("--depth", *depth, "Results per topic");
    cmd->add_option("--k1", *k1, "BM25 k1");
    cmd->add_option("--b", *b, "BM25 b");
    cmd->add_option("--tag", *tag, "Run tag");
    cmd->add_option("--out", *out, "Output run file (default stdout)");
    cmd->add_option("--threads", *threads, "Worker threads (0 = all cores)");
    cmd->callback([=, &action] {
      action = [=]() {
        if (topics_path->empty() && query->empty())
          throw CLI::RequiredError("--topics or --query");
        inverted_index idx = inverted_index::load_file(*index_path);
        bm25_params params{*k1, *b};
        irsense::run r;
        r.tag = *tag;
        if (!query->empty()) {
          searcher s(idx, params);
          ranked_list list = s.search(*query, *depth, *tag, "query");
          r.lists.emplace(list.topic, std::move(list));
        } else {
          topic_set topics = trec::load_topics_file(*topics_path);
          std::vector<std::pair<const topic_id*, const std::string*>> items;
          for (const auto& [tid, text] : topics.entries) items.emplace_back(&tid, &text);
          std::vector<ranked_list> lists(items.size());
          const unsigned workers = worker_count(items.size(), *threads);
          std::vector<std::unique_ptr<searcher>> local(workers);
          for (auto& s : local) s = std::make_unique<searcher>(idx, params);
          parallel_for_workers(items.size(), *threads, [&](unsigned w, std::size_t i) {
            lists[i] = local[w]->search(*items[i].second, *depth, *tag, *items[i].first);
          });
          for (auto& list : lists) {
            if (list.entries.empty()) continue;  // no matches: omit from the run
            r.lists.emplace(list.topic, std::move(list));
          }
        }
        write_or_print(trec::write_run_string(r), *out);
        return exit_ok;
      };
    });
  }

  // ---- qbp ----
  {
    auto* cmd = app.add_subcommand("qbp", "Query-by-passage rankings");
    auto index_path = std::make_shared<std::string>();
    auto collection = std::make_shared<std::string>();
    auto passages = std::make_shared<std::string>();
    auto qrels_path = std::make_shared<std::string>();
    auto rng_seed = std::make_shared<std::uint64_t>(1);
    auto gold_out = std::make_shared<std::string>();
    auto depth = std::make_shared<std::size_t>(100);
    auto k1 = std::make_shared<double>(0.9);
    auto b = std::make_shared<double>(0.4);
    auto tag = std::make_shared<std::string>("bm25-qbp");
    auto out = std::make_shared<std::string>();
    auto max_terms = std::make_shared<std::size_t>(0);
    auto threads = std::make_shared<unsigned>(0);
    cmd->add_option("--index", *index_path, "Index file")->required();
    cmd->add_option("--collection", *collection, "Collection TSV (passage texts)")->required();
    auto* pass_opt =
        cmd->add_option("--passages", *passages, "File of passage ids; run keyed by passage id");
    auto* qrels_opt = cmd->add_option(
        "--qrels", *qrels_path, "Gold qrels; run keyed by topic, seeded from the designated gold");
    pass_opt->excludes(qrels_opt);
    cmd->add_option("--rng-seed", *rng_seed, "Seed for designated-gold selection");
    cmd->add_option("--gold-out", *gold_out, "Write topic<TAB>designated-gold TSV");
    cmd->add_option("--depth", *depth, "Results per ranking");
    cmd->add_option("--k1", *k1, "BM25 k1");
    cmd->add_option("--b", *b, "BM25 b");
    cmd->add_option("--tag", *tag, "Run tag");
    cmd->add_option("--out", *out, "Output run file (default stdout)");
    cmd->add_option("--max-terms", *max_terms, "Cap on query tokens taken from the passage");
    cmd->add_option("--threads", *threads, "Worker threads (0 = all cores)");
    cmd->callback([=, &action] {
      action = [=]() {
        if (passages->empty() && qrels_path->empty())
          throw CLI::RequiredError("--passages or --qrels");
        inverted_index idx = inverted_index::load_file(*index_path);
        passage_collection coll = trec::load_collection_file(*collection);
        bm25_params params{*k1, *b};
        searcher_options sopts;
        if (*max_terms > 0) sopts.max_qbp_terms = *max_terms;

        irsense::run r;
        r.tag = *tag;
        if (!qrels_path->empty()) {
          qrels gold = trec::load_qrels_file(*qrels_path);
          gold_set sel = select_gold(gold, *rng_seed);
          if (!gold_out->empty()) {
            std::ostringstream tsv;
            for (const auto& [topic, entry] : sel.topics)
              tsv << topic << '\t' << entry.designated << '\n';
            write_or_print(tsv.str(), *gold_out);
          }
          seed_source source = make_bm25_seed(idx, coll, params, sel, *depth, sopts, *threads);
          for (auto& [topic, list] : source.rankings) {
            list.tag = *tag;
            r.lists.emplace(topic, std::move(list));
          }
        } else {
          std::vector<std::string> ids = read_id_lines(*passages);
          std::vector<ranked_list> lists(ids.size());
          const unsigned workers = worker_count(ids.size(), *threads);
          std::vector<std::unique_ptr<searcher>> local(workers);
          for (auto& s : local) s = std::make_unique<searcher>(idx, params, sopts);
          parallel_for_workers(ids.size(), *threads, [&](unsigned w, std::size_t i) {
            lists[i] = local[w]->query_by_passage(coll, ids[i], *depth, *tag);
          });
          for (auto& list : lists) {
            auto [it, inserted] = r.lists.emplace(list.topic, std::move(list));
            (void)it;
            if (!inserted) throw data_error("duplicate seed passage id: " + it->first);
          }
        }
        write_or_print(trec::write_run_string(r), *out);
        return exit_ok;
      };
    });
  }

  // ---- fuse ----
  {
    auto* cmd = app.add_subcommand("fuse", "RBC-fuse run files, topic by topic");
    auto inputs = std::make_shared<std::vector<std::string>>();
    auto phi = std::make_shared<double>(0.98);
    auto depth = std::make_shared<std::size_t>(100);
    auto tag = std::make_shared<std::string>("rbc");
    auto out = std::make_shared<std::string>();
    cmd->add_option("--inputs", *inputs, "Run files to fuse")->required()->expected(-1);
    cmd->add_option("--phi", *phi, "RBC persistence in [0,1)");
    cmd->add_option("--depth", *depth, "Fused output depth");
    cmd->add_option("--tag", *tag, "Output run tag");
    cmd->add_option("--out", *out, "Output run file (default stdout)");
    cmd->callback([=, &action] {
      action = [=]() {
        if (inputs->empty()) throw config_error("no input runs");
        std::vector<irsense::run> runs;
        runs.reserve(inputs->size());
        for (const auto& path : *inputs) runs.push_back(trec::load_run_file(path));
        std::map<topic_id, std::vector<ranked_list>> by_topic;
        for (const auto& r : runs) {
          for (const auto& [topic, list] : r.lists) by_topic[topic].push_back(list);
        }
        rbc_params params{*phi, *depth};
        irsense::run fused;
        fused.tag = *tag;
        for (const auto& [topic, lists] : by_topic) {
          fused.lists.emplace(topic, rbc_fuse(lists, params, *tag));
        }
        write_or_print(trec::write_run_string(fused), *out);
        return exit_ok;
      };
    });
  }

  // ---- extrapolate ----
  {
    auto* cmd = app.add_subcommand("extrapolate", "Build extrapolated qrels from a seed system");
    auto gold_path = std::make_shared<std::string>();
    auto family = std::make_shared<std::string>("bm");
    auto d = std::make_shared<int>(0);
    auto out = std::make_shared<std::string>();
    auto manifest = std::make_shared<std::string>();
    auto rng_seed = std::make_shared<std::uint64_t>(1);
    auto allow_partial = std::make_shared<bool>(false);
    auto index_path = std::make_shared<std::string>();
    auto collection = std::make_shared<std::string>();
    auto seed_run = std::make_shared<std::string>();
    auto external_first = std::make_shared<std::string>();
    auto external_second = std::make_shared<std::string>();
    auto seed_depth = std::make_shared<std::size_t>(100);
    auto fan_out = std::make_shared<std::size_t>(5);
    auto rerun_depth = std::make_shared<std::size_t>(100);
    auto fused_depth = std::make_shared<std::size_t>(100);
    auto phi = std::make_shared<double>(0.98);
    auto exclude_gold = std::make_shared<bool>(false);
    auto list_seeds = std::make_shared<std::string>();
    auto k1 = std::make_shared<double>(0.9);
    auto b = std::make_shared<double>(0.4);
    auto max_terms = std::make_shared<std::size_t>(0);
    auto threads = std::make_shared<unsigned>(0);
    cmd->add_option("--gold", *gold_path, "Gold qrels file")->required();
    cmd->add_option("--family", *family, "Seed family: bm, tct, or fus")->required();
    cmd->add_option("-d,--d", *d, "Number of deemed-relevant additions per topic")->required();
    cmd->add_option("--out", *out, "Output qrels file")->required();
    cmd->add_option("--manifest", *manifest, "Sidecar manifest path (default <out>.manifest.json)");
    cmd->add_option("--rng-seed", *rng_seed, "Seed for designated-gold selection");
    cmd->add_flag("--allow-partial", *allow_partial, "Drop starved topics instead of failing");
    cmd->add_option("--index", *index_path, "Index file (bm/fus)");
    cmd->add_option("--collection", *collection, "Collection TSV (bm/fus)");
    cmd->add_option("--seed-run", *seed_run, "External per-topic seed run (tct)");
    cmd->add_option("--external-first", *external_first, "External first-stage run (fus)");
    cmd->add_option("--external-second", *external_second,
                    "External second-stage run keyed by seed passage id (fus)");
    cmd->add_option("--seed-depth", *seed_depth, "Depth of internal seed rankings");
    cmd->add_option("--fan-out", *fan_out, "Fan-out per first-stage run (fus)");
    cmd->add_option("--rerun-depth", *rerun_depth, "Depth of second-stage runs (fus)");
    cmd->add_option("--fused-depth", *fused_depth, "Depth of the fused ranking (fus)");
    cmd->add_option("--phi", *phi, "RBC persistence (fus)");
    cmd->add_flag("--exclude-gold-fan-out", *exclude_gold,
                  "Drop gold passages before taking fan-out seeds (fus)");
    cmd->add_option("--list-seeds", *list_seeds,
                    "Write the unique fan-out seed passage ids and exit (fus)");
    cmd->add_option("--k1", *k1, "BM25 k1");
    cmd->add_option("--b", *b, "BM25 b");
    cmd->add_option("--max-terms", *max_terms, "Cap on query-by-passage tokens");
    cmd->add_option("--threads", *threads, "Worker threads");
    cmd->callback([=, &action] {
      action = [=]() {
        qrels gold = trec::load_qrels_file(*gold_path);
        gold_set sel = select_gold(gold, *rng_seed);
        seed_family fam = family_from_label(*family);
        bm25_params params{*k1, *b};
        searcher_options sopts;
        if (*max_terms > 0) sopts.max_qbp_terms = *max_terms;

        seed_source source;
        switch (fam) {
          case seed_family::bm: {
            if (index_path->empty() || collection->empty())
              throw config_error("family bm needs --index and --collection");
            inverted_index idx = inverted_index::load_file(*index_path);
            passage_collection coll = trec::load_collection_file(*collection);
            source = make_bm25_seed(idx, coll, params, sel, *seed_depth, sopts, *threads);
            break;
          }
          case seed_family::tct: {
            if (seed_run->empty()) throw config_error("family tct needs --seed-run");
            source = make_external_seed(trec::load_run_file(*seed_run), sel);
            break;
          }
          case seed_family::fus: {
            if (index_path->empty() || collection->empty() || external_first->empty())
              throw config_error("family fus needs --index, --collection, and --external-first");
            inverted_index idx = inverted_index::load_file(*index_path);
            passage_collection coll = trec::load_collection_file(*collection);
            irsense::run first = trec::load_run_file(*external_first);
            if (!list_seeds->empty()) {
              auto first_bm =
                  make_bm25_seed(idx, coll, params, sel, *rerun_depth, sopts, *threads).rankings;
              auto seeds = collect_fan_out_seeds(sel, first_bm, first, *fan_out, *exclude_gold);
              std::set<passage_id> unique_seeds;
              for (const auto& [topic, pids] : seeds) {
                (void)topic;
                for (const auto& pid : pids) unique_seeds.insert(pid);
              }
              std::ostringstream text;
              for (const auto& pid : unique_seeds) text << pid << '\n';
              write_or_print(text.str(), *list_seeds);
              return exit_ok;
            }
            std::optional<irsense::run> second;
            if (!external_second->empty()) second = trec::load_run_file(*external_second);
            fused_seed_options fopts;
            fopts.fan_out = *fan_out;
            fopts.rerun_depth = *rerun_depth;
            fopts.fused_depth = *fused_depth;
            fopts.phi = *phi;
            fopts.exclude_gold_from_fan_out = *exclude_gold;
            fopts.threads = *threads;
            fused_seed_stats stats;
            source = make_fused_seed(sel, idx, coll, params, first,
                                     second ? &*second : nullptr, fopts, sopts, &stats);
            std::cerr << "[irsense] fused " << stats.second_stage_runs_per_topic
                      << " second-stage runs per topic\n";
            break;
          }
        }

        extrapolate_options xopts;
        xopts.allow_partial = *allow_partial;
        extrapolated_qrels extr = extrapolate_seed(sel, source, *d, xopts);
        if (!extr.excluded.empty())
          std::cerr << "[irsense] warning: excluded " << extr.excluded.size()
                    << " topic(s) with shallow seed rankings\n";
        trec::save_qrels_file(extr.materialize(), *out);

        std::ostringstream side;
        side << "{\n"
             << "  \"family\": \"" << family_label(fam) << "\",\n"
             << "  \"d\": " << *d << ",\n"
             << "  \"rng_seed\": " << *rng_seed << ",\n"
             << "  \"rbc_phi\": " << format_double(*phi) << ",\n"
             << "  \"seed_depth\": " << *seed_depth << ",\n"
             << "  \"fan_out\": " << *fan_out << ",\n"
             << "  \"excluded_topics\": " << extr.excluded.size() << "\n"
             << "}\n";
        write_or_print(side.str(), manifest->empty() ? *out + ".manifest.json" : *manifest);
        return exit_ok;
      };
    });
  }

  // ---- evaluate ----
  {
    auto* cmd = app.add_subcommand("evaluate", "Score a run against qrels");
    auto run_path = std::make_shared<std::string>();
    auto qrels_path = std::make_shared<std::string>();
    auto metrics = std::make_shared<std::vector<std::string>>();
    auto depth_cap = std::make_shared<std::uint32_t>(0);
    auto lenient = std::make_shared<bool>(false);
    auto out = std::make_shared<std::string>();
    auto summary = std::make_shared<std::string>();
    cmd->add_option("--run", *run_path, "Run file")->required();
    cmd->add_option("--qrels", *qrels_path, "Qrels file")->required();
    cmd->add_option("--metric", *metrics, "Metric KIND@k (repeatable; default RR@10 AP@10 NDCG@10)");
    cmd->add_option("--depth-cap", *depth_cap, "Truncate the run on load (0 = no cap)");
    cmd->add_flag("--lenient-qrels", *lenient, "Drop non-positive qrels grades");
    cmd->add_option("--out", *out, "Per-topic scores CSV");
    cmd->add_option("--summary", *summary, "Per-system means CSV");
    cmd->callback([=, &action] {
      action = [=]() {
        trec::run_parse_options ropt;
        if (*depth_cap > 0) ropt.depth_cap = *depth_cap;
        irsense::run r = trec::load_run_file(*run_path, ropt);
        trec::qrels_parse_options qopt;
        qopt.lenient = *lenient;
        qrels q = trec::load_qrels_file(*qrels_path, qopt);
        std::vector<metric_id> ids;
        if (metrics->empty()) {
          ids = {metric_id{metric_kind::rr, 10}, metric_id{metric_kind::ap, 10},
                 metric_id{metric_kind::ndcg, 10}};
        } else {
          for (const auto& m : *metrics) ids.push_back(metric_id::parse(m));
        }
        std::ostringstream scores_csv, means_csv;
        bool first = true;
        for (const auto& m : ids) {
          score_table table = evaluate(r, q, m);
          std::ostringstream one_scores, one_means;
          write_scores_csv(table, one_scores);
          write_means_csv(table, one_means);
          std::string s = one_scores.str(), mn = one_means.str();
          if (!first) {  // drop repeated headers
            s = s.substr(s.find('\n') + 1);
            mn = mn.substr(mn.find('\n') + 1);
          }
          scores_csv << s;
          means_csv << mn;
          std::cout << m.name() << " mean over " << q.judgments.size() << " topics: "
                    << format_double(table.system_mean(r.tag)) << '\n';
          first = false;
        }
        if (!out->empty()) write_or_print(scores_csv.str(), *out);
        if (!summary->empty()) write_or_print(means_csv.str(), *summary);
        return exit_ok;
      };
    });
  }

  // ---- correlate ----
  {
    auto* cmd = app.add_subcommand("correlate", "Kendall's tau between two system orderings");
    auto ref_path = std::make_shared<std::string>();
    auto other_path = std::make_shared<std::string>();
    auto metric = std::make_shared<std::string>();
    auto symmetrize = std::make_shared<bool>(false);
    cmd->add_option("--reference", *ref_path, "Reference means CSV (system,mean or evaluate summary)")
        ->required();
    cmd->add_option("--other", *other_path, "Comparison means CSV")->required();
    cmd->add_option("--metric", *metric, "Metric filter for 4-column summary CSVs, e.g. RR@10");
    cmd->add_flag("--symmetrize", *symmetrize, "Average reference- and other-anchored weighted tau");
    cmd->callback([=, &action] {
      action = [=]() {
        system_ordering reference = rank_systems(read_means_csv(*ref_path, *metric));
        system_ordering other = rank_systems(read_means_csv(*other_path, *metric));
        tau_result unweighted = kendall_tau(reference, other);
        tau_result weighted = weighted_tau(reference, other, *symmetrize);
        std::cout << "n_systems: " << unweighted.n_systems << '\n'
                  << "tau_unweighted: " << format_double(unweighted.tau) << '\n'
                  << "tau_weighted: " << format_double(weighted.tau) << '\n';
        return exit_ok;
      };
    });
  }

  // ---- stats ----
  {
    auto* cmd = app.add_subcommand("stats", "Qrels statistics: topics and label histogram");
    auto qrels_path = std::make_shared<std::string>();
    auto lenient = std::make_shared<bool>(false);
    cmd->add_option("--qrels", *qrels_path, "Qrels file")->required();
    cmd->add_flag("--lenient", *lenient, "Drop non-positive grades");
    cmd->callback([=, &action] {
      action = [=]() {
        trec::qrels_parse_options qopt;
        qopt.lenient = *lenient;
        qrels q = trec::load_qrels_file(*qrels_path, qopt);
        auto stats = trec::qrels_stats(q);
        std::cout << "topics: " << stats.n_topics << '\n';
        for (const auto& [labels, topics] : stats.label_histogram) {
          std::cout << "labels=" << labels << ": " << topics << " topic(s)\n";
        }
        std::cout << "single_label_fraction: " << format_double(stats.single_label_fraction())
                  << '\n';
        return exit_ok;
      };
    });
  }

  // ---- sweep ----
  {
    auto* cmd = app.add_subcommand("sweep", "Run the full extrapolation sweep from a config file");
    auto config_path = std::make_shared<std::string>();
    auto ov = std::make_shared<sweep_overrides>();
    cmd->add_option("--config", *config_path, "Experiment config JSON")->required();
    cmd->add_option("--out", ov->output_dir, "Override output directory");
    cmd->add_option("--d-max", ov->d_max, "Override d_max");
    cmd->add_option("--rng-seed", ov->rng_seed, "Override RNG seed");
    auto* threads_opt = cmd->add_option("--threads", ov->threads, "Override worker threads");
    cmd->add_option("--families", ov->families, "Override families (bm tct fus)")->expected(-1);
    cmd->add_option("--metrics", ov->metrics, "Override metrics (KIND@k)")->expected(-1);
    cmd->callback([=, &action] {
      action = [=]() {
        sweep_overrides o = *ov;
        o.threads_set = threads_opt->count() > 0;
        experiment_config cfg = load_config(*config_path, o);
        sweep_result result = run_sweep(cfg);
        emit_report(result, cfg, cfg.output_dir);
        std::cerr << "[irsense] sweep complete: " << result.cells.size() << " cells over "
                  << result.systems.size() << " systems -> " << cfg.output_dir << '\n';
        return exit_ok;
      };
    });
  }

  // ---- sample ----
  {
    auto* cmd = app.add_subcommand("sample", "Judgment worksheet from the fused seed ranking");
    auto config_path = std::make_shared<std::string>();
    auto n = std::make_shared<std::size_t>(20);
    auto ranks = std::make_shared<std::vector<std::uint32_t>>();
    auto rng_seed = std::make_shared<std::int64_t>(-1);
    auto out = std::make_shared<std::string>();
    auto summarize = std::make_shared<std::string>();
    auto* cfg_opt = cmd->add_option("--config", *config_path, "Experiment config JSON");
    cmd->add_option("--n", *n, "Topics to sample");
    cmd->add_option("--ranks", *ranks, "Fused-ranking ranks to extract (default 1 2 10)")
        ->expected(-1);
    cmd->add_option("--rng-seed", *rng_seed, "Override the config RNG seed");
    cmd->add_option("--out", *out, "Worksheet TSV path (default stdout)");
    auto* sum_opt =
        cmd->add_option("--summarize", *summarize, "Render per-rank fractions from a filled worksheet");
    sum_opt->excludes(cfg_opt);
    cmd->callback([=, &action] {
      action = [=]() {
        if (!summarize->empty()) {
          std::ifstream in(*summarize);
          if (!in) throw data_error("cannot open worksheet: " + *summarize);
          std::cout << summarize_worksheet(in);
          return exit_ok;
        }
        if (config_path->empty()) throw CLI::RequiredError("--config or --summarize");
        experiment_config cfg = experiment_config::from_json_file(*config_path);
        if (*rng_seed >= 0) cfg.rng_seed = static_cast<std::uint64_t>(*rng_seed);
        std::vector<std::uint32_t> want_ranks =
            ranks->empty() ? std::vector<std::uint32_t>{1, 2, 10} : *ranks;
        fused_inputs in = build_fused_from_config(cfg, /*need_topics=*/true);
        auto rows = sample_for_judgment(in.fused, in.gold_sel, in.topics, in.collection, *n,
                                        want_ranks, cfg.rng_seed);
        std::ostringstream tsv;
        write_worksheet(rows, tsv);
        write_or_print(tsv.str(), *out);
        std::cerr << "[irsense] sampled " << rows.size() << " rows\n";
        return exit_ok;
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }

  try {
    return action ? action() : exit_config;
  } catch (const CLI::RequiredError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const data_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return exit_data;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return exit_internal;
  }
}

}  // namespace irsense::cli
