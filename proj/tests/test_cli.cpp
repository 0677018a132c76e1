#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "irsense/cli.hpp"
#include "irsense/pipeline.hpp"
#include "irsense/trec_io.hpp"
#include "support/synthetic.hpp"

using namespace irsense;
namespace fs = std::filesystem;

namespace {

int run_cli(std::vector<std::string> args) {
  std::vector<const char*> argv;
  argv.push_back("irsense");
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

struct temp_dir {
  fs::path path;
  explicit temp_dir(const std::string& stem) {
    path = fs::temp_directory_path() / (stem + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~temp_dir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("usage errors exit with the config code") {
  CHECK(run_cli({"no-such-command"}) == cli::exit_config);
  CHECK(run_cli({}) == cli::exit_config);
  CHECK(run_cli({"index"}) == cli::exit_config);  // missing required flags
  CHECK(run_cli({"--help"}) == cli::exit_ok);
}

TEST_CASE("missing and malformed files exit with the data code") {
  temp_dir tmp("irsense-cli-err");
  CHECK(run_cli({"stats", "--qrels", tmp.file("missing.qrels")}) == cli::exit_data);
  {
    std::ofstream out(tmp.file("bad.qrels"));
    out << "q1 0 d1 notagrade\n";
  }
  CHECK(run_cli({"stats", "--qrels", tmp.file("bad.qrels")}) == cli::exit_data);
  {
    std::ofstream out(tmp.file("zero.qrels"));
    out << "q1 0 d1 0\n";
  }
  CHECK(run_cli({"stats", "--qrels", tmp.file("zero.qrels")}) == cli::exit_data);
  CHECK(run_cli({"stats", "--qrels", tmp.file("zero.qrels"), "--lenient"}) == cli::exit_data);
}

TEST_CASE("full command-line workflow on the synthetic dataset") {
  temp_dir tmp("irsense-cli-flow");
  synth::dataset_params params;
  params.n_passages = 80;
  params.n_topics = 10;
  params.n_systems = 4;
  auto ds = synth::make_dataset(params);
  auto files = synth::write_dataset(ds, tmp.path / "data");

  const std::string index_path = tmp.file("idx.bin");
  CHECK(run_cli({"index", "--collection", files.collection, "--out", index_path}) == cli::exit_ok);

  const std::string run_path = tmp.file("bm25.run");
  CHECK(run_cli({"search", "--index", index_path, "--topics", files.topics, "--depth", "10",
                 "--tag", "bm25full", "--out", run_path}) == cli::exit_ok);
  run bm_run = trec::load_run_file(run_path);
  CHECK(bm_run.tag == "bm25full");
  CHECK(!bm_run.lists.empty());

  const std::string qbp_path = tmp.file("qbp.run");
  CHECK(run_cli({"qbp", "--index", index_path, "--collection", files.collection, "--qrels",
                 files.gold, "--rng-seed", "42", "--depth", "50", "--out", qbp_path,
                 "--gold-out", tmp.file("gold_sel.tsv")}) == cli::exit_ok);
  run qbp_run = trec::load_run_file(qbp_path);
  CHECK(qbp_run.lists.size() == ds.gold.judgments.size());
  CHECK(slurp(tmp.file("gold_sel.tsv")).find('\t') != std::string::npos);

  // qbp keyed by passage id
  {
    std::ofstream out(tmp.file("seed_ids.txt"));
    out << "p000\np001\n";
  }
  const std::string qbp2_path = tmp.file("qbp2.run");
  CHECK(run_cli({"qbp", "--index", index_path, "--collection", files.collection, "--passages",
                 tmp.file("seed_ids.txt"), "--depth", "20", "--out", qbp2_path}) == cli::exit_ok);
  CHECK(trec::load_run_file(qbp2_path).lists.count("p000") == 1);

  const std::string fused_path = tmp.file("fused.run");
  CHECK(run_cli({"fuse", "--inputs", qbp_path, files.external_first, "--phi", "0.9", "--depth",
                 "30", "--out", fused_path}) == cli::exit_ok);
  run fused = trec::load_run_file(fused_path);
  CHECK(!fused.lists.empty());
  for (const auto& [topic, list] : fused.lists) {
    (void)topic;
    CHECK(list.entries.size() <= 30);
  }

  const std::string extr_path = tmp.file("extr.qrels");
  CHECK(run_cli({"extrapolate", "--gold", files.gold, "--family", "bm", "-d", "3", "--index",
                 index_path, "--collection", files.collection, "--seed-depth", "50",
                 "--rng-seed", "42", "--out", extr_path}) == cli::exit_ok);
  qrels extr = trec::load_qrels_file(extr_path);
  qrels gold = trec::load_qrels_file(files.gold);
  for (const auto& [topic, judged] : extr.judgments) {
    CHECK(judged.size() == gold.judgments.at(topic).size() + 3);
  }
  CHECK(fs::exists(extr_path + ".manifest.json"));

  // extrapolate with the fused family, listing seeds first
  CHECK(run_cli({"extrapolate", "--gold", files.gold, "--family", "fus", "-d", "2", "--index",
                 index_path, "--collection", files.collection, "--external-first",
                 files.external_first, "--external-second", files.external_second, "--fan-out",
                 "2", "--rerun-depth", "40", "--fused-depth", "40", "--rng-seed", "42",
                 "--list-seeds", tmp.file("seeds.txt"), "--out", tmp.file("unused.qrels")}) ==
        cli::exit_ok);
  CHECK(!slurp(tmp.file("seeds.txt")).empty());
  CHECK(run_cli({"extrapolate", "--gold", files.gold, "--family", "fus", "-d", "2", "--index",
                 index_path, "--collection", files.collection, "--external-first",
                 files.external_first, "--external-second", files.external_second, "--fan-out",
                 "2", "--rerun-depth", "40", "--fused-depth", "40", "--rng-seed", "42", "--out",
                 tmp.file("fus.qrels")}) == cli::exit_ok);

  const std::string scores_csv = tmp.file("scores.csv");
  const std::string means_csv = tmp.file("means.csv");
  CHECK(run_cli({"evaluate", "--run", run_path, "--qrels", files.gold, "--metric", "RR@10",
                 "--metric", "NDCG@10", "--out", scores_csv, "--summary", means_csv}) ==
        cli::exit_ok);
  CHECK(slurp(scores_csv).starts_with("system,topic,metric,k,score\n"));
  CHECK(slurp(means_csv).starts_with("system,metric,k,mean\n"));

  // correlate the run against itself: tau must be 1
  {
    std::ofstream out(tmp.file("two.csv"));
    out << "system,mean\na,0.9\nb,0.5\n";
    std::ofstream out2(tmp.file("two_rev.csv"));
    out2 << "system,mean\na,0.1\nb,0.5\n";
  }
  CHECK(run_cli({"correlate", "--reference", tmp.file("two.csv"), "--other",
                 tmp.file("two.csv")}) == cli::exit_ok);
  CHECK(run_cli({"correlate", "--reference", tmp.file("two.csv"), "--other",
                 tmp.file("two_rev.csv"), "--symmetrize"}) == cli::exit_ok);

  CHECK(run_cli({"stats", "--qrels", files.gold}) == cli::exit_ok);

  // sweep + sample from a config file
  experiment_config cfg;
  cfg.collection_path = files.collection;
  cfg.topics_path = files.topics;
  cfg.gold_qrels_path = files.gold;
  cfg.runs_dir = files.runs_dir;
  cfg.external_first_stage = files.external_first;
  cfg.external_second_stage = files.external_second;
  cfg.output_dir = tmp.file("out");
  cfg.metrics = {metric_id{metric_kind::rr, 10}};
  cfg.families = {seed_family::bm, seed_family::fus};
  cfg.d_max = 3;
  cfg.seed_depth = 50;
  cfg.fused_depth = 50;
  cfg.fan_out = 2;
  cfg.rng_seed = params.rng_seed;
  cfg.threads = 2;
  {
    std::ofstream out(tmp.file("config.json"));
    out << cfg.to_json_string();
  }
  CHECK(run_cli({"sweep", "--config", tmp.file("config.json")}) == cli::exit_ok);
  CHECK(slurp(tmp.file("out/scores.csv")).starts_with("family,metric,d,mean\n"));
  CHECK(slurp(tmp.file("out/tau.csv"))
            .starts_with("family,metric,d,tau_unweighted,tau_weighted\n"));

  const std::string sheet = tmp.file("worksheet.tsv");
  CHECK(run_cli({"sample", "--config", tmp.file("config.json"), "--n", "5", "--ranks", "1", "2",
                 "10", "--out", sheet}) == cli::exit_ok);
  const std::string tsv = slurp(sheet);
  CHECK(std::count(tsv.begin(), tsv.end(), '\n') == 16);  // header + 5*3 rows
  CHECK(run_cli({"sample", "--summarize", sheet}) == cli::exit_ok);

  // overriding families from the command line
  CHECK(run_cli({"sweep", "--config", tmp.file("config.json"), "--out", tmp.file("out2"),
                 "--families", "tct", "--d-max", "2"}) == cli::exit_ok);
  CHECK(slurp(tmp.file("out2/scores.csv")).find("TCT") != std::string::npos);

  // config validation propagates as exit code 2
  {
    std::ofstream out(tmp.file("bad_config.json"));
    out << "{\"families\": []}";
  }
  CHECK(run_cli({"sweep", "--config", tmp.file("bad_config.json")}) == cli::exit_config);
}
