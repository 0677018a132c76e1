#include "irsense/extrapolate.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <unordered_set>

#include "irsense/parallel.hpp"
#include "irsense/rng.hpp"

namespace irsense {

gold_set select_gold(const qrels& gold, std::uint64_t rng_seed) {
  gold.validate();
  gold_set result;
  for (const auto& [topic, passages] : gold.judgments) {
    gold_set::entry entry;
    entry.members.reserve(passages.size());
    entry.grades = passages;
    for (const auto& [pid, grade] : passages) {
      (void)grade;
      entry.members.push_back(pid);  // map iteration: already ascending
    }
    if (entry.members.size() == 1) {
      entry.designated = entry.members.front();
    } else {
      auto eng = keyed_engine(rng_seed, topic);
      entry.designated = entry.members[bounded_draw(eng, entry.members.size())];
    }
    result.topics.emplace(topic, std::move(entry));
  }
  return result;
}

std::string family_label(seed_family f) {
  switch (f) {
    case seed_family::bm: return "BM";
    case seed_family::tct: return "TCT";
    case seed_family::fus: return "FUS";
  }
  return "BM";
}

seed_family family_from_label(std::string_view s) {
  std::string upper;
  for (char c : s) upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (upper == "BM") return seed_family::bm;
  if (upper == "TCT") return seed_family::tct;
  if (upper == "FUS") return seed_family::fus;
  throw config_error("unknown seed family '" + std::string(s) + "' (expected BM, TCT, or FUS)");
}

seed_source make_bm25_seed(const inverted_index& idx, const passage_collection& coll,
                           const bm25_params& params, const gold_set& gold, std::size_t depth,
                           const searcher_options& opts, unsigned threads) {
  std::vector<const topic_id*> topics;
  std::vector<const passage_id*> seeds;
  topics.reserve(gold.topics.size());
  for (const auto& [topic, entry] : gold.topics) {
    topics.push_back(&topic);
    seeds.push_back(&entry.designated);
  }
  std::vector<ranked_list> lists(topics.size());
  const unsigned workers = worker_count(topics.size(), threads);
  std::vector<std::unique_ptr<searcher>> local(workers);
  for (auto& s : local) s = std::make_unique<searcher>(idx, params, opts);
  parallel_for_workers(topics.size(), threads, [&](unsigned w, std::size_t i) {
    lists[i] = local[w]->query_by_passage(coll, *seeds[i], depth, "bm25-qbp", *topics[i]);
  });

  seed_source source;
  source.kind = seed_family::bm;
  for (std::size_t i = 0; i < topics.size(); ++i) {
    source.rankings.emplace(*topics[i], std::move(lists[i]));
  }
  return source;
}

seed_source make_external_seed(const run& first_stage, const gold_set& gold) {
  std::vector<std::string> missing;
  for (const auto& [topic, entry] : gold.topics) {
    (void)entry;
    if (!first_stage.lists.count(topic)) missing.push_back(topic);
  }
  if (!missing.empty()) {
    std::string msg = "external seed run missing " + std::to_string(missing.size()) + " topic(s):";
    for (std::size_t i = 0; i < missing.size() && i < 10; ++i) msg += " " + missing[i];
    if (missing.size() > 10) msg += " ...";
    throw data_error(msg);
  }
  seed_source source;
  source.kind = seed_family::tct;
  for (const auto& [topic, entry] : gold.topics) {
    (void)entry;
    source.rankings.emplace(topic, first_stage.lists.at(topic));
  }
  return source;
}

std::map<topic_id, std::vector<passage_id>> collect_fan_out_seeds(
    const gold_set& gold, const std::map<topic_id, ranked_list>& first_bm,
    const run& first_external, std::size_t fan_out, bool exclude_gold) {
  if (fan_out < 1) throw config_error("fan_out must be >= 1");
  std::map<topic_id, std::vector<passage_id>> seeds;
  for (const auto& [topic, entry] : gold.topics) {
    auto bm_it = first_bm.find(topic);
    if (bm_it == first_bm.end())
      throw data_error("no first-stage BM25 ranking for topic " + topic);
    auto ext_it = first_external.lists.find(topic);
    if (ext_it == first_external.lists.end())
      throw data_error("external first-stage run missing topic " + topic);

    std::unordered_set<std::string_view> gold_members;
    if (exclude_gold) {
      for (const auto& pid : entry.members) gold_members.insert(pid);
    }
    auto take = [&](const ranked_list& list, std::vector<passage_id>& out) {
      std::size_t taken = 0;
      for (const auto& e : list.entries) {
        if (taken == fan_out) break;
        if (exclude_gold && gold_members.count(e.passage)) continue;
        out.push_back(e.passage);
        ++taken;
      }
      if (taken < fan_out)
        throw data_error("topic " + topic + ": first-stage run '" + list.tag + "' too shallow (" +
                         std::to_string(taken) + " of " + std::to_string(fan_out) +
                         " fan-out seeds)");
    };
    std::vector<passage_id> topic_seeds;
    topic_seeds.reserve(2 * fan_out);
    take(bm_it->second, topic_seeds);
    take(ext_it->second, topic_seeds);
    seeds.emplace(topic, std::move(topic_seeds));
  }
  return seeds;
}

seed_source make_fused_seed(const gold_set& gold, const inverted_index& idx,
                            const passage_collection& coll, const bm25_params& params,
                            const run& first_external, const run* external_second,
                            const fused_seed_options& opts, const searcher_options& search_opts,
                            fused_seed_stats* stats) {
  rbc_params rbc{opts.phi, opts.fused_depth};
  rbc.validate();

  auto first_bm =
      make_bm25_seed(idx, coll, params, gold, opts.rerun_depth, search_opts, opts.threads)
          .rankings;
  auto seeds = collect_fan_out_seeds(gold, first_bm, first_external, opts.fan_out,
                                     opts.exclude_gold_from_fan_out);

  // Validate second-stage coverage up front so the error names every hole.
  if (external_second) {
    std::vector<std::string> missing;
    for (const auto& [topic, topic_seeds] : seeds) {
      for (const auto& pid : topic_seeds) {
        if (!external_second->lists.count(pid)) missing.push_back(topic + "/" + pid);
      }
    }
    if (!missing.empty()) {
      std::string msg = "missing second-stage external runs for " +
                        std::to_string(missing.size()) + " (topic, seed-passage) pair(s):";
      for (std::size_t i = 0; i < missing.size() && i < 10; ++i) msg += " " + missing[i];
      if (missing.size() > 10) msg += " ...";
      throw data_error(msg);
    }
  }

  std::vector<const topic_id*> topics;
  topics.reserve(seeds.size());
  for (const auto& [topic, topic_seeds] : seeds) {
    (void)topic_seeds;
    topics.push_back(&topic);
  }

  std::vector<ranked_list> fused(topics.size());
  const unsigned workers = worker_count(topics.size(), opts.threads);
  std::vector<std::unique_ptr<searcher>> local(workers);
  for (auto& s : local) s = std::make_unique<searcher>(idx, params, search_opts);
  parallel_for_workers(topics.size(), opts.threads, [&](unsigned w, std::size_t i) {
    const topic_id& topic = *topics[i];
    std::vector<ranked_list> second_stage;
    for (const passage_id& seed : seeds.at(topic)) {
      auto bm_run = local[w]->query_by_passage(coll, seed, opts.rerun_depth, "bm25-qbp", topic);
      second_stage.push_back(std::move(bm_run));
      if (external_second) {
        ranked_list ext = external_second->lists.at(seed);
        ext.topic = topic;
        ext.truncate(opts.rerun_depth);
        second_stage.push_back(std::move(ext));
      }
    }
    fused[i] = rbc_fuse(second_stage, rbc, "fused");
  });

  if (stats) {
    stats->fan_out = opts.fan_out;
    stats->second_stage_runs_per_topic = 2 * opts.fan_out * (external_second ? 2 : 1);
    stats->external_second_stage = external_second != nullptr;
  }

  seed_source source;
  source.kind = seed_family::fus;
  for (std::size_t i = 0; i < topics.size(); ++i) {
    source.rankings.emplace(*topics[i], std::move(fused[i]));
  }
  return source;
}

qrels extrapolated_qrels::materialize() const { return materialize(d); }

qrels extrapolated_qrels::materialize(int dd) const {
  if (dd < 0 || dd > d) throw config_error("materialize depth out of range");
  qrels out;
  for (const auto& [topic, added] : additions) {
    auto& judged = out.judgments[topic];
    judged = base.judgments.at(topic);
    for (int i = 0; i < dd; ++i) judged.emplace(added[static_cast<std::size_t>(i)], 1);
  }
  return out;
}

extrapolated_qrels extrapolate_seed(const gold_set& gold, const seed_source& source, int d,
                                    const extrapolate_options& opts) {
  if (d < 0) throw config_error("d must be >= 0");

  extrapolated_qrels result;
  result.family = source.kind;
  result.d = d;
  for (const auto& [topic, entry] : gold.topics) {
    result.base.judgments[topic] = entry.grades;
  }

  std::vector<std::pair<topic_id, std::string>> starved;
  for (const auto& [topic, entry] : gold.topics) {
    auto rit = source.rankings.find(topic);
    if (rit == source.rankings.end()) {
      starved.emplace_back(topic, "no seed ranking");
      continue;
    }
    std::unordered_set<std::string_view> gold_members;
    for (const auto& pid : entry.members) gold_members.insert(pid);

    // Set-difference first, then take the top d, preserving rank order.
    std::vector<passage_id> added;
    added.reserve(static_cast<std::size_t>(d));
    for (const auto& e : rit->second.entries) {
      if (added.size() == static_cast<std::size_t>(d)) break;
      if (gold_members.count(e.passage)) continue;
      added.push_back(e.passage);
    }
    if (added.size() < static_cast<std::size_t>(d)) {
      starved.emplace_back(topic, std::to_string(added.size()) + " of " + std::to_string(d) +
                                      " non-gold entries");
      continue;
    }
    result.additions.emplace(topic, std::move(added));
  }

  if (!starved.empty()) {
    if (!opts.allow_partial) {
      std::string msg =
          "seed ranking too shallow for " + std::to_string(starved.size()) + " topic(s):";
      for (std::size_t i = 0; i < starved.size() && i < 10; ++i)
        msg += " " + starved[i].first + " (" + starved[i].second + ")";
      if (starved.size() > 10) msg += " ...";
      throw data_error(msg);
    }
    for (const auto& [topic, why] : starved) {
      (void)why;
      result.excluded.push_back(topic);
    }
  }
  return result;
}

}  // namespace irsense
