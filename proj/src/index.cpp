#include "irsense/index.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace irsense {

namespace {

constexpr char kMagic[8] = {'I', 'R', 'S', 'N', 'I', 'D', 'X', '\0'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& out, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <class T>
T get(std::istream& in) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw data_error("truncated index file");
  return v;
}

void put_string(std::ostream& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in) {
  auto len = get<std::uint32_t>(in);
  std::string s(len, '\0');
  in.read(s.data(), len);
  if (!in) throw data_error("truncated index file");
  return s;
}

}  // namespace

inverted_index inverted_index::build(const passage_collection& coll,
                                     const tokenizer_config& cfg) {
  if (coll.entries.empty()) throw data_error("cannot index an empty collection");
  if (coll.entries.size() > std::numeric_limits<std::int32_t>::max())
    throw data_error("collection too large for 32-bit document ids");

  inverted_index idx;
  idx.cfg_ = cfg;
  idx.doc_ids_.reserve(coll.entries.size());
  for (const auto& [id, text] : coll.entries) {
    (void)text;
    idx.doc_ids_.push_back(id);
  }
  std::sort(idx.doc_ids_.begin(), idx.doc_ids_.end());

  idx.dense_.reserve(idx.doc_ids_.size());
  idx.doc_lengths_.resize(idx.doc_ids_.size());
  for (std::uint32_t d = 0; d < idx.doc_ids_.size(); ++d) {
    idx.dense_.emplace(idx.doc_ids_[d], d);
  }

  // Documents are processed in dense-id order, so each posting list comes out
  // sorted without a separate pass.
  std::unordered_map<std::string, std::uint32_t> tf_counts;
  for (std::uint32_t d = 0; d < idx.doc_ids_.size(); ++d) {
    const std::string& text = coll.entries.at(idx.doc_ids_[d]);
    auto tokens = tokenize(text, cfg);
    idx.doc_lengths_[d] = static_cast<std::uint32_t>(tokens.size());
    idx.total_tokens_ += tokens.size();
    tf_counts.clear();
    for (auto& tok : tokens) tf_counts[std::move(tok)] += 1;
    for (const auto& [term, tf] : tf_counts) {
      auto& plist = idx.postings_[term];
      plist.docs.push_back(d);
      plist.tfs.push_back(tf);
    }
  }
  idx.avg_doc_length_ =
      static_cast<double>(idx.total_tokens_) / static_cast<double>(idx.doc_ids_.size());
  return idx;
}

std::optional<std::uint32_t> inverted_index::dense_id(const passage_id& id) const {
  auto it = dense_.find(id);
  if (it == dense_.end()) return std::nullopt;
  return it->second;
}

const posting_list* inverted_index::postings(const std::string& term) const {
  auto it = postings_.find(term);
  return it == postings_.end() ? nullptr : &it->second;
}

std::vector<std::pair<passage_id, std::uint32_t>> inverted_index::term_postings(
    const std::string& term) const {
  std::vector<std::pair<passage_id, std::uint32_t>> out;
  const posting_list* plist = postings(term);
  if (!plist) return out;
  out.reserve(plist->size());
  for (std::size_t i = 0; i < plist->size(); ++i) {
    out.emplace_back(doc_ids_[plist->docs[i]], plist->tfs[i]);
  }
  return out;
}

void inverted_index::save(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<std::uint8_t>(out, cfg_.stem ? 1 : 0);
  put<std::uint64_t>(out, doc_ids_.size());
  put<std::uint64_t>(out, total_tokens_);
  for (std::size_t d = 0; d < doc_ids_.size(); ++d) {
    put_string(out, doc_ids_[d]);
    put<std::uint32_t>(out, doc_lengths_[d]);
  }
  // Terms sorted for byte-stable output.
  std::vector<const std::string*> terms;
  terms.reserve(postings_.size());
  for (const auto& [term, plist] : postings_) {
    (void)plist;
    terms.push_back(&term);
  }
  std::sort(terms.begin(), terms.end(), [](const auto* a, const auto* b) { return *a < *b; });
  put<std::uint64_t>(out, terms.size());
  for (const auto* term : terms) {
    const posting_list& plist = postings_.at(*term);
    put_string(out, *term);
    put<std::uint64_t>(out, plist.size());
    out.write(reinterpret_cast<const char*>(plist.docs.data()),
              static_cast<std::streamsize>(plist.docs.size() * sizeof(std::uint32_t)));
    out.write(reinterpret_cast<const char*>(plist.tfs.data()),
              static_cast<std::streamsize>(plist.tfs.size() * sizeof(std::uint32_t)));
  }
}

void inverted_index::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write index file: " + path);
  save(out);
  if (!out) throw data_error("failed writing index file: " + path);
}

inverted_index inverted_index::load(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw data_error("not an index file (bad magic bytes)");
  auto version = get<std::uint32_t>(in);
  if (version != kVersion)
    throw data_error("unsupported index version " + std::to_string(version) + " (expected " +
                     std::to_string(kVersion) + ")");

  inverted_index idx;
  idx.cfg_.stem = get<std::uint8_t>(in) != 0;
  auto n_docs = get<std::uint64_t>(in);
  idx.total_tokens_ = get<std::uint64_t>(in);
  idx.doc_ids_.reserve(n_docs);
  idx.doc_lengths_.reserve(n_docs);
  for (std::uint64_t d = 0; d < n_docs; ++d) {
    idx.doc_ids_.push_back(get_string(in));
    idx.doc_lengths_.push_back(get<std::uint32_t>(in));
  }
  idx.dense_.reserve(n_docs);
  for (std::uint32_t d = 0; d < idx.doc_ids_.size(); ++d) idx.dense_.emplace(idx.doc_ids_[d], d);
  if (n_docs == 0) throw data_error("index contains no documents");
  idx.avg_doc_length_ = static_cast<double>(idx.total_tokens_) / static_cast<double>(n_docs);

  auto n_terms = get<std::uint64_t>(in);
  idx.postings_.reserve(n_terms);
  for (std::uint64_t t = 0; t < n_terms; ++t) {
    std::string term = get_string(in);
    auto n_postings = get<std::uint64_t>(in);
    posting_list plist;
    plist.docs.resize(n_postings);
    plist.tfs.resize(n_postings);
    in.read(reinterpret_cast<char*>(plist.docs.data()),
            static_cast<std::streamsize>(n_postings * sizeof(std::uint32_t)));
    in.read(reinterpret_cast<char*>(plist.tfs.data()),
            static_cast<std::streamsize>(n_postings * sizeof(std::uint32_t)));
    if (!in) throw data_error("truncated index file");
    idx.postings_.emplace(std::move(term), std::move(plist));
  }
  return idx;
}

inverted_index inverted_index::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open index file: " + path);
  try {
    return load(in);
  } catch (const data_error& e) {
    throw data_error(path + ": " + e.what());
  }
}

}  // namespace irsense
