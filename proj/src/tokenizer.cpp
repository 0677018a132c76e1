#include "irsense/tokenizer.hpp"

namespace irsense {

namespace {

inline bool is_word_byte(unsigned char c) {
  if (c >= 0x80) return true;
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

inline char lower_ascii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline bool ends_with(const std::string& w, std::string_view suffix) {
  return w.size() >= suffix.size() &&
         w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::string s_stem(std::string word) {
  if (word.size() < 3 || word.back() != 's') return word;
  if (word.size() >= 4 && ends_with(word, "ies")) {
    if (!ends_with(word, "eies") && !ends_with(word, "aies")) {
      word.replace(word.size() - 3, 3, "y");
    }
    return word;
  }
  if (ends_with(word, "es")) {
    if (!ends_with(word, "aes") && !ends_with(word, "ees") && !ends_with(word, "oes")) {
      word.pop_back();
    }
    return word;
  }
  if (!ends_with(word, "us") && !ends_with(word, "ss")) {
    word.pop_back();
  }
  return word;
}

std::vector<std::string> tokenize(std::string_view text, const tokenizer_config& cfg) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&]() {
    if (current.empty()) return;
    tokens.push_back(cfg.stem ? s_stem(std::move(current)) : std::move(current));
    current.clear();
  };
  for (char ch : text) {
    if (is_word_byte(static_cast<unsigned char>(ch))) {
      current.push_back(lower_ascii(ch));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

}  // namespace irsense
