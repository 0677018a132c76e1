#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace irsense {

struct tokenizer_config {
  bool stem = true;

  bool operator==(const tokenizer_config&) const = default;
};

// Harman "s" stemmer: ies->y, es->e, trailing s dropped, with the usual
// exception lists. Idempotent, which the tokenizer round-trip relies on.
std::string s_stem(std::string word);

// Lowercases ASCII and splits on non-alphanumeric boundaries. Bytes >= 0x80
// are kept as word characters so multi-byte UTF-8 sequences stay intact.
std::vector<std::string> tokenize(std::string_view text, const tokenizer_config& cfg = {});

}  // namespace irsense
