#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace koslinker {

/// Canonical lookup key for a thesaurus label: NFC, case-folded, trimmed,
/// internal whitespace runs collapsed to a single ASCII space.
std::string normalize_label(std::string_view label);

/// Splits text into lowercased maximal runs of Unicode letters/digits that
/// are at least `min_length` code points long, dropping stopwords.
class Tokenizer {
 public:
  Tokenizer() = default;
  explicit Tokenizer(std::unordered_set<std::string> stopwords, std::size_t min_length = 2);

  std::vector<std::string> operator()(std::string_view text) const;

  const std::unordered_set<std::string>& stopwords() const noexcept { return stopwords_; }

 private:
  std::unordered_set<std::string> stopwords_;
  std::size_t min_length_ = 2;
};

/// Tokenizes with an empty stopword list.
std::vector<std::string> tokenize(std::string_view text);

/// One stopword per line; blank lines and lines starting with '#' ignored.
/// Entries are lowercased the same way the tokenizer lowercases tokens.
std::unordered_set<std::string> read_stopwords(std::istream& in);

}  // namespace koslinker
