#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "koslinker/kos.hpp"
#include "koslinker/text.hpp"

namespace koslinker {

using TermId = std::uint32_t;

/// The two observation languages of the model.
enum class Language : std::uint8_t { words = 0, descriptors = 1 };
inline constexpr std::size_t kNumLanguages = 2;
inline constexpr std::size_t index_of(Language l) noexcept { return static_cast<std::size_t>(l); }
inline constexpr Language kLanguages[kNumLanguages] = {Language::words, Language::descriptors};
std::string_view to_string(Language l) noexcept;

/// Bijection between terms and [0, size()).
class Vocabulary {
 public:
  Vocabulary() = default;
  /// Throws ValidationError on duplicate terms.
  static Vocabulary from_terms(std::vector<std::string> terms);

  TermId add(std::string_view term);
  std::optional<TermId> find(std::string_view term) const;
  const std::string& term(TermId id) const { return terms_.at(id); }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.terms_ == b.terms_; }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, TermId> index_;
};

struct Document {
  std::string id;
  std::vector<TermId> words;
  std::vector<TermId> descriptors;
  std::vector<TopicId> labels;  // sorted, unique

  const std::vector<TermId>& tokens(Language l) const { return l == Language::words ? words : descriptors; }
  std::size_t size() const noexcept { return words.size() + descriptors.size(); }

  friend bool operator==(const Document&, const Document&) = default;
};

struct TokenTally {
  std::uint64_t raw = 0;
  std::uint64_t encoded = 0;
  std::uint64_t dropped = 0;

  friend bool operator==(const TokenTally&, const TokenTally&) = default;
};

/// Admission bookkeeping. For each language raw == encoded + dropped.
struct IngestReport {
  std::uint64_t docs_read = 0;
  std::uint64_t docs_admitted = 0;
  std::uint64_t docs_dropped = 0;
  std::uint64_t dropped_no_labels = 0;
  std::uint64_t dropped_no_tokens = 0;
  std::uint64_t unknown_class_codes = 0;
  std::uint64_t unresolved_descriptors = 0;
  TokenTally words;
  TokenTally descriptors;

  TokenTally& tally(Language l) { return l == Language::words ? words : descriptors; }
  const TokenTally& tally(Language l) const { return l == Language::words ? words : descriptors; }

  friend bool operator==(const IngestReport&, const IngestReport&) = default;
};

struct Corpus {
  std::vector<Document> documents;
  Vocabulary words;
  Vocabulary descriptors;  // descriptor ids
  std::size_t num_topics = 0;
  std::vector<std::string> topic_codes;  // class code per topic, size num_topics
  IngestReport report;

  const Vocabulary& vocabulary(Language l) const { return l == Language::words ? words : descriptors; }
  std::uint64_t token_count(Language l) const;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

enum class UnknownPolicy { skip, strict };

struct IngestOptions {
  UnknownPolicy policy = UnknownPolicy::skip;
  Tokenizer tokenizer;
  std::size_t min_df = 5;
  double max_df_ratio = 0.5;
  /// Adds every ancestor class of an assigned class to the label set.
  bool propagate_labels = false;
};

/// Reads documents as JSON lines ({"id", "abstract", "descriptors", "classes"}),
/// maps classes to topics and descriptors to descriptor ids through the
/// thesaurus, tokenizes abstracts, then prunes the word vocabulary.
///
/// Under UnknownPolicy::strict an unknown class code or unresolvable
/// descriptor raises ParseError naming the document id and line.
Corpus ingest(std::istream& documents, std::string_view source, const ClassificationSystem& classification,
              const Thesaurus& thesaurus, const IngestOptions& options = {});
Corpus ingest_file(const std::filesystem::path& documents, const ClassificationSystem& classification,
                   const Thesaurus& thesaurus, const IngestOptions& options = {});

/// Keeps words whose document frequency lies in [min_df, max_df_ratio * D].
/// Descriptors are never pruned. Documents left with no tokens in either
/// language are dropped. Throws ValidationError if no document keeps a word.
Corpus prune_vocabulary(const Corpus& corpus, std::size_t min_df, double max_df_ratio);

void save_corpus(const Corpus& corpus, std::ostream& out);
Corpus load_corpus(std::istream& in, std::string_view source = "<corpus>");
void save_corpus_file(const Corpus& corpus, const std::filesystem::path& path);
Corpus load_corpus_file(const std::filesystem::path& path);

/// Renders a corpus as a documents file: abstract text is the word terms
/// joined by spaces, descriptors are preferred labels when a thesaurus is
/// given (ids otherwise). Used to materialize synthetic corpora as inputs.
void write_documents_jsonl(const Corpus& corpus, std::ostream& out, const Thesaurus* thesaurus = nullptr);

}  // namespace koslinker
