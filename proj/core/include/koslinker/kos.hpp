#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace koslinker {

/// Topic index; class i of a classification is topic i of the model.
using TopicId = std::uint32_t;

inline constexpr int kDefaultMaxLevel = 4;

struct ClassNode {
  std::string code;
  std::string name;
  std::optional<std::string> parent_code;
  int level = 1;
  std::vector<std::string> children;  // input order
};

/// One raw classification row before validation.
struct ClassRecord {
  std::string code;
  std::string name;
  std::string parent;  // empty for a root
  std::size_t line = 0;
};

/// Validated classification forest. Immutable after construction.
///
/// Topic indices are assigned in depth-first preorder over the roots and
/// children in input order, so the same file always yields the same
/// class/topic bijection.
class ClassificationSystem {
 public:
  /// Validates the rows and builds the forest. Throws ParseError (with the
  /// offending row's line) for duplicate codes, missing parents, cycles,
  /// level-bound violations, and empty input.
  static ClassificationSystem build(std::vector<ClassRecord> rows, std::string_view source = "<classification>",
                                    int max_level = kDefaultMaxLevel);

  std::size_t size() const noexcept { return nodes_.size(); }
  int max_level() const noexcept { return max_level_; }

  std::span<const std::string> roots() const noexcept { return roots_; }

  const ClassNode* find(std::string_view code) const;
  const ClassNode& node(std::string_view code) const;
  const ClassNode& node_at(TopicId topic) const { return nodes_.at(topic); }

  std::optional<TopicId> topic_of(std::string_view code) const;
  const std::string& code_of(TopicId topic) const { return nodes_.at(topic).code; }

  /// Codes in topic order.
  std::vector<std::string> codes() const;

  /// Proper ancestors of `topic`, nearest first.
  std::vector<TopicId> ancestors(TopicId topic) const;

 private:
  std::vector<ClassNode> nodes_;  // indexed by topic
  std::unordered_map<std::string, TopicId> index_;
  std::vector<std::string> roots_;
  int max_level_ = kDefaultMaxLevel;
};

/// Reads `code,name,parent` CSV (with header) or JSON lines with the same keys.
/// The format is detected from the first non-blank line.
ClassificationSystem parse_classification(std::istream& in, std::string_view source = "<classification>",
                                          int max_level = kDefaultMaxLevel);
ClassificationSystem load_classification(const std::filesystem::path& path, int max_level = kDefaultMaxLevel);

struct Descriptor {
  std::string id;
  std::string preferred_label;
  std::vector<std::string> alt_labels;
};

/// Descriptors plus a normalized label index covering preferred and alternative
/// (non-descriptor) labels.
class Thesaurus {
 public:
  /// Throws ParseError on duplicate ids, duplicate preferred labels, an alt
  /// label equal to some preferred label, or an alt label claimed twice.
  static Thesaurus build(std::vector<Descriptor> descriptors, std::string_view source = "<thesaurus>",
                         std::span<const std::size_t> lines = {});

  std::span<const Descriptor> descriptors() const noexcept { return descriptors_; }
  std::size_t size() const noexcept { return descriptors_.size(); }

  /// Descriptor id for a preferred or alternative label, after normalization.
  std::optional<std::string> resolve(std::string_view label) const;

  const Descriptor* find(std::string_view id) const;

 private:
  std::vector<Descriptor> descriptors_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::unordered_map<std::string, std::size_t> label_index_;  // normalized label -> descriptor position
};

/// JSON lines: {"id": ..., "label": ..., "alt": [...]}.
Thesaurus parse_thesaurus(std::istream& in, std::string_view source = "<thesaurus>");
Thesaurus load_thesaurus(const std::filesystem::path& path);

inline std::optional<std::string> resolve_label(const Thesaurus& thesaurus, std::string_view label) {
  return thesaurus.resolve(label);
}

}  // namespace koslinker
