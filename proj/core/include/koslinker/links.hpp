#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "koslinker/kos.hpp"
#include "koslinker/plltm.hpp"

namespace koslinker {

struct RankedDescriptor {
  std::string label;
  double p = 0.0;

  friend bool operator==(const RankedDescriptor&, const RankedDescriptor&) = default;
};

struct ClassLinks {
  std::string code;
  TopicId topic = 0;
  std::vector<RankedDescriptor> descriptors;  // descending p, at most top_k
  std::uint64_t support = 0;
  bool low_support = false;
};

struct LinkOptions {
  std::size_t top_k = 5;
  /// Topics with fewer descriptor tokens than this at the final state are
  /// flagged instead of ranked.
  std::uint64_t min_support = 10;
};

/// Indices of the `k` largest entries in descending order; ties go to the
/// lower index.
std::vector<TermId> top_indices(std::span<const double> values, std::size_t k);

/// Throws ValidationError if the model's topics do not match the
/// classification's classes (count, then codes).
void check_compatible(const TrainedModel& model, const ClassificationSystem& classification);

/// Per class, the top_k entries of its descriptor-language phi row mapped to
/// preferred labels. Probabilities are the phi entries themselves.
std::vector<ClassLinks> extract_links(const TrainedModel& model, const ClassificationSystem& classification,
                                      const Thesaurus& thesaurus, const LinkOptions& options = {});

/// Top-k of the uniform mixture of the chosen classes' descriptor rows.
/// Throws ValidationError for an empty or out-of-range class set.
std::vector<RankedDescriptor> suggest_descriptors(const TrainedModel& model, const Thesaurus& thesaurus,
                                                  std::span<const TopicId> classes, std::size_t k);

inline constexpr std::string_view kSyntheticRootCode = "ROOT";

struct LinkNode {
  std::string code;
  std::string name;
  int level = 0;
  bool low_support = false;
  std::vector<RankedDescriptor> descriptors;
  /// Not part of the interchange format; 0 after parsing.
  std::uint64_t support = 0;
  std::vector<LinkNode> children;

  std::size_t node_count() const;
};

/// The classification forest decorated with links. A forest with more than
/// one root hangs under a synthetic ROOT node at level 0.
LinkNode build_link_tree(const ClassificationSystem& classification, std::span<const ClassLinks> links);

/// Probabilities rounded to 6 significant digits.
double round_probability(double p);

/// Writes the link-tree JSON document: keys code, name, level, low_support,
/// descriptors, children in that order. Output is byte-deterministic.
void export_tree(const LinkNode& tree, std::ostream& out);
std::string export_tree(const LinkNode& tree);
void export_tree_file(const LinkNode& tree, const std::filesystem::path& path);

LinkNode parse_tree(std::string_view document, std::string_view source = "<tree>");
LinkNode load_tree_file(const std::filesystem::path& path);

/// Descriptor list as served by the suggestion endpoint: {"descriptors":[...]}.
std::string descriptors_json(std::span<const RankedDescriptor> descriptors);

}  // namespace koslinker
