#pragma once

#include <cstdint>
#include <vector>

#include "koslinker/corpus.hpp"

namespace koslinker {

/// Parameters of a corpus drawn from the labeled two-language generative
/// process with known topic-term distributions.
struct SyntheticSpec {
  std::size_t num_topics = 10;
  std::size_t word_vocab = 500;
  std::size_t descriptor_vocab = 200;
  std::size_t docs = 2000;
  std::size_t words_per_doc = 50;
  std::size_t descriptors_per_doc = 10;
  std::size_t labels_per_doc = 2;
  /// Symmetric Dirichlet concentration of the planted topic-term rows.
  double concentration = 0.05;
  /// Symmetric Dirichlet concentration of each document's mixture over its labels.
  double mixture_concentration = 1.0;
  /// Topics never drawn as labels (classes without training documents).
  std::vector<TopicId> empty_topics;
  std::uint64_t seed = 1;

  /// Throws ValidationError.
  void validate() const;
};

struct SyntheticCorpus {
  Corpus corpus;
  /// planted[l][k] is topic k's distribution over language l's vocabulary.
  std::vector<std::vector<double>> planted[kNumLanguages];
};

/// Terms are "w0000".., descriptor ids "d000".., topic codes "T00"..; every
/// vocabulary index equals the planted index. Deterministic under the seed.
SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

}  // namespace koslinker
