#pragma once

// Polylingual labeled topic model trained by collapsed Gibbs sampling.
//
// Every class of the classification is one topic. A document's tokens in both
// languages (abstract words and thesaurus descriptors) share one per-document
// topic count, and their topics are restricted to the document's labels. Each
// topic has its own term distribution per language.
//
// Full conditional of a token of term v in language l of document d, with the
// token's own assignment removed from every count:
//
//   p(z = k | rest) ∝ (n_dk + alpha) * (n_kv^l + beta_l) / (n_k^l + V_l * beta_l),  k ∈ labels(d)
//
// and zero for k outside labels(d).

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "koslinker/corpus.hpp"

namespace koslinker {

using Count = std::int32_t;

struct Hyperparameters {
  double alpha = 0.1;
  double beta_words = 0.01;
  double beta_desc = 0.01;
  int iterations = 1000;
  int burn_in = 500;
  int sample_lag = 10;
  std::uint64_t seed = 42;

  double beta(Language l) const noexcept { return l == Language::words ? beta_words : beta_desc; }

  /// Throws ValidationError unless 0 < burn_in < iterations, sample_lag >= 1
  /// and all concentrations are finite and positive.
  void validate() const;

  friend bool operator==(const Hyperparameters&, const Hyperparameters&) = default;
};

/// Portable generator: the mt19937_64 output sequence is fixed by the
/// standard, and the conversions below avoid implementation-defined
/// distributions.
using Rng = std::mt19937_64;
inline constexpr std::string_view kRngName = "mt19937_64";

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Draws an index with probability proportional to `weights` (not all zero).
std::size_t sample_discrete(Rng& rng, std::span<const double> weights);

/// Dense row-major topic x term count matrix.
class CountMatrix {
 public:
  CountMatrix() = default;
  CountMatrix(std::size_t rows, std::size_t cols) : cols_(cols), data_(rows * cols, 0) {}

  Count& operator()(std::size_t row, std::size_t col) { return data_[row * cols_ + col]; }
  Count operator()(std::size_t row, std::size_t col) const { return data_[row * cols_ + col]; }
  std::span<const Count> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::size_t rows() const noexcept { return cols_ == 0 ? 0 : data_.size() / cols_; }
  std::size_t cols() const noexcept { return cols_; }

  friend bool operator==(const CountMatrix&, const CountMatrix&) = default;

 private:
  std::size_t cols_ = 0;
  std::vector<Count> data_;
};

/// Sufficient statistics implied by a set of assignments.
struct TopicCounts {
  /// doc_topic[d][i] counts tokens of d (both languages) on labels(d)[i].
  std::vector<std::vector<Count>> doc_topic;
  std::array<CountMatrix, kNumLanguages> topic_term;
  std::array<std::vector<Count>, kNumLanguages> topic_total;

  /// n_dk for an arbitrary topic (0 outside the label set).
  Count doc_count(const Document& doc, std::size_t d, TopicId k) const;

  friend bool operator==(const TopicCounts&, const TopicCounts&) = default;
};

/// assignments[d][l][i] is the topic of token i of language l in document d.
using Assignments = std::vector<std::array<std::vector<TopicId>, kNumLanguages>>;

/// Mutable chain state. Refers to (does not own) the corpus it was built from;
/// the corpus must outlive the state.
struct ModelState {
  const Corpus* corpus = nullptr;
  Hyperparameters hyper;
  Assignments z;
  TopicCounts counts;
  std::array<std::vector<double>, kNumLanguages> phi_accum;  // K x V_l, row-major
  std::size_t accum_count = 0;
  Rng rng;
};

/// Tallies assignments from scratch.
TopicCounts recount(const Corpus& corpus, const Assignments& z);

/// Builds a state from explicit assignments (validated against the labels).
/// The generator is seeded from hyper.seed.
ModelState state_from_assignments(const Corpus& corpus, const Hyperparameters& hyper, Assignments z);

/// Every token gets a topic drawn uniformly from its document's labels.
/// Throws ValidationError for a document with no labels or out-of-range ids.
ModelState initialize(const Corpus& corpus, const Hyperparameters& hyper);

/// Full conditional over labels(d) for token `pos` of language `l` in document
/// `d`, computed with that token's current assignment excluded from the counts.
/// Entry i corresponds to labels(d)[i].
std::vector<double> conditional_distribution(const ModelState& state, std::size_t d, Language l, std::size_t pos);

/// Resamples every token once, documents in order, words before descriptors,
/// positions ascending.
void gibbs_sweep(ModelState& state);

/// Collapsed joint log p(w, z | alpha, beta) with the document mixtures
/// restricted to each document's labels.
double log_likelihood(const ModelState& state);

/// (n_dk + alpha) / (N_d + |labels(d)| alpha) on labels(d), zero elsewhere.
std::vector<double> estimate_theta(const ModelState& state, std::size_t d);

/// Adds the smoothed estimate (n_kv + beta) / (n_k + V beta) to phi_accum.
void accumulate_phi(ModelState& state);

struct TrainedModel {
  std::size_t num_topics = 0;
  std::vector<std::string> topic_codes;
  std::array<Vocabulary, kNumLanguages> vocab;
  /// phi[l] is K x V_l row-major; every row sums to 1.
  std::array<std::vector<double>, kNumLanguages> phi;
  /// Tokens assigned to each topic per language at the final state.
  std::array<std::vector<std::uint64_t>, kNumLanguages> support;
  Hyperparameters hyper;
  std::string rng_name{kRngName};
  std::size_t samples = 0;
  std::vector<double> log_likelihood;

  std::size_t vocab_size(Language l) const { return vocab[index_of(l)].size(); }
  std::span<const double> phi_row(Language l, TopicId k) const {
    const auto v = vocab_size(l);
    return {phi[index_of(l)].data() + k * v, v};
  }

  friend bool operator==(const TrainedModel&, const TrainedModel&) = default;
};

/// Called after every sweep with the 1-based sweep number and log-likelihood.
using TrainingObserver = std::function<void(int sweep, double log_likelihood)>;

/// initialize + `iterations` sweeps. After burn_in, every sample_lag-th sweep
/// contributes a smoothed phi estimate; phi is their mean (or the final
/// state's estimate if no sweep was retained). Throws Error on a non-finite
/// log-likelihood.
TrainedModel train(const Corpus& corpus, const Hyperparameters& hyper, const TrainingObserver& observer = {});

/// Converts a chain state to a model using its accumulated phi.
TrainedModel finalize_model(const ModelState& state);

}  // namespace koslinker
