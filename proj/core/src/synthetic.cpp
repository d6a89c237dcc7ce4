#include "koslinker/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include "koslinker/error.hpp"
#include "koslinker/plltm.hpp"

namespace koslinker {
namespace {

std::string numbered(char prefix, std::size_t i, std::size_t n) {
  int width = 1;
  for (auto m = n > 0 ? n - 1 : 0; m >= 10; m /= 10) ++width;
  width = std::max(width, 2);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, i);
  return buf;
}

// Uniform in (0, 1).
double open_uniform(Rng& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }

// Symmetric Dirichlet draw. Small concentrations go through
// Gamma(a) = Gamma(a + 1) * U^(1/a) in log space so that rows stay finite and
// normalizable however sparse they are.
std::vector<double> dirichlet(Rng& rng, double a, std::size_t n) {
  std::gamma_distribution<double> gamma(a < 1.0 ? a + 1.0 : a, 1.0);
  std::vector<double> out(n);
  if (a >= 1.0) {
    double sum = 0.0;
    for (auto& x : out) sum += (x = gamma(rng));
    for (auto& x : out) x /= sum;
    return out;
  }
  double max_log = -INFINITY;
  for (auto& x : out) {
    x = std::log(gamma(rng)) + std::log(open_uniform(rng)) / a;
    max_log = std::max(max_log, x);
  }
  double sum = 0.0;
  for (auto& x : out) sum += (x = std::exp(x - max_log));
  for (auto& x : out) x /= sum;
  return out;
}

class CumulativeTable {
 public:
  explicit CumulativeTable(std::span<const double> p) : cdf_(p.size()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) cdf_[i] = (acc += p[i]);
  }

  std::size_t sample(Rng& rng) const {
    const double u = uniform01(rng) * cdf_.back();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

}  // namespace

void SyntheticSpec::validate() const {
  if (num_topics == 0 || word_vocab == 0 || descriptor_vocab == 0 || docs == 0 || words_per_doc == 0 ||
      descriptors_per_doc == 0 || labels_per_doc == 0)
    throw ValidationError("synthetic spec sizes must be positive");
  if (!(concentration > 0.0) || !std::isfinite(concentration) || !(mixture_concentration > 0.0) ||
      !std::isfinite(mixture_concentration))
    throw ValidationError("synthetic concentrations must be positive and finite");
  const std::set<TopicId> empty(empty_topics.begin(), empty_topics.end());
  for (const auto k : empty)
    if (k >= num_topics) throw ValidationError("empty topic index out of range");
  if (labels_per_doc > num_topics - empty.size())
    throw ValidationError("labels_per_doc exceeds the number of topics available for labeling");
}

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  SyntheticCorpus out;
  auto& corpus = out.corpus;
  corpus.num_topics = spec.num_topics;

  const std::size_t vocab_size[kNumLanguages] = {spec.word_vocab, spec.descriptor_vocab};
  const std::size_t per_doc[kNumLanguages] = {spec.words_per_doc, spec.descriptors_per_doc};
  for (std::size_t v = 0; v < spec.word_vocab; ++v) corpus.words.add(numbered('w', v, spec.word_vocab));
  for (std::size_t v = 0; v < spec.descriptor_vocab; ++v)
    corpus.descriptors.add(numbered('d', v, spec.descriptor_vocab));
  for (std::size_t k = 0; k < spec.num_topics; ++k) corpus.topic_codes.push_back(numbered('T', k, spec.num_topics));

  std::vector<CumulativeTable> tables[kNumLanguages];
  for (std::size_t l = 0; l < kNumLanguages; ++l) {
    for (std::size_t k = 0; k < spec.num_topics; ++k) {
      out.planted[l].push_back(dirichlet(rng, spec.concentration, vocab_size[l]));
      tables[l].emplace_back(out.planted[l].back());
    }
  }

  const std::set<TopicId> empty(spec.empty_topics.begin(), spec.empty_topics.end());
  std::vector<TopicId> eligible;
  for (TopicId k = 0; k < spec.num_topics; ++k)
    if (!empty.contains(k)) eligible.push_back(k);

  for (std::size_t d = 0; d < spec.docs; ++d) {
    // Partial Fisher-Yates for a uniform label subset.
    auto pool = eligible;
    for (std::size_t i = 0; i < spec.labels_per_doc; ++i) {
      const auto j = i + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(pool.size() - i));
      std::swap(pool[i], pool[std::min(j, pool.size() - 1)]);
    }
    Document doc;
    doc.id = numbered('D', d, spec.docs);
    doc.labels.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(spec.labels_per_doc));
    std::sort(doc.labels.begin(), doc.labels.end());

    const CumulativeTable mixture(dirichlet(rng, spec.mixture_concentration, doc.labels.size()));
    for (std::size_t l = 0; l < kNumLanguages; ++l) {
      auto& tokens = l == 0 ? doc.words : doc.descriptors;
      for (std::size_t i = 0; i < per_doc[l]; ++i) {
        const auto k = doc.labels[mixture.sample(rng)];
        tokens.push_back(static_cast<TermId>(tables[l][k].sample(rng)));
      }
    }
    corpus.documents.push_back(std::move(doc));
  }

  auto& r = corpus.report;
  r.docs_read = r.docs_admitted = spec.docs;
  r.words.raw = r.words.encoded = spec.docs * spec.words_per_doc;
  r.descriptors.raw = r.descriptors.encoded = spec.docs * spec.descriptors_per_doc;
  return out;
}

}  // namespace koslinker
