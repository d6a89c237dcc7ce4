#include "koslinker/plltm.hpp"

#include <algorithm>
#include <cmath>

#include "koslinker/error.hpp"

namespace koslinker {
namespace {

constexpr TopicId kNoTopic = static_cast<TopicId>(-1);

std::size_t label_slot(const Document& doc, TopicId k) {
  const auto it = std::lower_bound(doc.labels.begin(), doc.labels.end(), k);
  if (it == doc.labels.end() || *it != k)
    throw ValidationError("document '" + doc.id + "': topic " + std::to_string(k) + " is not among its labels");
  return static_cast<std::size_t>(it - doc.labels.begin());
}

void check_corpus(const Corpus& corpus) {
  for (const auto& doc : corpus.documents) {
    if (doc.labels.empty()) throw ValidationError("document '" + doc.id + "' has no labels");
    if (!std::is_sorted(doc.labels.begin(), doc.labels.end()) ||
        std::adjacent_find(doc.labels.begin(), doc.labels.end()) != doc.labels.end())
      throw ValidationError("document '" + doc.id + "': labels must be sorted and unique");
    if (doc.labels.back() >= corpus.num_topics)
      throw ValidationError("document '" + doc.id + "': label out of range");
    for (const auto l : kLanguages) {
      const auto v = corpus.vocabulary(l).size();
      for (const auto t : doc.tokens(l))
        if (t >= v) throw ValidationError("document '" + doc.id + "': token index out of range");
    }
  }
}

// Unnormalized full-conditional weights over labels(d). Counts belonging to
// topic `own` include the token itself and are reduced by one.
void label_weights(const ModelState& s, std::size_t d, Language l, TermId v, TopicId own, std::vector<double>& out) {
  const auto& doc = s.corpus->documents[d];
  const auto li = index_of(l);
  const double alpha = s.hyper.alpha;
  const double beta = s.hyper.beta(l);
  const double vbeta = static_cast<double>(s.corpus->vocabulary(l).size()) * beta;
  const auto& doc_counts = s.counts.doc_topic[d];
  const auto& term = s.counts.topic_term[li];
  const auto& total = s.counts.topic_total[li];

  out.resize(doc.labels.size());
  for (std::size_t i = 0; i < doc.labels.size(); ++i) {
    const auto k = doc.labels[i];
    const Count self = k == own ? 1 : 0;
    out[i] = (doc_counts[i] - self + alpha) * (term(k, v) - self + beta) / (total[k] - self + vbeta);
  }
}

}  // namespace

void Hyperparameters::validate() const {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!positive(alpha) || !positive(beta_words) || !positive(beta_desc))
    throw ValidationError("alpha, beta_words and beta_desc must be positive and finite");
  if (burn_in <= 0 || burn_in >= iterations)
    throw ValidationError("burn_in must satisfy 0 < burn_in < iterations (got burn_in=" + std::to_string(burn_in) +
                          ", iterations=" + std::to_string(iterations) + ")");
  if (sample_lag < 1) throw ValidationError("sample_lag must be at least 1");
}

std::size_t sample_discrete(Rng& rng, std::span<const double> weights) {
  double total = 0.0;
  for (const auto w : weights) total += w;
  double u = uniform01(rng) * total;
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last = i;
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return last;
}

Count TopicCounts::doc_count(const Document& doc, std::size_t d, TopicId k) const {
  const auto it = std::lower_bound(doc.labels.begin(), doc.labels.end(), k);
  if (it == doc.labels.end() || *it != k) return 0;
  return doc_topic[d][static_cast<std::size_t>(it - doc.labels.begin())];
}

TopicCounts recount(const Corpus& corpus, const Assignments& z) {
  TopicCounts c;
  const auto K = corpus.num_topics;
  for (const auto l : kLanguages) {
    c.topic_term[index_of(l)] = CountMatrix(K, corpus.vocabulary(l).size());
    c.topic_total[index_of(l)].assign(K, 0);
  }
  c.doc_topic.resize(corpus.documents.size());
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const auto& doc = corpus.documents[d];
    c.doc_topic[d].assign(doc.labels.size(), 0);
    for (const auto l : kLanguages) {
      const auto li = index_of(l);
      const auto& tokens = doc.tokens(l);
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto k = z[d][li][i];
        ++c.doc_topic[d][label_slot(doc, k)];
        ++c.topic_term[li](k, tokens[i]);
        ++c.topic_total[li][k];
      }
    }
  }
  return c;
}

ModelState state_from_assignments(const Corpus& corpus, const Hyperparameters& hyper, Assignments z) {
  hyper.validate();
  check_corpus(corpus);
  if (z.size() != corpus.documents.size()) throw ValidationError("assignment count differs from document count");
  for (std::size_t d = 0; d < z.size(); ++d)
    for (const auto l : kLanguages)
      if (z[d][index_of(l)].size() != corpus.documents[d].tokens(l).size())
        throw ValidationError("assignment length differs from token count");

  ModelState s;
  s.corpus = &corpus;
  s.hyper = hyper;
  s.counts = recount(corpus, z);
  s.z = std::move(z);
  s.rng.seed(hyper.seed);
  return s;
}

ModelState initialize(const Corpus& corpus, const Hyperparameters& hyper) {
  hyper.validate();
  check_corpus(corpus);
  Rng rng(hyper.seed);
  Assignments z(corpus.documents.size());
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const auto& doc = corpus.documents[d];
    const auto n = static_cast<double>(doc.labels.size());
    for (const auto l : kLanguages) {
      auto& zl = z[d][index_of(l)];
      zl.resize(doc.tokens(l).size());
      for (auto& k : zl) {
        const auto slot = std::min(static_cast<std::size_t>(uniform01(rng) * n), doc.labels.size() - 1);
        k = doc.labels[slot];
      }
    }
  }
  ModelState s;
  s.corpus = &corpus;
  s.hyper = hyper;
  s.counts = recount(corpus, z);
  s.z = std::move(z);
  s.rng = rng;
  return s;
}

std::vector<double> conditional_distribution(const ModelState& state, std::size_t d, Language l, std::size_t pos) {
  const auto& doc = state.corpus->documents.at(d);
  const auto v = doc.tokens(l).at(pos);
  std::vector<double> p;
  label_weights(state, d, l, v, state.z[d][index_of(l)][pos], p);
  double total = 0.0;
  for (const auto w : p) total += w;
  for (auto& w : p) w /= total;
  return p;
}

void gibbs_sweep(ModelState& s) {
  const auto& corpus = *s.corpus;
  std::vector<double> weights;
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const auto& doc = corpus.documents[d];
    auto& doc_counts = s.counts.doc_topic[d];
    for (const auto l : kLanguages) {
      const auto li = index_of(l);
      auto& term = s.counts.topic_term[li];
      auto& total = s.counts.topic_total[li];
      auto& zl = s.z[d][li];
      const auto& tokens = doc.tokens(l);
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto v = tokens[i];
        const auto old_topic = zl[i];
        --doc_counts[label_slot(doc, old_topic)];
        --term(old_topic, v);
        --total[old_topic];

        label_weights(s, d, l, v, kNoTopic, weights);
        const auto slot = sample_discrete(s.rng, weights);
        const auto k = doc.labels[slot];

        ++doc_counts[slot];
        ++term(k, v);
        ++total[k];
        zl[i] = k;
      }
    }
  }
}

double log_likelihood(const ModelState& s) {
  const auto& corpus = *s.corpus;
  const double alpha = s.hyper.alpha;
  const double lg_alpha = std::lgamma(alpha);
  double ll = 0.0;

  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const auto& doc = corpus.documents[d];
    const double label_mass = static_cast<double>(doc.labels.size()) * alpha;
    ll += std::lgamma(label_mass) - std::lgamma(static_cast<double>(doc.size()) + label_mass);
    for (const auto n : s.counts.doc_topic[d]) ll += std::lgamma(n + alpha) - lg_alpha;
  }

  for (const auto l : kLanguages) {
    const auto li = index_of(l);
    const auto V = corpus.vocabulary(l).size();
    if (V == 0) continue;
    const double beta = s.hyper.beta(l);
    const double vbeta = static_cast<double>(V) * beta;
    const double lg_beta = std::lgamma(beta);
    const double lg_vbeta = std::lgamma(vbeta);
    const auto& term = s.counts.topic_term[li];
    for (std::size_t k = 0; k < corpus.num_topics; ++k) {
      const auto n_k = s.counts.topic_total[li][k];
      if (n_k == 0) continue;
      ll += lg_vbeta - std::lgamma(n_k + vbeta);
      for (const auto n : term.row(k))
        if (n != 0) ll += std::lgamma(n + beta) - lg_beta;
    }
  }
  return ll;
}

std::vector<double> estimate_theta(const ModelState& s, std::size_t d) {
  const auto& doc = s.corpus->documents.at(d);
  const double alpha = s.hyper.alpha;
  const double denom = static_cast<double>(doc.size()) + static_cast<double>(doc.labels.size()) * alpha;
  std::vector<double> theta(s.corpus->num_topics, 0.0);
  for (std::size_t i = 0; i < doc.labels.size(); ++i) theta[doc.labels[i]] = (s.counts.doc_topic[d][i] + alpha) / denom;
  return theta;
}

namespace {

template <typename Sink>
void smoothed_phi(const ModelState& s, Language l, Sink&& sink) {
  const auto li = index_of(l);
  const auto V = s.corpus->vocabulary(l).size();
  const double beta = s.hyper.beta(l);
  const double vbeta = static_cast<double>(V) * beta;
  const auto& term = s.counts.topic_term[li];
  for (std::size_t k = 0; k < s.corpus->num_topics; ++k) {
    const double denom = s.counts.topic_total[li][k] + vbeta;
    for (std::size_t v = 0; v < V; ++v) sink(k * V + v, (term(k, v) + beta) / denom);
  }
}

}  // namespace

void accumulate_phi(ModelState& s) {
  for (const auto l : kLanguages) {
    auto& acc = s.phi_accum[index_of(l)];
    acc.resize(s.corpus->num_topics * s.corpus->vocabulary(l).size(), 0.0);
    smoothed_phi(s, l, [&](std::size_t i, double p) { acc[i] += p; });
  }
  ++s.accum_count;
}

TrainedModel finalize_model(const ModelState& s) {
  const auto& corpus = *s.corpus;
  TrainedModel m;
  m.num_topics = corpus.num_topics;
  m.topic_codes = corpus.topic_codes;
  m.hyper = s.hyper;
  m.samples = s.accum_count;
  for (const auto l : kLanguages) {
    const auto li = index_of(l);
    m.vocab[li] = corpus.vocabulary(l);
    auto& phi = m.phi[li];
    phi.assign(corpus.num_topics * corpus.vocabulary(l).size(), 0.0);
    if (s.accum_count > 0) {
      const double n = static_cast<double>(s.accum_count);
      for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = s.phi_accum[li][i] / n;
    } else {
      smoothed_phi(s, l, [&](std::size_t i, double p) { phi[i] = p; });
    }
    m.support[li].assign(s.counts.topic_total[li].begin(), s.counts.topic_total[li].end());
  }
  return m;
}

TrainedModel train(const Corpus& corpus, const Hyperparameters& hyper, const TrainingObserver& observer) {
  hyper.validate();
  if (corpus.num_topics == 0) throw ValidationError("corpus has no topics");
  auto state = initialize(corpus, hyper);

  std::vector<double> trace;
  trace.reserve(static_cast<std::size_t>(hyper.iterations));
  for (int sweep = 1; sweep <= hyper.iterations; ++sweep) {
    gibbs_sweep(state);
    const double ll = log_likelihood(state);
    if (!std::isfinite(ll)) throw Error("non-finite log-likelihood at sweep " + std::to_string(sweep));
    trace.push_back(ll);
    if (observer) observer(sweep, ll);
    if (sweep > hyper.burn_in && (sweep - hyper.burn_in) % hyper.sample_lag == 0) accumulate_phi(state);
  }

  auto model = finalize_model(state);
  model.log_likelihood = std::move(trace);
  return model;
}

}  // namespace koslinker
