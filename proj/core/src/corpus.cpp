#include "koslinker/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "koslinker/error.hpp"

namespace koslinker {
namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kCorpusFormat = "koslinker-corpus";
constexpr int kCorpusVersion = 1;

std::vector<std::string> string_array(const json& obj, const char* key, std::string_view source, std::size_t line) {
  std::vector<std::string> out;
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_array()) throw ParseError(std::string(source), line, std::string("'") + key + "' must be an array");
  for (const auto& v : *it) {
    if (!v.is_string()) throw ParseError(std::string(source), line, std::string("'") + key + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

ordered_json tally_json(const TokenTally& t) {
  return ordered_json{{"raw", t.raw}, {"encoded", t.encoded}, {"dropped", t.dropped}};
}

TokenTally tally_from(const json& j) {
  return {j.at("raw").get<std::uint64_t>(), j.at("encoded").get<std::uint64_t>(), j.at("dropped").get<std::uint64_t>()};
}

}  // namespace

std::string_view to_string(Language l) noexcept { return l == Language::words ? "words" : "descriptors"; }

Vocabulary Vocabulary::from_terms(std::vector<std::string> terms) {
  Vocabulary v;
  for (auto& t : terms) {
    if (v.find(t)) throw ValidationError("duplicate vocabulary term '" + t + "'");
    v.add(t);
  }
  return v;
}

TermId Vocabulary::add(std::string_view term) {
  const auto [it, inserted] = index_.emplace(std::string(term), static_cast<TermId>(terms_.size()));
  if (inserted) terms_.emplace_back(term);
  return it->second;
}

std::optional<TermId> Vocabulary::find(std::string_view term) const {
  const auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t Corpus::token_count(Language l) const {
  std::uint64_t n = 0;
  for (const auto& d : documents) n += d.tokens(l).size();
  return n;
}

Corpus ingest(std::istream& documents, std::string_view source, const ClassificationSystem& classification,
              const Thesaurus& thesaurus, const IngestOptions& options) {
  const std::string src(source);
  Corpus corpus;
  corpus.num_topics = classification.size();
  corpus.topic_codes = classification.codes();
  auto& report = corpus.report;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(documents, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) throw ParseError(src, line_no, "expected a JSON object");
    const auto id_it = obj.find("id");
    if (id_it == obj.end() || !id_it->is_string()) throw ParseError(src, line_no, "missing string key 'id'");

    Document doc;
    doc.id = id_it->get<std::string>();
    ++report.docs_read;

    for (const auto& code : string_array(obj, "classes", src, line_no)) {
      const auto topic = classification.topic_of(code);
      if (!topic) {
        if (options.policy == UnknownPolicy::strict)
          throw ParseError(src, line_no, "document '" + doc.id + "': unknown class code '" + code + "'");
        ++report.unknown_class_codes;
        continue;
      }
      doc.labels.push_back(*topic);
      if (options.propagate_labels) {
        const auto up = classification.ancestors(*topic);
        doc.labels.insert(doc.labels.end(), up.begin(), up.end());
      }
    }
    std::sort(doc.labels.begin(), doc.labels.end());
    doc.labels.erase(std::unique(doc.labels.begin(), doc.labels.end()), doc.labels.end());

    std::vector<std::string> descriptor_ids;
    const auto raw_descriptors = string_array(obj, "descriptors", src, line_no);
    report.descriptors.raw += raw_descriptors.size();
    for (const auto& label : raw_descriptors) {
      auto id = thesaurus.resolve(label);
      if (!id) {
        if (options.policy == UnknownPolicy::strict)
          throw ParseError(src, line_no, "document '" + doc.id + "': unresolvable descriptor '" + label + "'");
        ++report.unresolved_descriptors;
        ++report.descriptors.dropped;
        continue;
      }
      descriptor_ids.push_back(std::move(*id));
    }

    std::string abstract;
    if (const auto a = obj.find("abstract"); a != obj.end() && !a->is_null()) {
      if (!a->is_string()) throw ParseError(src, line_no, "'abstract' must be a string");
      abstract = a->get<std::string>();
    }
    const auto words = options.tokenizer(abstract);
    report.words.raw += words.size();

    const bool no_labels = doc.labels.empty();
    const bool no_tokens = words.empty() && descriptor_ids.empty();
    if (no_labels || no_tokens) {
      ++report.docs_dropped;
      ++(no_labels ? report.dropped_no_labels : report.dropped_no_tokens);
      report.words.dropped += words.size();
      report.descriptors.dropped += descriptor_ids.size();
      continue;
    }

    doc.words.reserve(words.size());
    for (const auto& w : words) doc.words.push_back(corpus.words.add(w));
    doc.descriptors.reserve(descriptor_ids.size());
    for (const auto& d : descriptor_ids) doc.descriptors.push_back(corpus.descriptors.add(d));
    report.words.encoded += doc.words.size();
    report.descriptors.encoded += doc.descriptors.size();
    ++report.docs_admitted;
    corpus.documents.push_back(std::move(doc));
  }
  if (documents.bad()) throw ParseError(src, line_no, "read error");

  return prune_vocabulary(corpus, options.min_df, options.max_df_ratio);
}

Corpus ingest_file(const std::filesystem::path& documents, const ClassificationSystem& classification,
                   const Thesaurus& thesaurus, const IngestOptions& options) {
  std::ifstream in(documents);
  if (!in) throw ParseError(documents.string(), 0, "cannot open documents file");
  return ingest(in, documents.string(), classification, thesaurus, options);
}

Corpus prune_vocabulary(const Corpus& corpus, std::size_t min_df, double max_df_ratio) {
  if (!(max_df_ratio >= 0.0 && max_df_ratio <= 1.0))
    throw ValidationError("max_df_ratio must lie in [0, 1]");

  const auto num_docs = corpus.documents.size();
  std::vector<std::size_t> df(corpus.words.size(), 0);
  std::vector<std::size_t> last_seen(corpus.words.size(), num_docs);
  for (std::size_t d = 0; d < num_docs; ++d) {
    for (const auto w : corpus.documents[d].words) {
      if (last_seen[w] != d) {
        last_seen[w] = d;
        ++df[w];
      }
    }
  }

  const double max_df = max_df_ratio * static_cast<double>(num_docs);
  constexpr auto kRemoved = static_cast<TermId>(-1);
  std::vector<TermId> remap(corpus.words.size(), kRemoved);
  Corpus out;
  out.num_topics = corpus.num_topics;
  out.topic_codes = corpus.topic_codes;
  out.descriptors = corpus.descriptors;
  out.report = corpus.report;
  for (TermId w = 0; w < corpus.words.size(); ++w) {
    if (df[w] >= min_df && static_cast<double>(df[w]) <= max_df) remap[w] = out.words.add(corpus.words.term(w));
  }

  const bool had_words = corpus.token_count(Language::words) > 0;
  bool any_words = false;
  auto& report = out.report;
  for (const auto& doc : corpus.documents) {
    Document next;
    next.id = doc.id;
    next.labels = doc.labels;
    next.descriptors = doc.descriptors;
    for (const auto w : doc.words) {
      if (remap[w] != kRemoved) next.words.push_back(remap[w]);
    }
    const auto removed = doc.words.size() - next.words.size();
    report.words.encoded -= removed;
    report.words.dropped += removed;
    if (next.size() == 0) {
      report.descriptors.encoded -= next.descriptors.size();
      report.descriptors.dropped += next.descriptors.size();
      --report.docs_admitted;
      ++report.docs_dropped;
      ++report.dropped_no_tokens;
      continue;
    }
    any_words = any_words || !next.words.empty();
    out.documents.push_back(std::move(next));
  }
  if (had_words && !any_words)
    throw ValidationError("vocabulary pruning (min_df=" + std::to_string(min_df) +
                          ", max_df_ratio=" + std::to_string(max_df_ratio) + ") removed every word of every document");
  return out;
}

void save_corpus(const Corpus& corpus, std::ostream& out) {
  ordered_json j;
  j["format"] = kCorpusFormat;
  j["version"] = kCorpusVersion;
  j["num_topics"] = corpus.num_topics;
  j["topic_codes"] = corpus.topic_codes;
  j["vocabularies"] = ordered_json{{"words", corpus.words.terms()}, {"descriptors", corpus.descriptors.terms()}};
  auto docs = ordered_json::array();
  for (const auto& d : corpus.documents) {
    docs.push_back(ordered_json{
        {"id", d.id}, {"words", d.words}, {"descriptors", d.descriptors}, {"labels", d.labels}});
  }
  j["documents"] = std::move(docs);
  const auto& r = corpus.report;
  j["report"] = ordered_json{{"docs_read", r.docs_read},
                             {"docs_admitted", r.docs_admitted},
                             {"docs_dropped", r.docs_dropped},
                             {"dropped_no_labels", r.dropped_no_labels},
                             {"dropped_no_tokens", r.dropped_no_tokens},
                             {"unknown_class_codes", r.unknown_class_codes},
                             {"unresolved_descriptors", r.unresolved_descriptors},
                             {"words", tally_json(r.words)},
                             {"descriptors", tally_json(r.descriptors)}};
  out << j.dump() << '\n';
}

Corpus load_corpus(std::istream& in, std::string_view source) {
  const std::string src(source);
  const json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ParseError(src, 0, "not a JSON document");
  if (j.value("format", "") != kCorpusFormat) throw ParseError(src, 0, "not a corpus file");
  if (j.value("version", 0) != kCorpusVersion)
    throw ParseError(src, 0, "unsupported corpus version " + std::to_string(j.value("version", 0)));

  try {
    Corpus c;
    c.num_topics = j.at("num_topics").get<std::size_t>();
    c.topic_codes = j.at("topic_codes").get<std::vector<std::string>>();
    c.words = Vocabulary::from_terms(j.at("vocabularies").at("words").get<std::vector<std::string>>());
    c.descriptors = Vocabulary::from_terms(j.at("vocabularies").at("descriptors").get<std::vector<std::string>>());
    if (c.topic_codes.size() != c.num_topics) throw ParseError(src, 0, "topic_codes size differs from num_topics");
    for (const auto& dj : j.at("documents")) {
      Document d;
      d.id = dj.at("id").get<std::string>();
      d.words = dj.at("words").get<std::vector<TermId>>();
      d.descriptors = dj.at("descriptors").get<std::vector<TermId>>();
      d.labels = dj.at("labels").get<std::vector<TopicId>>();
      for (const auto w : d.words)
        if (w >= c.words.size()) throw ParseError(src, 0, "document '" + d.id + "': word index out of range");
      for (const auto w : d.descriptors)
        if (w >= c.descriptors.size()) throw ParseError(src, 0, "document '" + d.id + "': descriptor index out of range");
      for (const auto k : d.labels)
        if (k >= c.num_topics) throw ParseError(src, 0, "document '" + d.id + "': label out of range");
      c.documents.push_back(std::move(d));
    }
    const auto& r = j.at("report");
    c.report.docs_read = r.at("docs_read").get<std::uint64_t>();
    c.report.docs_admitted = r.at("docs_admitted").get<std::uint64_t>();
    c.report.docs_dropped = r.at("docs_dropped").get<std::uint64_t>();
    c.report.dropped_no_labels = r.at("dropped_no_labels").get<std::uint64_t>();
    c.report.dropped_no_tokens = r.at("dropped_no_tokens").get<std::uint64_t>();
    c.report.unknown_class_codes = r.at("unknown_class_codes").get<std::uint64_t>();
    c.report.unresolved_descriptors = r.at("unresolved_descriptors").get<std::uint64_t>();
    c.report.words = tally_from(r.at("words"));
    c.report.descriptors = tally_from(r.at("descriptors"));
    return c;
  } catch (const json::exception& e) {
    throw ParseError(src, 0, std::string("malformed corpus: ") + e.what());
  } catch (const ValidationError& e) {
    throw ParseError(src, 0, e.what());
  }
}

void save_corpus_file(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write corpus file " + path.string());
  save_corpus(corpus, out);
  if (!out) throw Error("write failed for " + path.string());
}

Corpus load_corpus_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open corpus file");
  return load_corpus(in, path.string());
}

void write_documents_jsonl(const Corpus& corpus, std::ostream& out, const Thesaurus* thesaurus) {
  for (const auto& d : corpus.documents) {
    std::string abstract;
    for (const auto w : d.words) {
      if (!abstract.empty()) abstract += ' ';
      abstract += corpus.words.term(w);
    }
    std::vector<std::string> descriptors;
    for (const auto t : d.descriptors) {
      const auto& id = corpus.descriptors.term(t);
      const auto* desc = thesaurus ? thesaurus->find(id) : nullptr;
      descriptors.push_back(desc ? desc->preferred_label : id);
    }
    std::vector<std::string> classes;
    for (const auto k : d.labels) classes.push_back(corpus.topic_codes.at(k));
    ordered_json j{{"id", d.id}, {"abstract", abstract}, {"descriptors", descriptors}, {"classes", classes}};
    out << j.dump() << '\n';
  }
}

}  // namespace koslinker
