#include "commands.hpp"

#include <csignal>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "koslinker/corpus.hpp"
#include "koslinker/error.hpp"
#include "koslinker/kos.hpp"
#include "koslinker/links.hpp"
#include "koslinker/model_io.hpp"
#include "koslinker/service.hpp"
#include "koslinker/synthetic.hpp"

namespace koslinker::app {
namespace {

void require(const fs::path& path, const char* flag) {
  if (path.empty()) throw Error(std::string("missing required option ") + flag);
  if (!fs::exists(path)) throw Error(std::string(flag) + ": no such file: " + path.string());
}

void require_output(const fs::path& path, const char* flag) {
  if (path.empty()) throw Error(std::string("missing required option ") + flag);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_tally(std::ostream& log, const char* name, const TokenTally& t) {
  log << "  " << name << " tokens: raw " << t.raw << ", encoded " << t.encoded << ", dropped " << t.dropped << '\n';
}

HttpServer* g_server = nullptr;

extern "C" void handle_stop_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

}  // namespace

void cmd_ingest(const RunConfig& c, std::ostream& log) {
  require(c.classification, "--classification");
  require(c.thesaurus, "--thesaurus");
  require(c.documents, "--documents");
  require_output(c.corpus, "--corpus");

  const auto classification = load_classification(c.classification, c.max_level);
  const auto thesaurus = load_thesaurus(c.thesaurus);

  IngestOptions options;
  options.policy = c.strict ? UnknownPolicy::strict : UnknownPolicy::skip;
  options.min_df = c.min_df;
  options.max_df_ratio = c.max_df_ratio;
  options.propagate_labels = c.propagate_labels;
  if (!c.stopwords.empty()) {
    require(c.stopwords, "--stopwords");
    std::ifstream in(c.stopwords);
    options.tokenizer = Tokenizer(read_stopwords(in));
  }

  const auto corpus = ingest_file(c.documents, classification, thesaurus, options);
  save_corpus_file(corpus, c.corpus);

  const auto& r = corpus.report;
  log << "ingested " << c.documents.string() << " -> " << c.corpus.string() << '\n'
      << "  documents: read " << r.docs_read << ", admitted " << r.docs_admitted << ", dropped " << r.docs_dropped
      << " (no labels " << r.dropped_no_labels << ", no tokens " << r.dropped_no_tokens << ")\n"
      << "  unknown class codes " << r.unknown_class_codes << ", unresolved descriptors "
      << r.unresolved_descriptors << '\n';
  print_tally(log, "word", r.words);
  print_tally(log, "descriptor", r.descriptors);
  log << "  vocabularies: " << corpus.words.size() << " words, " << corpus.descriptors.size() << " descriptors, "
      << corpus.num_topics << " classes\n";
}

void cmd_train(const RunConfig& c, std::ostream& log) {
  require(c.corpus, "--corpus");
  require_output(c.model, "--model");
  c.hyper.validate();
  const auto corpus = load_corpus_file(c.corpus);

  const int every = std::max(1, c.report_every);
  const auto model = train(corpus, c.hyper, [&](int sweep, double ll) {
    if (sweep % every == 0 || sweep == 1 || sweep == c.hyper.iterations)
      log << "sweep " << sweep << " log-likelihood " << ll << '\n';
  });
  save_model_file(model, c.model);
  log << "model written to " << c.model.string() << " (" << model.samples << " retained samples)\n";
}

void cmd_links(const RunConfig& c, std::ostream& log) {
  require(c.model, "--model");
  require(c.classification, "--classification");
  require(c.thesaurus, "--thesaurus");
  require_output(c.tree, "--tree");

  const auto model = load_model_file(c.model);
  const auto classification = load_classification(c.classification, c.max_level);
  const auto thesaurus = load_thesaurus(c.thesaurus);

  const auto links = extract_links(model, classification, thesaurus, {c.top_k, c.min_support});
  export_tree_file(build_link_tree(classification, links), c.tree);

  std::size_t flagged = 0;
  for (const auto& l : links) flagged += l.low_support ? 1 : 0;
  log << "tree written to " << c.tree.string() << ": " << links.size() << " classes, " << flagged
      << " flagged low-support\n";
}

void cmd_serve(const RunConfig& c, std::ostream& log) {
  require(c.tree, "--tree");
  LinkService::Data data;
  data.tree_document = read_file(c.tree);
  parse_tree(data.tree_document, c.tree.string());
  if (!c.model.empty()) {
    require(c.model, "--model");
    require(c.classification, "--classification");
    require(c.thesaurus, "--thesaurus");
    data.model = std::make_shared<const TrainedModel>(load_model_file(c.model));
    data.classification = std::make_shared<const ClassificationSystem>(load_classification(c.classification, c.max_level));
    data.thesaurus = std::make_shared<const Thesaurus>(load_thesaurus(c.thesaurus));
  }

  HttpServer server(std::make_shared<const LinkService>(std::move(data)), {c.host, c.port, c.assets});
  const int port = server.bind();
  log << "serving on http://" << c.host << ":" << port << (c.model.empty() ? " (suggestions disabled)" : "") << '\n';
  log.flush();

  g_server = &server;
  std::signal(SIGINT, handle_stop_signal);
  std::signal(SIGTERM, handle_stop_signal);
  server.listen();
  g_server = nullptr;
}

void cmd_synth(const RunConfig& c, std::ostream& log) {
  require(c.classification, "--classification");
  require_output(c.out_dir, "--out-dir");
  const auto classification = load_classification(c.classification, c.max_level);

  SyntheticSpec spec;
  spec.num_topics = classification.size();
  spec.word_vocab = c.synth_word_vocab;
  spec.descriptor_vocab = c.synth_descriptor_vocab;
  spec.docs = c.synth_docs;
  spec.words_per_doc = c.synth_words_per_doc;
  spec.descriptors_per_doc = c.synth_descriptors_per_doc;
  spec.labels_per_doc = c.synth_labels_per_doc;
  spec.concentration = c.synth_concentration;
  spec.seed = c.hyper.seed;
  for (const auto& code : c.synth_empty_classes) {
    const auto topic = classification.topic_of(code);
    if (!topic) throw ValidationError("--empty-class: unknown class code '" + code + "'");
    spec.empty_topics.push_back(*topic);
  }

  auto synthetic = generate_synthetic(spec);
  auto& corpus = synthetic.corpus;
  corpus.topic_codes = classification.codes();

  std::vector<Descriptor> descriptors;
  for (TermId v = 0; v < corpus.descriptors.size(); ++v) {
    const auto& id = corpus.descriptors.term(v);
    descriptors.push_back({id, "concept " + id.substr(1), {"concepts " + id.substr(1)}});
  }
  const auto thesaurus = Thesaurus::build(descriptors);

  fs::create_directories(c.out_dir);
  {
    std::ofstream out(c.out_dir / "thesaurus.jsonl", std::ios::binary);
    for (const auto& d : descriptors)
      out << R"({"id":")" << d.id << R"(","label":")" << d.preferred_label << R"(","alt":[")" << d.alt_labels[0]
          << "\"]}\n";
    if (!out) throw Error("cannot write " + (c.out_dir / "thesaurus.jsonl").string());
  }
  {
    std::ofstream out(c.out_dir / "documents.jsonl", std::ios::binary);
    write_documents_jsonl(corpus, out, &thesaurus);
    if (!out) throw Error("cannot write " + (c.out_dir / "documents.jsonl").string());
  }
  log << "wrote " << corpus.documents.size() << " documents and " << descriptors.size() << " descriptors to "
      << c.out_dir.string() << '\n';
}

}  // namespace koslinker::app
