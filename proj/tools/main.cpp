// koslinker: ingest -> train -> links -> serve.

#include <algorithm>
#include <cctype>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "koslinker/error.hpp"

namespace {

using koslinker::app::RunConfig;

std::string env_name(std::string flag) {
  std::string out = "KOSLINKER_";
  for (const char c : flag) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

template <typename T>
CLI::Option* opt(CLI::App* app, const std::string& name, T& value, const std::string& help) {
  return app->add_option("--" + name, value, help)->envname(env_name(name))->capture_default_str();
}

CLI::Option* flag(CLI::App* app, const std::string& name, bool& value, const std::string& help) {
  return app->add_flag("--" + name, value, help)->envname(env_name(name));
}

void add_hyper(CLI::App* app, RunConfig& c) {
  opt(app, "seed", c.hyper.seed, "Random seed");
  opt(app, "alpha", c.hyper.alpha, "Document-topic Dirichlet concentration")->check(CLI::PositiveNumber);
  opt(app, "beta-words", c.hyper.beta_words, "Topic-word Dirichlet concentration")->check(CLI::PositiveNumber);
  opt(app, "beta-desc", c.hyper.beta_desc, "Topic-descriptor Dirichlet concentration")->check(CLI::PositiveNumber);
  opt(app, "iterations", c.hyper.iterations, "Gibbs sweeps");
  opt(app, "burn-in", c.hyper.burn_in, "Sweeps before phi samples are retained");
  opt(app, "sample-lag", c.hyper.sample_lag, "Sweeps between retained phi samples");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"Learns probabilistic links between a thesaurus and a classification system"};
  app.require_subcommand(1);

  auto* ingest = app.add_subcommand("ingest", "Encode an annotated document corpus");
  opt(ingest, "classification", c.classification, "Classification file (CSV or JSON lines)")->required();
  opt(ingest, "thesaurus", c.thesaurus, "Thesaurus file (JSON lines)")->required();
  opt(ingest, "documents", c.documents, "Documents file (JSON lines)")->required();
  opt(ingest, "corpus", c.corpus, "Corpus cache to write")->required();
  opt(ingest, "stopwords", c.stopwords, "Stopword list, one per line");
  opt(ingest, "min-df", c.min_df, "Minimum word document frequency");
  opt(ingest, "max-df-ratio", c.max_df_ratio, "Maximum word document frequency ratio")->check(CLI::Range(0.0, 1.0));
  opt(ingest, "max-level", c.max_level, "Maximum classification depth");
  flag(ingest, "strict", c.strict, "Fail on unknown class codes and unresolvable descriptors");
  flag(ingest, "propagate-labels", c.propagate_labels, "Add ancestor classes to each document's labels");

  auto* train = app.add_subcommand("train", "Train the labeled two-language topic model");
  opt(train, "corpus", c.corpus, "Corpus cache")->required();
  opt(train, "model", c.model, "Model file to write")->required();
  opt(train, "report-every", c.report_every, "Print the log-likelihood every N sweeps");
  add_hyper(train, c);

  auto* links = app.add_subcommand("links", "Extract class-descriptor links into a tree file");
  opt(links, "model", c.model, "Model file")->required();
  opt(links, "classification", c.classification, "Classification file")->required();
  opt(links, "thesaurus", c.thesaurus, "Thesaurus file")->required();
  opt(links, "tree", c.tree, "Tree file to write")->required();
  opt(links, "top-k", c.top_k, "Descriptors per class")->check(CLI::PositiveNumber);
  opt(links, "min-support", c.min_support, "Descriptor tokens below which a class is flagged low-support");
  opt(links, "max-level", c.max_level, "Maximum classification depth");

  auto* serve = app.add_subcommand("serve", "Serve the link tree and descriptor suggestions over HTTP");
  opt(serve, "tree", c.tree, "Tree file")->required();
  opt(serve, "model", c.model, "Model file (enables /api/suggest)");
  opt(serve, "classification", c.classification, "Classification file (with --model)");
  opt(serve, "thesaurus", c.thesaurus, "Thesaurus file (with --model)");
  opt(serve, "assets", c.assets, "Directory of static UI assets");
  opt(serve, "host", c.host, "Listen address");
  opt(serve, "port", c.port, "Listen port")->check(CLI::Range(1, 65535));
  opt(serve, "max-level", c.max_level, "Maximum classification depth");

  auto* synth = app.add_subcommand("synth", "Write a synthetic thesaurus and documents file for a classification");
  opt(synth, "classification", c.classification, "Classification file")->required();
  opt(synth, "out-dir", c.out_dir, "Output directory")->required();
  opt(synth, "seed", c.hyper.seed, "Random seed");
  opt(synth, "docs", c.synth_docs, "Number of documents");
  opt(synth, "word-vocab", c.synth_word_vocab, "Word vocabulary size");
  opt(synth, "descriptor-vocab", c.synth_descriptor_vocab, "Descriptor vocabulary size");
  opt(synth, "words-per-doc", c.synth_words_per_doc, "Word tokens per document");
  opt(synth, "descriptors-per-doc", c.synth_descriptors_per_doc, "Descriptor tokens per document");
  opt(synth, "labels-per-doc", c.synth_labels_per_doc, "Classes per document");
  opt(synth, "concentration", c.synth_concentration, "Dirichlet concentration of planted rows");
  opt(synth, "empty-class", c.synth_empty_classes, "Class code that receives no documents (repeatable)");
  opt(synth, "max-level", c.max_level, "Maximum classification depth");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) koslinker::app::cmd_ingest(c, std::cout);
    else if (*train) koslinker::app::cmd_train(c, std::cout);
    else if (*links) koslinker::app::cmd_links(c, std::cout);
    else if (*serve) koslinker::app::cmd_serve(c, std::cout);
    else if (*synth) koslinker::app::cmd_synth(c, std::cout);
  } catch (const koslinker::Error& e) {
    std::cerr << "koslinker: error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "koslinker: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
