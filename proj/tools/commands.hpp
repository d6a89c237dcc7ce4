#pragma once

// Pipeline stages behind the koslinker CLI. Each stage reads and writes file
// artifacts; errors propagate as koslinker::Error.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "koslinker/plltm.hpp"

namespace koslinker::app {

namespace fs = std::filesystem;

struct RunConfig {
  fs::path classification;
  fs::path thesaurus;
  fs::path documents;
  fs::path corpus;
  fs::path model;
  fs::path tree;
  fs::path stopwords;
  fs::path assets;
  fs::path out_dir;

  Hyperparameters hyper;
  bool strict = false;
  std::size_t min_df = 5;
  double max_df_ratio = 0.5;
  bool propagate_labels = false;
  int max_level = 4;

  std::size_t top_k = 5;
  std::uint64_t min_support = 10;
  int report_every = 100;

  std::string host = "127.0.0.1";
  int port = 8080;

  // synth
  std::size_t synth_docs = 1000;
  std::size_t synth_word_vocab = 500;
  std::size_t synth_descriptor_vocab = 200;
  std::size_t synth_words_per_doc = 50;
  std::size_t synth_descriptors_per_doc = 10;
  std::size_t synth_labels_per_doc = 2;
  double synth_concentration = 0.05;
  std::vector<std::string> synth_empty_classes;
};

void cmd_ingest(const RunConfig& config, std::ostream& log);
void cmd_train(const RunConfig& config, std::ostream& log);
void cmd_links(const RunConfig& config, std::ostream& log);
/// Blocks until the server stops.
void cmd_serve(const RunConfig& config, std::ostream& log);
/// Writes thesaurus.jsonl and documents.jsonl for the given classification
/// into out_dir, drawn from the planted generative process.
void cmd_synth(const RunConfig& config, std::ostream& log);

}  // namespace koslinker::app
