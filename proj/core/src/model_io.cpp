#include "koslinker/model_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "koslinker/error.hpp"

namespace koslinker {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

void save_model(const TrainedModel& m, std::ostream& out) {
  ordered_json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["num_topics"] = m.num_topics;
  j["topic_codes"] = m.topic_codes;
  j["rng"] = m.rng_name;
  j["seed"] = m.hyper.seed;
  j["hyperparameters"] = ordered_json{{"alpha", m.hyper.alpha},
                                      {"beta_words", m.hyper.beta_words},
                                      {"beta_desc", m.hyper.beta_desc},
                                      {"iterations", m.hyper.iterations},
                                      {"burn_in", m.hyper.burn_in},
                                      {"sample_lag", m.hyper.sample_lag}};
  j["samples"] = m.samples;

  ordered_json vocab, phi, support;
  for (const auto l : kLanguages) {
    const auto li = index_of(l);
    const std::string key(to_string(l));
    vocab[key] = m.vocab[li].terms();
    auto rows = ordered_json::array();
    for (TopicId k = 0; k < m.num_topics; ++k) {
      const auto row = m.phi_row(l, k);
      rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    phi[key] = std::move(rows);
    support[key] = m.support[li];
  }
  j["vocabularies"] = std::move(vocab);
  j["phi"] = std::move(phi);
  j["support"] = std::move(support);
  j["log_likelihood"] = m.log_likelihood;
  out << j.dump() << '\n';
}

TrainedModel load_model(std::istream& in, std::string_view source) {
  const std::string src(source);
  const json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ParseError(src, 0, "not a JSON document");
  if (j.value("format", "") != kModelFormat) throw ParseError(src, 0, "not a model file");
  if (j.value("version", 0) != kModelVersion)
    throw ParseError(src, 0, "unsupported model version " + std::to_string(j.value("version", 0)));

  try {
    TrainedModel m;
    m.num_topics = j.at("num_topics").get<std::size_t>();
    m.topic_codes = j.at("topic_codes").get<std::vector<std::string>>();
    m.rng_name = j.at("rng").get<std::string>();
    m.hyper.seed = j.at("seed").get<std::uint64_t>();
    const auto& h = j.at("hyperparameters");
    m.hyper.alpha = h.at("alpha").get<double>();
    m.hyper.beta_words = h.at("beta_words").get<double>();
    m.hyper.beta_desc = h.at("beta_desc").get<double>();
    m.hyper.iterations = h.at("iterations").get<int>();
    m.hyper.burn_in = h.at("burn_in").get<int>();
    m.hyper.sample_lag = h.at("sample_lag").get<int>();
    m.samples = j.at("samples").get<std::size_t>();
    if (m.topic_codes.size() != m.num_topics) throw ParseError(src, 0, "topic_codes size differs from num_topics");

    for (const auto l : kLanguages) {
      const auto li = index_of(l);
      const std::string key(to_string(l));
      m.vocab[li] = Vocabulary::from_terms(j.at("vocabularies").at(key).get<std::vector<std::string>>());
      const auto& rows = j.at("phi").at(key);
      if (rows.size() != m.num_topics) throw ParseError(src, 0, "phi." + key + " must have one row per topic");
      const auto V = m.vocab[li].size();
      m.phi[li].reserve(m.num_topics * V);
      for (const auto& row : rows) {
        if (row.size() != V) throw ParseError(src, 0, "phi." + key + " row length differs from vocabulary size");
        for (const auto& p : row) {
          const auto x = p.get<double>();
          if (!std::isfinite(x) || x < 0.0) throw ParseError(src, 0, "phi." + key + " holds an invalid probability");
          m.phi[li].push_back(x);
        }
      }
      m.support[li] = j.at("support").at(key).get<std::vector<std::uint64_t>>();
      if (m.support[li].size() != m.num_topics) throw ParseError(src, 0, "support." + key + " size mismatch");
    }
    m.log_likelihood = j.at("log_likelihood").get<std::vector<double>>();
    return m;
  } catch (const json::exception& e) {
    throw ParseError(src, 0, std::string("malformed model: ") + e.what());
  } catch (const ValidationError& e) {
    throw ParseError(src, 0, e.what());
  }
}

void save_model_file(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file " + path.string());
  save_model(model, out);
  if (!out) throw Error("write failed for " + path.string());
}

TrainedModel load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open model file");
  return load_model(in, path.string());
}

}  // namespace koslinker
