#include "koslinker/links.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "koslinker/error.hpp"

namespace koslinker {
namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kSyntheticRootName = "All classes";

const std::string& preferred_label(const Thesaurus& thesaurus, const std::string& id) {
  const auto* d = thesaurus.find(id);
  if (d == nullptr) throw ValidationError("model descriptor '" + id + "' is not in the thesaurus");
  return d->preferred_label;
}

std::vector<RankedDescriptor> ranked(std::span<const double> row, std::size_t k, const Vocabulary& vocab,
                                     const Thesaurus& thesaurus) {
  std::vector<RankedDescriptor> out;
  for (const auto v : top_indices(row, k)) out.push_back({preferred_label(thesaurus, vocab.term(v)), row[v]});
  return out;
}

ordered_json descriptors_array(std::span<const RankedDescriptor> descriptors) {
  auto arr = ordered_json::array();
  for (const auto& d : descriptors) arr.push_back(ordered_json{{"label", d.label}, {"p", round_probability(d.p)}});
  return arr;
}

ordered_json node_json(const LinkNode& n) {
  ordered_json j;
  j["code"] = n.code;
  j["name"] = n.name;
  j["level"] = n.level;
  j["low_support"] = n.low_support;
  j["descriptors"] = descriptors_array(n.descriptors);
  auto children = ordered_json::array();
  for (const auto& c : n.children) children.push_back(node_json(c));
  j["children"] = std::move(children);
  return j;
}

LinkNode node_from(const json& j, const std::string& src) {
  if (!j.is_object()) throw ParseError(src, 0, "tree node must be an object");
  auto field = [&](const char* key) -> const json& {
    const auto it = j.find(key);
    if (it == j.end()) throw ParseError(src, 0, std::string("tree node lacks '") + key + "'");
    return *it;
  };
  LinkNode n;
  const auto& code = field("code");
  const auto& name = field("name");
  const auto& level = field("level");
  const auto& low = field("low_support");
  const auto& descriptors = field("descriptors");
  const auto& children = field("children");
  if (!code.is_string() || !name.is_string() || !level.is_number_integer() || !low.is_boolean() ||
      !descriptors.is_array() || !children.is_array())
    throw ParseError(src, 0, "tree node has a field of the wrong type");
  n.code = code.get<std::string>();
  n.name = name.get<std::string>();
  n.level = level.get<int>();
  n.low_support = low.get<bool>();
  for (const auto& d : descriptors) {
    if (!d.is_object() || !d.contains("label") || !d.contains("p") || !d["label"].is_string() || !d["p"].is_number())
      throw ParseError(src, 0, "descriptor entries need a string 'label' and a numeric 'p'");
    n.descriptors.push_back({d["label"].get<std::string>(), d["p"].get<double>()});
  }
  for (const auto& c : children) n.children.push_back(node_from(c, src));
  return n;
}

}  // namespace

std::vector<TermId> top_indices(std::span<const double> values, std::size_t k) {
  std::vector<TermId> idx(values.size());
  std::iota(idx.begin(), idx.end(), TermId{0});
  const auto n = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n), idx.end(), [&](TermId a, TermId b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });
  idx.resize(n);
  return idx;
}

void check_compatible(const TrainedModel& model, const ClassificationSystem& classification) {
  if (model.num_topics != classification.size())
    throw ValidationError("K mismatch: model has " + std::to_string(model.num_topics) +
                          " topics but the classification has " + std::to_string(classification.size()) +
                          " classes");
  for (TopicId k = 0; k < model.num_topics; ++k) {
    if (model.topic_codes[k] != classification.code_of(k))
      throw ValidationError("topic " + std::to_string(k) + " is class '" + model.topic_codes[k] +
                            "' in the model but '" + classification.code_of(k) + "' in the classification");
  }
}

std::vector<ClassLinks> extract_links(const TrainedModel& model, const ClassificationSystem& classification,
                                      const Thesaurus& thesaurus, const LinkOptions& options) {
  if (options.top_k == 0) throw ValidationError("top_k must be at least 1");
  check_compatible(model, classification);
  const auto& vocab = model.vocab[index_of(Language::descriptors)];
  const auto& support = model.support[index_of(Language::descriptors)];

  std::vector<ClassLinks> links;
  links.reserve(model.num_topics);
  for (TopicId k = 0; k < model.num_topics; ++k) {
    ClassLinks cl;
    cl.code = classification.code_of(k);
    cl.topic = k;
    cl.support = support[k];
    cl.low_support = cl.support < options.min_support;
    if (!cl.low_support) cl.descriptors = ranked(model.phi_row(Language::descriptors, k), options.top_k, vocab, thesaurus);
    links.push_back(std::move(cl));
  }
  return links;
}

std::vector<RankedDescriptor> suggest_descriptors(const TrainedModel& model, const Thesaurus& thesaurus,
                                                  std::span<const TopicId> classes, std::size_t k) {
  if (classes.empty()) throw ValidationError("suggestions need at least one class");
  if (k == 0) throw ValidationError("k must be at least 1");
  std::vector<TopicId> chosen(classes.begin(), classes.end());
  std::sort(chosen.begin(), chosen.end());
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  if (chosen.back() >= model.num_topics) throw ValidationError("class index out of range");

  const auto V = model.vocab_size(Language::descriptors);
  std::vector<double> mixture(V, 0.0);
  for (const auto c : chosen) {
    const auto row = model.phi_row(Language::descriptors, c);
    for (std::size_t v = 0; v < V; ++v) mixture[v] += row[v];
  }
  const double n = static_cast<double>(chosen.size());
  for (auto& p : mixture) p /= n;
  return ranked(mixture, k, model.vocab[index_of(Language::descriptors)], thesaurus);
}

std::size_t LinkNode::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.node_count();
  return n;
}

LinkNode build_link_tree(const ClassificationSystem& classification, std::span<const ClassLinks> links) {
  std::unordered_map<std::string, const ClassLinks*> by_code;
  for (const auto& l : links) {
    if (!classification.find(l.code)) throw ValidationError("links mention unknown class '" + l.code + "'");
    if (!by_code.emplace(l.code, &l).second) throw ValidationError("class '" + l.code + "' appears twice in links");
  }
  for (const auto& code : classification.codes())
    if (!by_code.contains(code)) throw ValidationError("links lack class '" + code + "'");

  auto make = [&](auto&& self, const std::string& code) -> LinkNode {
    const auto& cls = classification.node(code);
    const auto& l = *by_code.at(code);
    LinkNode n{cls.code, cls.name, cls.level, l.low_support, l.descriptors, l.support, {}};
    n.children.reserve(cls.children.size());
    for (const auto& c : cls.children) n.children.push_back(self(self, c));
    return n;
  };

  const auto roots = classification.roots();
  if (roots.size() == 1) return make(make, roots.front());
  if (classification.find(kSyntheticRootCode))
    throw ValidationError("a forest cannot be rooted: class code 'ROOT' is already taken");
  LinkNode root;
  root.code = kSyntheticRootCode;
  root.name = kSyntheticRootName;
  root.level = 0;
  for (const auto& r : roots) root.children.push_back(make(make, r));
  return root;
}

double round_probability(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", p);
  return std::strtod(buf, nullptr);
}

void export_tree(const LinkNode& tree, std::ostream& out) { out << export_tree(tree); }

std::string export_tree(const LinkNode& tree) { return node_json(tree).dump(2) + "\n"; }

void export_tree_file(const LinkNode& tree, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write tree file " + path.string());
  export_tree(tree, out);
  if (!out) throw Error("write failed for " + path.string());
}

LinkNode parse_tree(std::string_view document, std::string_view source) {
  const std::string src(source);
  const json j = json::parse(document, nullptr, false);
  if (j.is_discarded()) throw ParseError(src, 0, "not a JSON document");
  return node_from(j, src);
}

LinkNode load_tree_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open tree file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_tree(ss.str(), path.string());
}

std::string descriptors_json(std::span<const RankedDescriptor> descriptors) {
  return ordered_json{{"descriptors", descriptors_array(descriptors)}}.dump();
}

}  // namespace koslinker
