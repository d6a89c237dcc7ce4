#include "koslinker/kos.hpp"

#include <fstream>
#include <istream>
#include <unordered_set>

#include "json.hpp"

#include "koslinker/error.hpp"
#include "koslinker/text.hpp"

namespace koslinker {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

// One CSV record on a single line; double quotes escape by doubling.
std::vector<std::string> split_csv(std::string_view line, std::string_view source, std::size_t line_no) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  if (quoted) throw ParseError(std::string(source), line_no, "unterminated quoted field");
  return fields;
}

std::string string_field(const json& obj, const char* key, bool required, std::string_view source,
                         std::size_t line_no) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    if (required) throw ParseError(std::string(source), line_no, std::string("missing key '") + key + "'");
    return {};
  }
  if (!it->is_string()) throw ParseError(std::string(source), line_no, std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

json parse_json_line(std::string_view line, std::string_view source, std::size_t line_no) {
  json obj = json::parse(line, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) throw ParseError(std::string(source), line_no, "expected a JSON object");
  return obj;
}

}  // namespace

ClassificationSystem ClassificationSystem::build(std::vector<ClassRecord> rows, std::string_view source,
                                                 int max_level) {
  const std::string src(source);
  if (rows.empty()) throw ParseError(src, 0, "classification is empty");

  std::unordered_map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& r = rows[i];
    r.code = std::string(trim(r.code));
    r.parent = std::string(trim(r.parent));
    if (r.code.empty()) throw ParseError(src, r.line, "empty class code");
    if (!row_of.emplace(r.code, i).second) throw ParseError(src, r.line, "duplicate class code '" + r.code + "'");
  }

  std::vector<std::vector<std::size_t>> children(rows.size());
  std::vector<std::size_t> root_rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.parent.empty()) {
      root_rows.push_back(i);
      continue;
    }
    const auto p = row_of.find(r.parent);
    if (p == row_of.end())
      throw ParseError(src, r.line, "class '" + r.code + "' references missing parent '" + r.parent + "'");
    children[p->second].push_back(i);
  }

  ClassificationSystem cs;
  cs.max_level_ = max_level;
  cs.nodes_.reserve(rows.size());
  std::vector<bool> visited(rows.size(), false);

  // Preorder; depth is bounded by max_level so recursion stays shallow.
  auto visit = [&](auto&& self, std::size_t i, int level) -> void {
    const auto& r = rows[i];
    if (level > max_level)
      throw ParseError(src, r.line,
                       "class '" + r.code + "' at level " + std::to_string(level) + " exceeds the maximum of " +
                           std::to_string(max_level));
    visited[i] = true;
    const auto topic = static_cast<TopicId>(cs.nodes_.size());
    ClassNode node;
    node.code = r.code;
    node.name = r.name;
    if (!r.parent.empty()) node.parent_code = r.parent;
    node.level = level;
    for (auto c : children[i]) node.children.push_back(rows[c].code);
    cs.index_.emplace(node.code, topic);
    cs.nodes_.push_back(std::move(node));
    for (auto c : children[i]) self(self, c, level + 1);
  };
  for (auto i : root_rows) {
    cs.roots_.push_back(rows[i].code);
    visit(visit, i, 1);
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!visited[i]) throw ParseError(src, rows[i].line, "class '" + rows[i].code + "' is part of a parent cycle");
  }
  return cs;
}

const ClassNode* ClassificationSystem::find(std::string_view code) const {
  const auto it = index_.find(std::string(code));
  return it == index_.end() ? nullptr : &nodes_[it->second];
}

const ClassNode& ClassificationSystem::node(std::string_view code) const {
  const auto* n = find(code);
  if (n == nullptr) throw ValidationError("unknown class code '" + std::string(code) + "'");
  return *n;
}

std::optional<TopicId> ClassificationSystem::topic_of(std::string_view code) const {
  const auto it = index_.find(std::string(code));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> ClassificationSystem::codes() const {
  std::vector<std::string> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n.code);
  return out;
}

std::vector<TopicId> ClassificationSystem::ancestors(TopicId topic) const {
  std::vector<TopicId> out;
  const auto* n = &nodes_.at(topic);
  while (n->parent_code) {
    const auto p = index_.at(*n->parent_code);
    out.push_back(p);
    n = &nodes_[p];
  }
  return out;
}

ClassificationSystem parse_classification(std::istream& in, std::string_view source, int max_level) {
  const std::string src(source);
  std::vector<ClassRecord> rows;
  std::string line;
  std::size_t line_no = 0;
  enum class Format { unknown, csv, jsonl } format = Format::unknown;
  std::size_t code_col = 0, name_col = 1, parent_col = 2;

  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;

    if (format == Format::unknown) {
      if (text.front() == '{') {
        format = Format::jsonl;
      } else {
        format = Format::csv;
        auto header = split_csv(text, src, line_no);
        std::optional<std::size_t> c, n, p;
        for (std::size_t i = 0; i < header.size(); ++i) {
          const auto h = trim(header[i]);
          if (h == "code") c = i;
          else if (h == "name") n = i;
          else if (h == "parent") p = i;
        }
        if (!c || !n || !p) throw ParseError(src, line_no, "expected header 'code,name,parent'");
        code_col = *c;
        name_col = *n;
        parent_col = *p;
        continue;
      }
    }

    ClassRecord r;
    r.line = line_no;
    if (format == Format::jsonl) {
      const auto obj = parse_json_line(text, src, line_no);
      r.code = string_field(obj, "code", true, src, line_no);
      r.name = string_field(obj, "name", false, src, line_no);
      r.parent = string_field(obj, "parent", false, src, line_no);
    } else {
      const auto fields = split_csv(text, src, line_no);
      const auto need = std::max({code_col, name_col, parent_col}) + 1;
      if (fields.size() < need) throw ParseError(src, line_no, "expected fields code,name,parent");
      r.code = fields[code_col];
      r.name = std::string(trim(fields[name_col]));
      r.parent = fields[parent_col];
    }
    rows.push_back(std::move(r));
  }
  return ClassificationSystem::build(std::move(rows), src, max_level);
}

ClassificationSystem load_classification(const std::filesystem::path& path, int max_level) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open classification file");
  return parse_classification(in, path.string(), max_level);
}

Thesaurus Thesaurus::build(std::vector<Descriptor> descriptors, std::string_view source,
                           std::span<const std::size_t> lines) {
  const std::string src(source);
  auto line_of = [&](std::size_t i) -> std::size_t { return i < lines.size() ? lines[i] : 0; };

  Thesaurus t;
  std::unordered_set<std::string> preferred;
  for (std::size_t i = 0; i < descriptors.size(); ++i) {
    const auto& d = descriptors[i];
    if (d.id.empty()) throw ParseError(src, line_of(i), "descriptor with empty id");
    if (!t.by_id_.emplace(d.id, i).second) throw ParseError(src, line_of(i), "duplicate descriptor id '" + d.id + "'");
    const auto key = normalize_label(d.preferred_label);
    if (key.empty()) throw ParseError(src, line_of(i), "descriptor '" + d.id + "' has an empty label");
    if (!preferred.insert(key).second)
      throw ParseError(src, line_of(i), "duplicate preferred label '" + d.preferred_label + "'");
    t.label_index_.emplace(key, i);
  }
  for (std::size_t i = 0; i < descriptors.size(); ++i) {
    auto& d = descriptors[i];
    std::vector<std::string> alts;
    for (auto& alt : d.alt_labels) {
      const auto key = normalize_label(alt);
      if (key.empty()) continue;
      if (preferred.contains(key))
        throw ParseError(src, line_of(i), "alt label '" + alt + "' of '" + d.id + "' equals a preferred label");
      const auto [it, inserted] = t.label_index_.emplace(key, i);
      if (!inserted) {
        if (it->second == i) continue;
        throw ParseError(src, line_of(i), "alt label '" + alt + "' claimed by both '" +
                                              descriptors[it->second].id + "' and '" + d.id + "'");
      }
      alts.push_back(std::move(alt));
    }
    d.alt_labels = std::move(alts);
  }
  t.descriptors_ = std::move(descriptors);
  return t;
}

std::optional<std::string> Thesaurus::resolve(std::string_view label) const {
  const auto it = label_index_.find(normalize_label(label));
  if (it == label_index_.end()) return std::nullopt;
  return descriptors_[it->second].id;
}

const Descriptor* Thesaurus::find(std::string_view id) const {
  const auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &descriptors_[it->second];
}

Thesaurus parse_thesaurus(std::istream& in, std::string_view source) {
  const std::string src(source);
  std::vector<Descriptor> descriptors;
  std::vector<std::size_t> lines;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto obj = parse_json_line(text, src, line_no);
    Descriptor d;
    d.id = string_field(obj, "id", true, src, line_no);
    d.preferred_label = string_field(obj, "label", true, src, line_no);
    if (const auto alt = obj.find("alt"); alt != obj.end() && !alt->is_null()) {
      if (!alt->is_array()) throw ParseError(src, line_no, "'alt' must be an array of strings");
      for (const auto& a : *alt) {
        if (!a.is_string()) throw ParseError(src, line_no, "'alt' must be an array of strings");
        d.alt_labels.push_back(a.get<std::string>());
      }
    }
    descriptors.push_back(std::move(d));
    lines.push_back(line_no);
  }
  return Thesaurus::build(std::move(descriptors), src, lines);
}

Thesaurus load_thesaurus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open thesaurus file");
  return parse_thesaurus(in, path.string());
}

}  // namespace koslinker
