#include "koslinker/links.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "koslinker/error.hpp"

namespace koslinker {
namespace {

ClassificationSystem csv(const std::string& body) {
  std::istringstream in("code,name,parent\n" + body);
  return parse_classification(in);
}

Thesaurus descriptors_named(std::size_t n) {
  std::vector<Descriptor> d;
  for (std::size_t i = 0; i < n; ++i) d.push_back({"id" + std::to_string(i), "label " + std::to_string(i), {}});
  return Thesaurus::build(d);
}

TrainedModel model_with(const ClassificationSystem& cs, std::vector<std::vector<double>> rows,
                        std::vector<std::uint64_t> support) {
  TrainedModel m;
  m.num_topics = rows.size();
  m.topic_codes = cs.codes();
  m.topic_codes.resize(rows.size(), "extra");
  const auto V = rows.empty() ? 0 : rows[0].size();
  for (std::size_t v = 0; v < V; ++v) m.vocab[index_of(Language::descriptors)].add("id" + std::to_string(v));
  m.vocab[index_of(Language::words)].add("w");
  for (const auto& r : rows) {
    m.phi[index_of(Language::descriptors)].insert(m.phi[index_of(Language::descriptors)].end(), r.begin(), r.end());
    m.phi[index_of(Language::words)].push_back(1.0);
  }
  m.support[index_of(Language::descriptors)] = support;
  m.support[index_of(Language::words)] = std::vector<std::uint64_t>(rows.size(), 0);
  return m;
}

const auto kChain = "10000,Basic Research,\n10200,Methods,10000\n";

TEST(TopIndices, DescendingWithIndexTieBreak) {
  const std::vector<double> v{0.1, 0.3, 0.3, 0.05, 0.3};
  EXPECT_EQ(top_indices(v, 3), (std::vector<TermId>{1, 2, 4}));
  EXPECT_EQ(top_indices(v, 10).size(), 5u);
  EXPECT_TRUE(top_indices(v, 0).empty());
}

TEST(ExtractLinks, TopKOfDescriptorRowWithPhiValues) {
  const auto cs = csv(kChain);
  const auto th = descriptors_named(7);
  const auto m = model_with(cs, {{0.05, 0.3, 0.1, 0.2, 0.15, 0.12, 0.08}, {0.4, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1}},
                            {50, 50});
  const auto links = extract_links(m, cs, th);
  ASSERT_EQ(links.size(), 2u);
  EXPECT_EQ(links[0].code, "10000");
  EXPECT_FALSE(links[0].low_support);
  const std::vector<RankedDescriptor> expected{
      {"label 1", 0.3}, {"label 3", 0.2}, {"label 4", 0.15}, {"label 5", 0.12}, {"label 2", 0.1}};
  EXPECT_EQ(links[0].descriptors, expected);
  // ties 0.1 x6 -> lowest vocabulary indices first
  EXPECT_EQ(links[1].descriptors[1].label, "label 1");
  EXPECT_EQ(links[1].descriptors[4].label, "label 4");

  const auto three = extract_links(m, cs, th, {3, 10});
  EXPECT_EQ(three[0].descriptors.size(), 3u);
}

TEST(ExtractLinks, LowSupportTopicsAreFlagged) {
  const auto cs = csv(kChain);
  const auto m = model_with(cs, {{0.5, 0.5}, {0.5, 0.5}}, {0, 9});
  for (const auto& l : extract_links(m, cs, descriptors_named(2))) {
    EXPECT_TRUE(l.low_support);
    EXPECT_TRUE(l.descriptors.empty());
  }
  const auto relaxed = extract_links(m, cs, descriptors_named(2), {5, 9});
  EXPECT_TRUE(relaxed[0].low_support);
  EXPECT_FALSE(relaxed[1].low_support);
}

TEST(ExtractLinks, Errors) {
  const auto cs = csv(kChain);
  const auto th = descriptors_named(2);
  const auto three = model_with(cs, {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}}, {20, 20, 20});
  EXPECT_THROW(extract_links(three, cs, th), ValidationError);
  auto renamed = model_with(cs, {{0.5, 0.5}, {0.5, 0.5}}, {20, 20});
  renamed.topic_codes[1] = "10300";
  EXPECT_THROW(extract_links(renamed, cs, th), ValidationError);
  const auto ok = model_with(cs, {{0.5, 0.5}, {0.5, 0.5}}, {20, 20});
  EXPECT_THROW(extract_links(ok, cs, th, {0, 10}), ValidationError);
  EXPECT_THROW(extract_links(ok, cs, descriptors_named(1)), ValidationError);
}

TEST(SuggestDescriptors, SingletonMatchesExtractLinks) {
  const auto cs = csv(kChain);
  const auto th = descriptors_named(6);
  const auto m = model_with(cs, {{0.3, 0.1, 0.2, 0.2, 0.15, 0.05}, {0.1, 0.2, 0.3, 0.1, 0.1, 0.2}}, {30, 30});
  const auto links = extract_links(m, cs, th);
  for (TopicId k = 0; k < 2; ++k) {
    const std::vector<TopicId> one{k};
    EXPECT_EQ(suggest_descriptors(m, th, one, 5), links[k].descriptors);
    const auto three = suggest_descriptors(m, th, one, 3);
    EXPECT_TRUE(std::equal(three.begin(), three.end(), links[k].descriptors.begin()));
  }
}

TEST(SuggestDescriptors, UniformMixtureOfChosenRows) {
  const auto cs = csv(kChain);
  const auto th = descriptors_named(4);
  const auto m = model_with(cs, {{0.6, 0.0, 0.2, 0.2}, {0.0, 0.4, 0.3, 0.3}}, {30, 30});
  const std::vector<TopicId> both{0, 1};
  const auto s = suggest_descriptors(m, th, both, 4);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[0].label, "label 0");
  EXPECT_DOUBLE_EQ(s[0].p, 0.3);
  EXPECT_EQ(s[3].label, "label 1");
  EXPECT_DOUBLE_EQ(s[3].p, 0.2);
}

TEST(SuggestDescriptors, IdenticalRowsGiveTheCommonRanking) {
  const auto cs = csv("A,a,\nB,b,\nC,c,\n");
  const auto th = descriptors_named(4);
  const std::vector<double> row{0.1, 0.4, 0.2, 0.3};
  const auto m = model_with(cs, {row, row, row}, {30, 30, 30});
  const std::vector<TopicId> all{0, 1, 2};
  const auto s = suggest_descriptors(m, th, all, 3);
  const std::vector<TopicId> first{0};
  const auto single = suggest_descriptors(m, th, first, 3);
  ASSERT_EQ(s.size(), single.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(s[i].label, single[i].label);
    EXPECT_NEAR(s[i].p, single[i].p, 1e-15);
  }
  EXPECT_EQ(s[0].label, "label 1");
}

TEST(SuggestDescriptors, Errors) {
  const auto cs = csv(kChain);
  const auto th = descriptors_named(2);
  const auto m = model_with(cs, {{0.5, 0.5}, {0.5, 0.5}}, {20, 20});
  EXPECT_THROW(suggest_descriptors(m, th, {}, 5), ValidationError);
  const std::vector<TopicId> out_of_range{2};
  EXPECT_THROW(suggest_descriptors(m, th, out_of_range, 5), ValidationError);
}

// Scaling every row by one positive constant leaves the rankings unchanged.
TEST(LinksProperty, RankingIsScaleInvariant) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto cs = csv("A,a,\nB,b,\nC,c,\n");
  const auto th = descriptors_named(12);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<double>> rows(3, std::vector<double>(12));
    for (auto& r : rows)
      for (auto& x : r) x = std::floor(u(gen) * 8.0) / 8.0 + 1e-3;  // coarse grid forces ties
    const double scale = 0.01 + u(gen) * 50.0;
    auto scaled = rows;
    for (auto& r : scaled)
      for (auto& x : r) x *= scale;
    const auto a = extract_links(model_with(cs, rows, {20, 20, 20}), cs, th);
    const auto b = extract_links(model_with(cs, scaled, {20, 20, 20}), cs, th);
    for (std::size_t k = 0; k < 3; ++k) {
      ASSERT_EQ(a[k].descriptors.size(), b[k].descriptors.size());
      for (std::size_t i = 0; i < a[k].descriptors.size(); ++i)
        EXPECT_EQ(a[k].descriptors[i].label, b[k].descriptors[i].label);
    }
  }
}

std::vector<ClassLinks> plain_links(const ClassificationSystem& cs) {
  std::vector<ClassLinks> links;
  for (TopicId k = 0; k < cs.size(); ++k)
    links.push_back({cs.code_of(k), k, {{"label " + std::to_string(k), 0.25 + 0.01 * k}}, 12, false});
  return links;
}

TEST(BuildLinkTree, ChainMirrorsClassification) {
  const auto cs = csv(kChain);
  const auto tree = build_link_tree(cs, plain_links(cs));
  EXPECT_EQ(tree.code, "10000");
  EXPECT_EQ(tree.level, 1);
  ASSERT_EQ(tree.children.size(), 1u);
  EXPECT_EQ(tree.children[0].code, "10200");
  EXPECT_EQ(tree.children[0].name, "Methods");
  EXPECT_EQ(tree.children[0].level, 2);
  EXPECT_EQ(tree.children[0].descriptors[0].label, "label 1");
  EXPECT_EQ(tree.node_count(), 2u);
}

TEST(BuildLinkTree, ForestGetsSyntheticRootAndKeepsOrder) {
  const auto cs = csv("Z,z,\nA,a,\nM,m,\nA2,a2,A\nA1,a1,A\n");
  const auto tree = build_link_tree(cs, plain_links(cs));
  EXPECT_EQ(tree.code, "ROOT");
  EXPECT_EQ(tree.level, 0);
  ASSERT_EQ(tree.children.size(), 3u);
  EXPECT_EQ(tree.children[0].code, "Z");
  EXPECT_EQ(tree.children[1].code, "A");
  EXPECT_EQ(tree.children[2].code, "M");
  EXPECT_EQ(tree.children[1].children[0].code, "A2");
  EXPECT_EQ(tree.children[1].children[1].code, "A1");
  EXPECT_EQ(tree.node_count(), cs.size() + 1);
}

TEST(BuildLinkTree, LinksMustCoverEveryClassOnce) {
  const auto cs = csv(kChain);
  auto links = plain_links(cs);
  auto missing = links;
  missing.pop_back();
  EXPECT_THROW(build_link_tree(cs, missing), ValidationError);
  auto dup = links;
  dup.push_back(links[0]);
  EXPECT_THROW(build_link_tree(cs, dup), ValidationError);
  auto unknown = links;
  unknown[1].code = "nope";
  EXPECT_THROW(build_link_tree(cs, unknown), ValidationError);
}

TEST(ExportTree, KeyOrderAndEmptyDescriptors) {
  const auto cs = csv(kChain);
  auto links = plain_links(cs);
  links[1].descriptors.clear();
  links[1].low_support = true;
  const auto text = export_tree(build_link_tree(cs, links));
  const auto node = text.find("\"code\": \"10200\"");
  ASSERT_NE(node, std::string::npos);
  const auto tail = text.substr(node);
  const auto pos = [&](const char* key) { return tail.find(key); };
  EXPECT_LT(pos("\"code\""), pos("\"name\""));
  EXPECT_LT(pos("\"name\""), pos("\"level\""));
  EXPECT_LT(pos("\"level\""), pos("\"low_support\": true"));
  EXPECT_LT(pos("\"low_support\""), pos("\"descriptors\": []"));
  EXPECT_LT(pos("\"descriptors\""), pos("\"children\": []"));
}

TEST(ExportTree, SixSignificantDigitsAndStableReexport) {
  const auto cs = csv(kChain);
  auto links = plain_links(cs);
  links[0].descriptors = {{"a", 0.123456789}, {"b", 1.0 / 3.0}, {"c", 2.5e-7}};
  const auto tree = build_link_tree(cs, links);
  const auto text = export_tree(tree);
  EXPECT_NE(text.find("0.123457"), std::string::npos);
  EXPECT_NE(text.find("0.333333"), std::string::npos);
  EXPECT_EQ(text.find("0.3333333"), std::string::npos);
  const auto parsed = parse_tree(text);
  EXPECT_EQ(parsed.children[0].code, "10200");
  EXPECT_DOUBLE_EQ(parsed.descriptors[0].p, 0.123457);
  EXPECT_EQ(export_tree(parsed), text);
}

TEST(ExportTree, RoundTripPreservesExportedFields) {
  const auto cs = csv("Z,z,\nA,\"a, \"\"quoted\"\"\",\nA1,Ünïcödé,A\n");
  auto links = plain_links(cs);
  links[2].low_support = true;
  links[2].descriptors.clear();
  for (auto& l : links)
    for (auto& d : l.descriptors) d.p = round_probability(d.p);
  const auto tree = build_link_tree(cs, links);
  const auto back = parse_tree(export_tree(tree));
  std::function<void(const LinkNode&, const LinkNode&)> same = [&](const LinkNode& a, const LinkNode& b) {
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.name, b.name);
    EXPECT_EQ(a.level, b.level);
    EXPECT_EQ(a.low_support, b.low_support);
    EXPECT_EQ(a.descriptors, b.descriptors);
    ASSERT_EQ(a.children.size(), b.children.size());
    for (std::size_t i = 0; i < a.children.size(); ++i) same(a.children[i], b.children[i]);
  };
  same(tree, back);
}

TEST(ParseTree, RejectsMalformedDocuments) {
  EXPECT_THROW(parse_tree("[1,2"), ParseError);
  EXPECT_THROW(parse_tree(R"({"code":"a"})"), ParseError);
  EXPECT_THROW(
      parse_tree(R"({"code":"a","name":"n","level":"1","low_support":false,"descriptors":[],"children":[]})"),
      ParseError);
  EXPECT_THROW(
      parse_tree(R"({"code":"a","name":"n","level":1,"low_support":false,"descriptors":[{"label":1}],"children":[]})"),
      ParseError);
}

TEST(DescriptorsJson, ShapeMatchesTreeEntries) {
  const std::vector<RankedDescriptor> d{{"reform", 0.1234567}};
  EXPECT_EQ(descriptors_json(d), R"({"descriptors":[{"label":"reform","p":0.123457}]})");
}

}  // namespace
}  // namespace koslinker
