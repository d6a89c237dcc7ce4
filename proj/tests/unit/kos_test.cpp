#include "koslinker/kos.hpp"

#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "koslinker/error.hpp"

namespace koslinker {
namespace {

ClassificationSystem parse_csv(const std::string& text, int max_level = kDefaultMaxLevel) {
  std::istringstream in(text);
  return parse_classification(in, "test.csv", max_level);
}

Thesaurus parse_jsonl(const std::string& text) {
  std::istringstream in(text);
  return parse_thesaurus(in, "test.jsonl");
}

TEST(ParseClassification, TwoLevelChain) {
  const auto cs = parse_csv("code,name,parent\n10000,Basic Research,\n10200,Methods,10000\n");
  ASSERT_EQ(cs.size(), 2u);
  ASSERT_EQ(cs.roots().size(), 1u);
  EXPECT_EQ(cs.roots()[0], "10000");
  EXPECT_EQ(cs.node("10200").level, 2);
  EXPECT_EQ(cs.node("10200").parent_code, "10000");
  EXPECT_EQ(cs.node("10000").children, std::vector<std::string>{"10200"});
  EXPECT_EQ(cs.topic_of("10000"), 0u);
  EXPECT_EQ(cs.topic_of("10200"), 1u);
}

TEST(ParseClassification, SecondLevelClass) {
  const auto cs = parse_csv("code,name,parent\n40000,Politics,\n40200,Administrative Science,40000\n");
  EXPECT_EQ(cs.node("40200").level, 2);
  EXPECT_EQ(cs.node("40200").name, "Administrative Science");
}

TEST(ParseClassification, QuotedNamesAndReorderedColumns) {
  const auto cs = parse_csv("parent,code,name\n,1,\"Politics, Law\"\n1,2,\"The \"\"new\"\" class\"\n");
  EXPECT_EQ(cs.node("1").name, "Politics, Law");
  EXPECT_EQ(cs.node("2").name, "The \"new\" class");
}

TEST(ParseClassification, JsonLines) {
  const auto cs = load_classification(KOSLINKER_FIXTURES "/classification.jsonl");
  EXPECT_EQ(cs.size(), 4u);
  EXPECT_EQ(cs.roots().size(), 2u);
  EXPECT_EQ(cs.code_of(3), "40200");
}

TEST(ParseClassification, TopicIndexIsDepthFirstInInputOrder) {
  // Children listed after a sibling subtree still follow their parent in topic order.
  const auto cs = parse_csv("code,name,parent\nA,a,\nB,b,\nA1,a1,A\nB1,b1,B\nA2,a2,A\nA11,a11,A1\n");
  EXPECT_EQ(cs.codes(), (std::vector<std::string>{"A", "A1", "A11", "A2", "B", "B1"}));
  EXPECT_EQ(cs.node("A").children, (std::vector<std::string>{"A1", "A2"}));
}

TEST(ParseClassification, ChildMayPrecedeParent) {
  const auto cs = parse_csv("code,name,parent\nB,b,A\nA,a,\n");
  EXPECT_EQ(cs.codes(), (std::vector<std::string>{"A", "B"}));
}

TEST(ParseClassification, MissingParentIsAnError) {
  try {
    parse_csv("code,name,parent\n10000,x,\n40200,Administrative Science,99999\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("99999"), std::string::npos);
  }
}

TEST(ParseClassification, Errors) {
  EXPECT_THROW(parse_csv(""), ParseError);
  EXPECT_THROW(parse_csv("code,name,parent\n"), ParseError);
  EXPECT_THROW(parse_csv("code,name,parent\nA,a,\nA,b,\n"), ParseError);
  EXPECT_THROW(parse_csv("code,name,parent\nA,a,B\nB,b,A\n"), ParseError);
  EXPECT_THROW(parse_csv("code,name,parent\nR,r,\nA,a,A\n"), ParseError);
  EXPECT_THROW(parse_csv("code;name;parent\nA;a;\n"), ParseError);
  EXPECT_THROW(parse_csv("code,name,parent\nA,\"a,\n"), ParseError);
}

TEST(ParseClassification, LevelBound) {
  const std::string four = "code,name,parent\n1,a,\n2,b,1\n3,c,2\n4,d,3\n";
  EXPECT_NO_THROW(parse_csv(four));
  EXPECT_THROW(parse_csv(four + "5,e,4\n"), ParseError);
  EXPECT_NO_THROW(parse_csv(four + "5,e,4\n", 5));
}

TEST(ParseClassification, FixtureHasFourLevels) {
  const auto cs = load_classification(KOSLINKER_FIXTURES "/classification.csv");
  EXPECT_EQ(cs.size(), 20u);
  int deepest = 0;
  for (TopicId k = 0; k < cs.size(); ++k) deepest = std::max(deepest, cs.node_at(k).level);
  EXPECT_EQ(deepest, 4);
  EXPECT_EQ(cs.node("40220").level, 3);
  EXPECT_EQ(cs.ancestors(*cs.topic_of("40211")),
            (std::vector<TopicId>{*cs.topic_of("40210"), *cs.topic_of("40200"), *cs.topic_of("40000")}));
}

// Random forests: parent walks terminate within K steps, levels follow
// parents, and the topic index round-trips.
TEST(ClassificationProperty, RandomForestsAreConsistent) {
  std::mt19937 gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 40);
    std::vector<ClassRecord> rows;
    std::vector<int> depth(n, 1);
    for (int i = 0; i < n; ++i) {
      ClassRecord r{"c" + std::to_string(i), "class " + std::to_string(i), "", static_cast<std::size_t>(i + 2)};
      if (i > 0 && gen() % 4 != 0) {
        const int p = static_cast<int>(gen() % i);
        if (depth[p] < 4) {
          r.parent = "c" + std::to_string(p);
          depth[i] = depth[p] + 1;
        }
      }
      rows.push_back(r);
    }
    std::shuffle(rows.begin(), rows.end(), gen);
    const auto cs = ClassificationSystem::build(rows);
    ASSERT_EQ(cs.size(), static_cast<std::size_t>(n));
    for (TopicId t = 0; t < cs.size(); ++t) {
      EXPECT_EQ(cs.topic_of(cs.code_of(t)), t);
      const auto& node = cs.node_at(t);
      EXPECT_EQ(node.level, depth[std::stoi(node.code.substr(1))]);
      const auto up = cs.ancestors(t);
      EXPECT_LT(up.size(), cs.size());
      EXPECT_EQ(up.size() + 1, static_cast<std::size_t>(node.level));
      if (node.parent_code) {
        EXPECT_EQ(node.level, cs.node(*node.parent_code).level + 1);
      }
    }
  }
}

TEST(ParseThesaurus, PreferredLabelLookup) {
  const auto t = parse_jsonl(R"({"id":"d1","label":"public administration","alt":[]})");
  EXPECT_EQ(t.resolve("public administration"), "d1");
}

TEST(ParseThesaurus, AltLabelResolvesToOwner) {
  const auto t = parse_jsonl(R"({"id":"d1","label":"reform","alt":["reforms"]})");
  EXPECT_EQ(t.resolve("reforms"), "d1");
  EXPECT_EQ(resolve_label(t, "reforms"), resolve_label(t, "reform"));
}

TEST(ParseThesaurus, DuplicateAltIsAnError) {
  try {
    parse_jsonl("{\"id\":\"d1\",\"label\":\"a\",\"alt\":[\"mgmt\"]}\n{\"id\":\"d2\",\"label\":\"b\",\"alt\":[\"mgmt\"]}\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("mgmt"), std::string::npos);
  }
}

TEST(ParseThesaurus, Errors) {
  EXPECT_THROW(parse_jsonl("{\"id\":\"d1\",\"label\":\"a\"}\n{\"id\":\"d2\",\"label\":\"A\"}\n"), ParseError);
  EXPECT_THROW(parse_jsonl("{\"id\":\"d1\",\"label\":\"a\"}\n{\"id\":\"d2\",\"label\":\"b\",\"alt\":[\"a\"]}\n"),
               ParseError);
  EXPECT_THROW(parse_jsonl("{\"id\":\"d1\",\"label\":\"a\"}\n{\"id\":\"d1\",\"label\":\"b\"}\n"), ParseError);
  EXPECT_THROW(parse_jsonl("{\"id\":\"d1\"}\n"), ParseError);
  EXPECT_THROW(parse_jsonl("{\"id\":\"d1\",\"label\":\"a\",\"alt\":\"b\"}\n"), ParseError);
  EXPECT_THROW(parse_jsonl("not json\n"), ParseError);
}

TEST(ResolveLabel, NormalizationAndAbsence) {
  const auto t = load_thesaurus(KOSLINKER_FIXTURES "/thesaurus.jsonl");
  EXPECT_EQ(t.resolve("Public Administration"), "t-10001");
  EXPECT_EQ(t.resolve("  public   ADMINISTRATION "), "t-10001");
  EXPECT_EQ(t.resolve("öffentliche verwaltung"), "t-10012");
  EXPECT_FALSE(t.resolve("no such descriptor").has_value());
  EXPECT_FALSE(t.resolve("").has_value());
}

TEST(ResolveLabel, EveryAltMatchesItsPreferredLabel) {
  const auto t = load_thesaurus(KOSLINKER_FIXTURES "/thesaurus.jsonl");
  for (const auto& d : t.descriptors()) {
    ASSERT_EQ(t.resolve(d.preferred_label), d.id);
    for (const auto& alt : d.alt_labels) EXPECT_EQ(t.resolve(alt), t.resolve(d.preferred_label)) << alt;
  }
}

}  // namespace
}  // namespace koslinker
