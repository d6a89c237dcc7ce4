#include "koslinker/text.hpp"

#include <sstream>

#include <gtest/gtest.h>

namespace koslinker {
namespace {

using Tokens = std::vector<std::string>;

TEST(Tokenize, LowercasesAndSplitsOnNonAlphanumerics) {
  EXPECT_EQ(tokenize("Die Verwaltung: modern!"), (Tokens{"die", "verwaltung", "modern"}));
}

TEST(Tokenize, EmptyInput) { EXPECT_TRUE(tokenize("").empty()); }

TEST(Tokenize, DropsSingleCharacterRuns) { EXPECT_EQ(tokenize("a bb"), (Tokens{"bb"})); }

TEST(Tokenize, KeepsUnicodeLettersAndDigits) {
  EXPECT_EQ(tokenize("Öffentliche Verwaltung 2013, Straße"), (Tokens{"öffentliche", "verwaltung", "2013", "straße"}));
}

TEST(Tokenize, MinimumLengthCountsCodePointsNotBytes) {
  // "ü" is two bytes but one code point.
  EXPECT_TRUE(tokenize("ü").empty());
  EXPECT_EQ(tokenize("üb"), (Tokens{"üb"}));
}

TEST(Tokenize, DecomposedInputIsComposedFirst) {
  // u + combining diaeresis
  EXPECT_EQ(tokenize("Mu\xCC\x88nchen"), (Tokens{"münchen"}));
}

TEST(Tokenizer, RemovesStopwords) {
  std::istringstream list("# German\nDie\n\nder\n");
  const Tokenizer tok(read_stopwords(list));
  EXPECT_EQ(tok("Die Reform der Verwaltung"), (Tokens{"reform", "verwaltung"}));
}

TEST(NormalizeLabel, FoldsCaseTrimsAndCollapsesWhitespace) {
  EXPECT_EQ(normalize_label("  Public \t Administration "), "public administration");
  EXPECT_EQ(normalize_label("Public Administration"), normalize_label("public administration"));
}

TEST(NormalizeLabel, NfcAndFullCaseFolding) {
  EXPECT_EQ(normalize_label("O\xCC\x88" "ffentlich"), normalize_label("öffentlich"));
  EXPECT_EQ(normalize_label("STRASSE"), normalize_label("straße"));
}

TEST(NormalizeLabel, EmptyAndBlank) {
  EXPECT_EQ(normalize_label(""), "");
  EXPECT_EQ(normalize_label(" \n "), "");
}

}  // namespace
}  // namespace koslinker
