#include "koslinker/text.hpp"

#include <istream>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "koslinker/error.hpp"

namespace koslinker {
namespace {

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) throw Error("ICU NFC normalizer unavailable");
  return *n;
}

icu::UnicodeString to_nfc(std::string_view text) {
  const auto raw = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  UErrorCode status = U_ZERO_ERROR;
  auto out = nfc().normalize(raw, status);
  if (U_FAILURE(status)) throw Error("Unicode normalization failed");
  return out;
}

std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

}  // namespace

std::string normalize_label(std::string_view label) {
  auto folded = to_nfc(label).foldCase(U_FOLD_CASE_DEFAULT);
  UErrorCode status = U_ZERO_ERROR;
  folded = nfc().normalize(folded, status);
  if (U_FAILURE(status)) throw Error("Unicode normalization failed");

  icu::UnicodeString collapsed;
  bool pending_space = false;
  for (int32_t i = 0; i < folded.length();) {
    const UChar32 c = folded.char32At(i);
    i += U16_LENGTH(c);
    if (u_isUWhiteSpace(c)) {
      pending_space = !collapsed.isEmpty();
      continue;
    }
    if (pending_space) collapsed.append(static_cast<UChar>(u' '));
    pending_space = false;
    collapsed.append(c);
  }
  return to_utf8(collapsed);
}

Tokenizer::Tokenizer(std::unordered_set<std::string> stopwords, std::size_t min_length)
    : stopwords_(std::move(stopwords)), min_length_(min_length) {}

std::vector<std::string> Tokenizer::operator()(std::string_view text) const {
  std::vector<std::string> tokens;
  const auto lowered = to_nfc(text).toLower();

  icu::UnicodeString current;
  std::size_t code_points = 0;
  auto flush = [&] {
    if (code_points >= min_length_) {
      auto token = to_utf8(current);
      if (!stopwords_.contains(token)) tokens.push_back(std::move(token));
    }
    current.remove();
    code_points = 0;
  };

  for (int32_t i = 0; i < lowered.length();) {
    const UChar32 c = lowered.char32At(i);
    i += U16_LENGTH(c);
    if (u_isalnum(c)) {
      current.append(c);
      ++code_points;
    } else if (code_points > 0) {
      flush();
    }
  }
  if (code_points > 0) flush();
  return tokens;
}

std::vector<std::string> tokenize(std::string_view text) { return Tokenizer{}(text); }

std::unordered_set<std::string> read_stopwords(std::istream& in) {
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto lowered = to_utf8(to_nfc(line).toLower().trim());
    if (lowered.empty() || lowered.front() == '#') continue;
    words.insert(lowered);
  }
  return words;
}

}  // namespace koslinker
