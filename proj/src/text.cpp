#include "convo/text.hpp"

#include <algorithm>

namespace convo {

std::string case_fold(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_punctuation(char c) {
  switch (c) {
    case '.': case ',': case '!': case '?': case ';': case ':':
    case '\'': case '"': case '(': case ')':
      return true;
    default:
      return false;
  }
}

bool is_punctuation_token(std::string_view token) {
  return token.size() == 1 && is_punctuation(token[0]);
}

std::vector<Token> tokenize(std::string_view raw) {
  std::vector<Token> tokens;
  auto emit = [&](std::size_t b, std::size_t e) {
    std::string surface(raw.substr(b, e - b));
    std::string normalized = case_fold(surface);
    tokens.push_back(Token{std::move(surface), std::move(normalized), b, e});
  };

  std::size_t i = 0;
  const std::size_t n = raw.size();
  while (i < n) {
    while (i < n && is_space(raw[i])) ++i;
    if (i == n) break;
    std::size_t end = i;
    while (end < n && !is_space(raw[end])) ++end;

    std::size_t b = i;
    while (b < end && is_punctuation(raw[b])) {
      emit(b, b + 1);
      ++b;
    }
    std::size_t e = end;
    while (e > b && is_punctuation(raw[e - 1])) --e;
    if (e > b) emit(b, e);
    for (std::size_t p = e; p < end; ++p) emit(p, p + 1);
    i = end;
  }
  return tokens;
}

std::vector<std::string> content_words(std::span<const Token> tokens, const WordSet& stopwords) {
  std::vector<std::string> out;
  for (const auto& t : tokens) {
    if (is_punctuation_token(t.normalized)) continue;
    if (stopwords.contains(t.normalized)) continue;
    out.push_back(t.normalized);
  }
  return out;
}

std::set<std::string> content_word_set(std::span<const Token> tokens, const WordSet& stopwords) {
  auto words = content_words(tokens, stopwords);
  return {words.begin(), words.end()};
}

std::set<std::string> word_set(std::span<const Token> tokens) {
  std::set<std::string> out;
  for (const auto& t : tokens) {
    if (!is_punctuation_token(t.normalized)) out.insert(t.normalized);
  }
  return out;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto& w : a) {
    if (b.contains(w)) ++common;
  }
  const std::size_t uni = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(uni);
}

std::string join_surfaces(std::span<const std::string> surfaces) {
  std::string out;
  for (const auto& s : surfaces) {
    if (!out.empty() && !is_punctuation_token(s)) out += ' ';
    out += s;
  }
  return out;
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return text;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(text.substr(start));
      break;
    }
    out.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace convo
