#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace convo {

/// One token of an utterance. [begin, end) are byte offsets into the source.
struct Token {
  std::string surface;
  std::string normalized;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Token&) const = default;
};

using WordSet = std::unordered_set<std::string>;

/// ASCII case folding; bytes outside ASCII pass through untouched.
std::string case_fold(std::string_view text);

bool is_space(char c);
/// One of . , ! ? ; : ' " ( )
bool is_punctuation(char c);
bool is_punctuation_token(std::string_view token);

/// Whitespace split, then leading/trailing punctuation peeled off one
/// character per token. Interior apostrophes and hyphens stay put.
std::vector<Token> tokenize(std::string_view raw);

/// Normalized tokens that are neither stopwords nor punctuation, in order.
std::vector<std::string> content_words(std::span<const Token> tokens, const WordSet& stopwords);

std::set<std::string> content_word_set(std::span<const Token> tokens, const WordSet& stopwords);

/// Normalized non-punctuation tokens (stopwords kept).
std::set<std::string> word_set(std::span<const Token> tokens);

/// |a ∩ b| / |a ∪ b|; two empty sets give 0.
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

/// Joins surfaces with single spaces, omitting the space before punctuation tokens.
std::string join_surfaces(std::span<const std::string> surfaces);

std::string_view trim(std::string_view text);

/// Splits on a single-character separator, keeping empty fields.
std::vector<std::string> split(std::string_view text, char sep);

}  // namespace convo
