#pragma once

#include "convo/text.hpp"

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace convo {

/// Word vectors of one fixed dimension. Keys are case-folded on load and on
/// lookup; the table never changes after construction.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  /// Throws std::invalid_argument on dimension 0 or a vector of the wrong length.
  EmbeddingTable(std::size_t dimension, std::unordered_map<std::string, std::vector<double>> entries);

  /// Text format: optional `#dim d` line, then `word v1 ... vd` per line.
  /// Other `#` lines are comments. Throws LoadError located at `source_name`.
  static EmbeddingTable parse(std::istream& in, const std::string& source_name);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<double>* lookup(std::string_view word) const;

 private:
  std::size_t dimension_ = 0;
  std::unordered_map<std::string, std::vector<double>> entries_;
};

/// Mean vector of the non-stopword tokens present in the table, or nullopt
/// when no token qualifies.
std::optional<std::vector<double>> embed_utterance(std::span<const Token> tokens,
                                                   const EmbeddingTable& table,
                                                   const WordSet& stopwords);

}  // namespace convo
