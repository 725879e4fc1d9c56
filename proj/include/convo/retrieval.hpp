#pragma once

#include "convo/kernels.hpp"
#include "convo/text.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace convo {

struct Document {
  std::size_t id = 0;
  std::string text;
  std::int64_t timestamp_ms = 0;
};

struct RetrievalHit {
  std::size_t document = 0;  // position in RetrievalIndex::documents()
  double score = 0.0;
};

/// TF-IDF index over short documents. tf is the raw count of a content word
/// in the document; idf(w) = ln(N / (1 + df(w))) + 1.
class RetrievalIndex {
 public:
  RetrievalIndex() = default;
  RetrievalIndex(std::vector<Document> documents, WordSet stopwords);

  std::size_t size() const noexcept { return documents_.size(); }
  const std::vector<Document>& documents() const noexcept { return documents_; }
  const WordSet& stopwords() const noexcept { return stopwords_; }

  std::size_t df(std::string_view word) const;
  double idf(std::string_view word) const;

  /// Cosine of the query's tf-idf vector against every document, in document order.
  std::vector<double> scores(std::span<const std::string> query_words) const;

  /// Top k documents with score > 0; ties go to the newer document, then the lower id.
  std::vector<RetrievalHit> search(std::span<const std::string> query_words, std::size_t k) const;

  /// A new index over the current documents plus `extra` (ids reassigned past the current max).
  RetrievalIndex with_documents(std::vector<Document> extra) const;

 private:
  std::vector<Document> documents_;
  WordSet stopwords_;
  std::map<std::string, std::uint32_t, std::less<>> vocabulary_;  // sorted: term ids follow word order
  std::vector<std::size_t> df_;
  std::vector<kernels::SparseVector> vectors_;
};

RetrievalIndex build_corpus_index(std::vector<Document> documents, const WordSet& stopwords);

struct FreshText {
  std::string text;
  std::int64_t timestamp_ms = 0;
};

/// Source of recent short texts to ingest into the retrieval index.
class FreshTextSource {
 public:
  virtual ~FreshTextSource() = default;
  virtual std::vector<FreshText> fetch(std::string_view query, std::size_t max_count) = 0;
};

/// Reads `timestamp_ms<TAB>text` lines from a local file. Returns the newest
/// lines sharing at least one word with the query (all lines for an empty query).
class LocalFileSource : public FreshTextSource {
 public:
  explicit LocalFileSource(std::filesystem::path path) : path_(std::move(path)) {}
  std::vector<FreshText> fetch(std::string_view query, std::size_t max_count) override;

 private:
  std::filesystem::path path_;
};

RetrievalIndex ingest(const RetrievalIndex& index, FreshTextSource& source, std::string_view query,
                      std::size_t max_count);

}  // namespace convo
