#include "convo/retrieval.hpp"
#include "convo/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

namespace convo {

RetrievalIndex::RetrievalIndex(std::vector<Document> documents, WordSet stopwords)
    : documents_(std::move(documents)), stopwords_(std::move(stopwords)) {
  std::vector<std::map<std::string, std::size_t>> counts;
  counts.reserve(documents_.size());
  for (const auto& doc : documents_) {
    auto& tf = counts.emplace_back();
    for (auto& w : content_words(tokenize(doc.text), stopwords_)) ++tf[std::move(w)];
    for (const auto& [w, c] : tf) vocabulary_.emplace(w, 0);
  }
  std::uint32_t next = 0;
  for (auto& [w, id] : vocabulary_) id = next++;

  df_.assign(vocabulary_.size(), 0);
  for (const auto& tf : counts) {
    for (const auto& [w, c] : tf) ++df_[vocabulary_.at(w)];
  }

  vectors_.reserve(documents_.size());
  for (const auto& tf : counts) {
    kernels::SparseVector v;
    double sq = 0.0;
    // std::map iterates in word order, which is term-id order.
    for (const auto& [w, c] : tf) {
      const double weight = static_cast<double>(c) * idf(w);
      v.terms.push_back(vocabulary_.at(w));
      v.weights.push_back(weight);
      sq += weight * weight;
    }
    v.norm = std::sqrt(sq);
    vectors_.push_back(std::move(v));
  }
}

std::size_t RetrievalIndex::df(std::string_view word) const {
  const auto it = vocabulary_.find(word);
  return it == vocabulary_.end() ? 0 : df_[it->second];
}

double RetrievalIndex::idf(std::string_view word) const {
  if (documents_.empty()) return 1.0;
  const double n = static_cast<double>(documents_.size());
  return std::log(n / (1.0 + static_cast<double>(df(word)))) + 1.0;
}

std::vector<double> RetrievalIndex::scores(std::span<const std::string> query_words) const {
  std::vector<double> out(documents_.size(), 0.0);
  if (documents_.empty() || query_words.empty()) return out;

  std::map<std::string, std::size_t, std::less<>> tf;
  for (const auto& w : query_words) ++tf[w];

  kernels::SparseVector query;
  double sq = 0.0;
  for (const auto& [w, c] : tf) {
    const double weight = static_cast<double>(c) * idf(w);
    sq += weight * weight;
    const auto it = vocabulary_.find(w);
    if (it == vocabulary_.end()) continue;
    query.terms.push_back(it->second);
    query.weights.push_back(weight);
  }
  const double query_norm = std::sqrt(sq);
  query.norm = query_norm;
  kernels::sparse_cosine(query, query_norm, vectors_, out);
  return out;
}

std::vector<RetrievalHit> RetrievalIndex::search(std::span<const std::string> query_words,
                                                 std::size_t k) const {
  const auto all = scores(query_words);
  std::vector<RetrievalHit> hits;
  for (std::size_t d = 0; d < all.size(); ++d) {
    if (all[d] > 0.0) hits.push_back({d, all[d]});
  }
  std::sort(hits.begin(), hits.end(), [this](const RetrievalHit& a, const RetrievalHit& b) {
    if (a.score != b.score) return a.score > b.score;
    const auto& da = documents_[a.document];
    const auto& db = documents_[b.document];
    if (da.timestamp_ms != db.timestamp_ms) return da.timestamp_ms > db.timestamp_ms;
    return da.id < db.id;
  });
  if (hits.size() > k) hits.resize(k);
  return hits;
}

RetrievalIndex RetrievalIndex::with_documents(std::vector<Document> extra) const {
  std::size_t next_id = 0;
  for (const auto& d : documents_) next_id = std::max(next_id, d.id + 1);
  auto docs = documents_;
  for (auto& d : extra) {
    d.id = next_id++;
    docs.push_back(std::move(d));
  }
  return RetrievalIndex(std::move(docs), stopwords_);
}

RetrievalIndex build_corpus_index(std::vector<Document> documents, const WordSet& stopwords) {
  return RetrievalIndex(std::move(documents), stopwords);
}

std::vector<FreshText> LocalFileSource::fetch(std::string_view query, std::size_t max_count) {
  std::ifstream in(path_);
  if (!in) throw LoadError(Located{path_.string(), 0, "cannot open fresh-text file"});

  const auto query_words = word_set(tokenize(query));
  std::vector<FreshText> found;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    std::int64_t ts = 0;
    if (tab == std::string::npos) {
      throw LoadError(Located{path_.string(), lineno, "expected timestamp_ms<TAB>text"});
    }
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + tab, ts);
    if (ec != std::errc() || ptr != line.data() + tab) {
      throw LoadError(Located{path_.string(), lineno, "invalid timestamp"});
    }
    std::string text = line.substr(tab + 1);
    if (!query_words.empty()) {
      const auto words = word_set(tokenize(text));
      const bool shares = std::any_of(words.begin(), words.end(),
                                      [&](const std::string& w) { return query_words.contains(w); });
      if (!shares) continue;
    }
    found.push_back({std::move(text), ts});
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const FreshText& a, const FreshText& b) { return a.timestamp_ms > b.timestamp_ms; });
  if (found.size() > max_count) found.resize(max_count);
  return found;
}

RetrievalIndex ingest(const RetrievalIndex& index, FreshTextSource& source, std::string_view query,
                      std::size_t max_count) {
  std::vector<Document> extra;
  for (auto& item : source.fetch(query, max_count)) {
    extra.push_back({0, std::move(item.text), item.timestamp_ms});
  }
  return index.with_documents(std::move(extra));
}

}  // namespace convo
