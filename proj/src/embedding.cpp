#include "convo/embedding.hpp"
#include "convo/errors.hpp"

#include <charconv>
#include <stdexcept>

namespace convo {

EmbeddingTable::EmbeddingTable(std::size_t dimension,
                               std::unordered_map<std::string, std::vector<double>> entries)
    : dimension_(dimension) {
  if (dimension == 0) throw std::invalid_argument("embedding dimension must be positive");
  for (auto& [word, vec] : entries) {
    if (vec.size() != dimension) {
      throw std::invalid_argument("vector for '" + word + "' has length " +
                                  std::to_string(vec.size()) + ", expected " +
                                  std::to_string(dimension));
    }
    entries_.insert_or_assign(case_fold(word), std::move(vec));
  }
}

const std::vector<double>* EmbeddingTable::lookup(std::string_view word) const {
  const auto it = entries_.find(case_fold(word));
  return it == entries_.end() ? nullptr : &it->second;
}

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

EmbeddingTable EmbeddingTable::parse(std::istream& in, const std::string& source_name) {
  std::vector<Located> errors;
  std::unordered_map<std::string, std::vector<double>> entries;
  std::size_t dim = 0;
  std::size_t dim_line = 0;
  std::string line;
  std::size_t lineno = 0;

  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      auto fields = split_spaces(body);
      if (fields.size() == 2 && fields[0] == "#dim") {
        std::size_t d = 0;
        auto [ptr, ec] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), d);
        if (ec != std::errc() || ptr != fields[1].data() + fields[1].size() || d == 0) {
          errors.push_back({source_name, lineno, "invalid #dim declaration"});
        } else if (dim != 0 && d != dim) {
          errors.push_back({source_name, lineno,
                            "dimension mismatch: #dim " + std::to_string(d) + " but rows have " +
                                std::to_string(dim)});
        } else {
          dim = d;
          dim_line = lineno;
        }
      }
      continue;
    }
    auto fields = split_spaces(body);
    if (fields.size() < 2) {
      errors.push_back({source_name, lineno, "expected a word followed by vector components"});
      continue;
    }
    std::vector<double> vec;
    vec.reserve(fields.size() - 1);
    bool ok = true;
    for (std::size_t k = 1; k < fields.size(); ++k) {
      double v = 0.0;
      if (!parse_double(fields[k], v)) {
        errors.push_back({source_name, lineno, "not a number: '" + std::string(fields[k]) + "'"});
        ok = false;
        break;
      }
      vec.push_back(v);
    }
    if (!ok) continue;
    if (dim == 0) {
      dim = vec.size();
      dim_line = lineno;
    } else if (vec.size() != dim) {
      errors.push_back({source_name, lineno,
                        "dimension mismatch: row has " + std::to_string(vec.size()) +
                            " components, expected " + std::to_string(dim) + " (from line " +
                            std::to_string(dim_line) + ")"});
      continue;
    }
    std::string word = case_fold(fields[0]);
    if (entries.contains(word)) {
      errors.push_back({source_name, lineno, "duplicate word '" + word + "'"});
      continue;
    }
    entries.emplace(std::move(word), std::move(vec));
  }
  if (dim == 0 && errors.empty()) {
    errors.push_back({source_name, 0, "no vectors and no #dim declaration"});
  }
  if (!errors.empty()) throw LoadError(std::move(errors));
  return EmbeddingTable(dim, std::move(entries));
}

std::optional<std::vector<double>> embed_utterance(std::span<const Token> tokens,
                                                   const EmbeddingTable& table,
                                                   const WordSet& stopwords) {
  if (table.dimension() == 0) return std::nullopt;
  std::vector<double> sum(table.dimension(), 0.0);
  std::size_t count = 0;
  for (const auto& t : tokens) {
    if (stopwords.contains(t.normalized)) continue;
    const auto* vec = table.lookup(t.normalized);
    if (vec == nullptr) continue;
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*vec)[i];
    ++count;
  }
  if (count == 0) return std::nullopt;
  for (auto& v : sum) v /= static_cast<double>(count);
  return sum;
}

}  // namespace convo
