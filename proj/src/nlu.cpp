#include "convo/nlu.hpp"
#include "convo/bot.hpp"
#include "convo/kernels.hpp"

#include <algorithm>
#include <stdexcept>

namespace convo {

std::string_view to_string(EntityType type) {
  switch (type) {
    case EntityType::Person: return "PERSON";
    case EntityType::Org: return "ORG";
    case EntityType::Place: return "PLACE";
    case EntityType::Thing: return "THING";
  }
  return "THING";
}

std::optional<EntityType> parse_entity_type(std::string_view text) {
  if (text == "PERSON") return EntityType::Person;
  if (text == "ORG") return EntityType::Org;
  if (text == "PLACE") return EntityType::Place;
  if (text == "THING") return EntityType::Thing;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Intent classification

IntentClassifier::IntentClassifier(std::vector<IntentDefinition> intents,
                                   const EmbeddingTable& table, const WordSet& stopwords)
    : intents_(std::move(intents)), dimension_(table.dimension()) {
  example_words_.resize(intents_.size());
  example_embedded_.resize(intents_.size());
  for (std::size_t i = 0; i < intents_.size(); ++i) {
    for (std::size_t e = 0; e < intents_[i].examples.size(); ++e) {
      const auto tokens = tokenize(intents_[i].examples[e]);
      example_words_[i].push_back(content_word_set(tokens, stopwords));
      auto vec = embed_utterance(tokens, table, stopwords);
      example_embedded_[i].push_back(vec.has_value());
      if (!vec) continue;
      matrix_.insert(matrix_.end(), vec->begin(), vec->end());
      row_norms_.push_back(kernels::norm(*vec));
      row_intent_.push_back(i);
      row_example_.push_back(e);
    }
  }
}

const IntentDefinition* IntentClassifier::find(std::string_view name) const {
  for (const auto& intent : intents_) {
    if (intent.name == name) return &intent;
  }
  return nullptr;
}

double IntentClassifier::threshold_for(std::string_view name, double default_threshold) const {
  const auto* intent = find(name);
  if (intent != nullptr && intent->threshold) return *intent->threshold;
  return default_threshold;
}

std::vector<IntentScore> IntentClassifier::classify(std::span<const Token> tokens,
                                                    const EmbeddingTable& table,
                                                    const WordSet& stopwords) const {
  std::vector<IntentScore> ranking;
  if (intents_.empty()) return ranking;

  constexpr double kUnset = -2.0;
  std::vector<double> best(intents_.size(), kUnset);
  const auto words = content_word_set(tokens, stopwords);
  const auto query = embed_utterance(tokens, table, stopwords);

  if (query && query->size() == dimension_) {
    std::vector<double> scores(row_intent_.size());
    kernels::cosine_rows(*query, matrix_, row_norms_, scores);
    for (std::size_t r = 0; r < scores.size(); ++r) {
      auto& b = best[row_intent_[r]];
      b = std::max(b, scores[r]);
    }
    // Examples with no in-vocabulary word fall back to word overlap.
    for (std::size_t i = 0; i < intents_.size(); ++i) {
      for (std::size_t e = 0; e < example_words_[i].size(); ++e) {
        if (!example_embedded_[i][e]) best[i] = std::max(best[i], jaccard(words, example_words_[i][e]));
      }
    }
  } else {
    for (std::size_t i = 0; i < intents_.size(); ++i) {
      for (const auto& ex : example_words_[i]) best[i] = std::max(best[i], jaccard(words, ex));
    }
  }

  ranking.reserve(intents_.size());
  for (std::size_t i = 0; i < intents_.size(); ++i) {
    ranking.push_back({intents_[i].name, best[i] == kUnset ? 0.0 : best[i]});
  }
  std::sort(ranking.begin(), ranking.end(), [](const IntentScore& a, const IntentScore& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.name < b.name;
  });
  return ranking;
}

std::vector<IntentScore> classify_intent(std::span<const Token> tokens,
                                         const IntentClassifier& classifier,
                                         const EmbeddingTable& table, const WordSet& stopwords) {
  return classifier.classify(tokens, table, stopwords);
}

// ---------------------------------------------------------------------------
// Topic detection

TopicScore detect_topic(std::span<const Token> tokens, std::span<const TopicDefinition> topics) {
  std::set<std::string> present;
  for (const auto& t : tokens) present.insert(t.normalized);

  const TopicDefinition* best = nullptr;
  double best_raw = 0.0;
  for (const auto& topic : topics) {
    double raw = 0.0;
    for (const auto& [word, weight] : topic.keywords) {
      if (present.contains(word)) raw += weight;
    }
    if (raw <= 0.0) continue;
    if (best == nullptr || raw > best_raw || (raw == best_raw && topic.name < best->name)) {
      best = &topic;
      best_raw = raw;
    }
  }
  if (best == nullptr) return {"general", 0.0};
  return {best->name, best_raw / (1.0 + best_raw)};
}

// ---------------------------------------------------------------------------
// Entity linking

namespace {

std::string alias_key(std::span<const Token> tokens) {
  std::string key;
  for (const auto& t : tokens) {
    if (!key.empty()) key += '\x1f';
    key += t.normalized;
  }
  return key;
}

}  // namespace

Gazetteer::Gazetteer(std::vector<EntityRecord> records, const WordSet& stopwords)
    : records_(std::move(records)), stopwords_(stopwords) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    auto& rec = records_[i];
    if (!by_id_.emplace(rec.id, i).second) {
      throw std::invalid_argument("duplicate entity id '" + rec.id + "'");
    }
    if (std::find(rec.aliases.begin(), rec.aliases.end(), rec.canonical) == rec.aliases.end()) {
      rec.aliases.insert(rec.aliases.begin(), rec.canonical);
    }
    auto& ctx = context_words_[rec.id];
    for (const auto& w : content_words(tokenize(rec.description), stopwords_)) ctx.insert(w);
    for (const auto& alias : rec.aliases) {
      const auto tokens = tokenize(alias);
      if (tokens.empty()) continue;
      for (const auto& w : content_words(tokens, stopwords_)) ctx.insert(w);
      auto& ids = alias_index_[alias_key(tokens)];
      if (std::find(ids.begin(), ids.end(), rec.id) == ids.end()) ids.push_back(rec.id);
      max_alias_tokens_ = std::max(max_alias_tokens_, tokens.size());
    }
  }
  for (auto& [key, ids] : alias_index_) std::sort(ids.begin(), ids.end());
}

const EntityRecord* Gazetteer::find(std::string_view id) const {
  const auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &records_[it->second];
}

std::vector<EntityMention> Gazetteer::link(std::span<const Token> tokens) const {
  std::vector<EntityMention> mentions;
  const std::size_t n = tokens.size();
  std::size_t i = 0;
  while (i < n) {
    bool matched = false;
    for (std::size_t len = std::min(max_alias_tokens_, n - i); len >= 1; --len) {
      auto it = alias_index_.find(alias_key(tokens.subspan(i, len)));
      if (it == alias_index_.end()) {
        // "KLM's" links like "KLM".
        const auto& last = tokens[i + len - 1].normalized;
        if (last.size() <= 2 || !last.ends_with("'s")) continue;
        std::vector<Token> stem(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                tokens.begin() + static_cast<std::ptrdiff_t>(i + len));
        stem.back().normalized.resize(last.size() - 2);
        it = alias_index_.find(alias_key(stem));
        if (it == alias_index_.end()) continue;
      }

      // Words of the utterance outside the mention, for disambiguation.
      std::set<std::string> others;
      for (std::size_t k = 0; k < n; ++k) {
        if (k >= i && k < i + len) continue;
        const auto& w = tokens[k].normalized;
        if (is_punctuation_token(w) || stopwords_.contains(w)) continue;
        others.insert(w);
      }

      EntityMention m;
      m.begin = i;
      m.end = i + len;
      m.candidates = it->second;
      std::size_t best_overlap = 0;
      bool first = true;
      for (const auto& id : m.candidates) {
        const auto& ctx = context_words_.at(id);
        std::size_t overlap = 0;
        for (const auto& w : others) {
          if (ctx.contains(w)) ++overlap;
        }
        if (first || overlap > best_overlap) {
          best_overlap = overlap;
          m.resolved = id;
          first = false;
        }
      }
      m.type = find(m.resolved)->type;
      m.score = static_cast<double>(best_overlap);
      mentions.push_back(std::move(m));
      i += len;
      matched = true;
      break;
    }
    if (!matched) ++i;
  }
  return mentions;
}

std::vector<EntityMention> link_entities(std::span<const Token> tokens, const Gazetteer& gazetteer) {
  return gazetteer.link(tokens);
}

// ---------------------------------------------------------------------------

SemanticFrame analyze(std::string_view resolved, const BotDefinition& bot) {
  SemanticFrame frame;
  frame.raw = std::string(resolved);
  frame.resolved = std::string(resolved);
  frame.tokens = tokenize(resolved);
  frame.topic = detect_topic(frame.tokens, bot.topics);
  frame.intents = classify_intent(frame.tokens, bot.intents, bot.embeddings, bot.stopwords);
  frame.mentions = link_entities(frame.tokens, bot.gazetteer);
  return frame;
}

}  // namespace convo
