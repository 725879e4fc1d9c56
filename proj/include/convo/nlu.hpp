#pragma once

// Natural language understanding: utterance -> SemanticFrame.

#include "convo/embedding.hpp"
#include "convo/text.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace convo {

class BotDefinition;

enum class EntityType { Person, Org, Place, Thing };

std::string_view to_string(EntityType type);
std::optional<EntityType> parse_entity_type(std::string_view text);

struct IntentDefinition {
  std::string name;
  std::vector<std::string> examples;
  std::optional<double> threshold;  // overrides the global default when set
};

struct TopicDefinition {
  std::string name;
  std::map<std::string, double> keywords;  // normalized word -> weight > 0
};

struct EntityRecord {
  std::string id;
  std::string canonical;
  std::vector<std::string> aliases;  // always includes the canonical name
  EntityType type = EntityType::Thing;
  std::string description;
};

/// A gazetteer hit over frame tokens [begin, end).
struct EntityMention {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::vector<std::string> candidates;  // sorted by id
  std::string resolved;
  EntityType type = EntityType::Thing;  // type of the resolved record
  double score = 0.0;

  bool operator==(const EntityMention&) const = default;
};

struct TopicScore {
  std::string name;
  double confidence = 0.0;

  bool operator==(const TopicScore&) const = default;
};

struct IntentScore {
  std::string name;
  double similarity = 0.0;

  bool operator==(const IntentScore&) const = default;
};

struct SemanticFrame {
  std::string raw;
  std::string resolved;
  std::vector<Token> tokens;  // over `resolved`
  TopicScore topic{"general", 0.0};
  std::vector<IntentScore> intents;  // similarity desc, then name asc
  std::vector<EntityMention> mentions;

  bool operator==(const SemanticFrame&) const = default;
};

inline constexpr double kDefaultIntentThreshold = 0.75;

/// Intent examples embedded once at bot load.
class IntentClassifier {
 public:
  IntentClassifier() = default;
  IntentClassifier(std::vector<IntentDefinition> intents, const EmbeddingTable& table,
                   const WordSet& stopwords);

  /// Every intent once, scored by the best-matching example: cosine when
  /// both sides embed, token-set Jaccard otherwise.
  std::vector<IntentScore> classify(std::span<const Token> tokens, const EmbeddingTable& table,
                                    const WordSet& stopwords) const;

  const std::vector<IntentDefinition>& intents() const noexcept { return intents_; }
  const IntentDefinition* find(std::string_view name) const;
  double threshold_for(std::string_view name, double default_threshold) const;

 private:
  std::vector<IntentDefinition> intents_;
  std::size_t dimension_ = 0;
  // Examples that embed: row-major vectors, norms, owning intent.
  std::vector<double> matrix_;
  std::vector<double> row_norms_;
  std::vector<std::size_t> row_intent_;
  std::vector<std::size_t> row_example_;
  // Content-word sets of every example, [intent][example].
  std::vector<std::vector<std::set<std::string>>> example_words_;
  std::vector<std::vector<bool>> example_embedded_;
};

std::vector<IntentScore> classify_intent(std::span<const Token> tokens,
                                         const IntentClassifier& classifier,
                                         const EmbeddingTable& table, const WordSet& stopwords);

/// Weighted-keyword topic detection; ("general", 0) when nothing matches.
TopicScore detect_topic(std::span<const Token> tokens, std::span<const TopicDefinition> topics);

/// Alias index over entity records for longest-match linking.
class Gazetteer {
 public:
  Gazetteer() = default;
  Gazetteer(std::vector<EntityRecord> records, const WordSet& stopwords);

  std::vector<EntityMention> link(std::span<const Token> tokens) const;

  const EntityRecord* find(std::string_view id) const;
  const std::vector<EntityRecord>& records() const noexcept { return records_; }

 private:
  std::vector<EntityRecord> records_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::unordered_map<std::string, std::vector<std::string>> alias_index_;  // joined tokens -> ids
  std::unordered_map<std::string, std::set<std::string>> context_words_;   // id -> words
  std::size_t max_alias_tokens_ = 0;
  WordSet stopwords_;
};

std::vector<EntityMention> link_entities(std::span<const Token> tokens, const Gazetteer& gazetteer);

/// Full NLU pass over already-resolved text. Pure in (text, bot).
SemanticFrame analyze(std::string_view resolved, const BotDefinition& bot);

}  // namespace convo
