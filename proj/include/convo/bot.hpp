#pragma once

#include "convo/config.hpp"
#include "convo/dialogue.hpp"
#include "convo/embedding.hpp"
#include "convo/generator.hpp"
#include "convo/nlu.hpp"
#include "convo/retrieval.hpp"
#include "convo/text.hpp"

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace convo {

/// Everything one bot needs at chat time. Built only by load_bot_definition
/// and never mutated afterwards; share it as shared_ptr<const BotDefinition>.
class BotDefinition {
 public:
  std::string name;
  WordSet stopwords;
  EmbeddingTable embeddings;
  IntentClassifier intents;
  std::vector<TopicDefinition> topics;
  Gazetteer gazetteer;
  std::vector<RuleTemplate> templates;
  std::vector<KnowledgeTriple> triples;
  PredicateLexicon predicates;
  WordSet filter;
  RetrievalIndex index;
  MarkovGenerator generator;
  ConfigOverrides overrides;
};

/// File names every bot directory must contain.
const std::vector<std::string>& required_bot_files();

/// Reads and cross-checks a bot directory. Throws LoadError listing every
/// located problem; never returns a partially valid bot.
std::shared_ptr<const BotDefinition> load_bot_definition(const std::filesystem::path& dir);

}  // namespace convo
