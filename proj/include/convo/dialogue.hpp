#pragma once

// Dialogue manager: rule templates, then knowledge-base answers, then the
// retrieval + generative ensemble, with a canned fallback as last resort.

#include "convo/nlu.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace convo {

class BotDefinition;
class MarkovGenerator;
class RetrievalIndex;
struct ConversationState;
struct EngineConfig;

enum class Source { Backstory, Intent, Entity, Kb, Retrieval, Generative, Fallback };

/// "rule:backstory", "rule:intent", "rule:entity", "kb", "retrieval", "generative", "fallback".
std::string_view to_string(Source source);
std::optional<Source> parse_source(std::string_view text);
bool is_rule(Source source);

int default_priority(Source source);
/// rule < kb < retrieval < generative < fallback
int stage_order(Source source);

struct CandidateReply {
  std::string text;
  Source source = Source::Fallback;
  int priority = 0;
  double engagement = 0.0;
  std::vector<std::string> filter_flags;

  bool operator==(const CandidateReply&) const = default;
};

CandidateReply make_candidate(std::string text, Source source);

inline constexpr std::string_view kFallbackText = "I'm not sure I follow \xE2\x80\x94 tell me more.";
CandidateReply canned_fallback();
/// Injected instead of the canned fallback when the user typed the canned text itself.
inline constexpr std::string_view kAlternateFallbackText = "Could you put that another way?";
CandidateReply alternate_fallback();

enum class TemplateKind { Backstory, Intent, Entity };

std::optional<TemplateKind> parse_template_kind(std::string_view text);

struct PatternElement {
  enum class Kind { Literal, Wildcard, Placeholder };
  Kind kind = Kind::Literal;
  std::string word;                     // Literal: normalized token
  EntityType type = EntityType::Thing;  // Placeholder
};

struct RuleTemplate {
  TemplateKind kind = TemplateKind::Backstory;
  std::string trigger;
  std::string response;
  int priority = 0;
  std::vector<PatternElement> pattern;  // backstory only
  std::optional<EntityType> entity_type;  // entity only
};

/// Parses and checks one template. `priority` unset means the kind's default.
/// Throws std::invalid_argument naming the problem (unknown placeholder,
/// unbindable slot, bad type tag).
RuleTemplate make_template(TemplateKind kind, std::optional<int> priority, std::string trigger,
                           std::string response);

struct KnowledgeTriple {
  std::string subject;
  std::string predicate;
  std::string object;
  bool object_is_entity = false;
};

using PredicateLexicon = std::unordered_map<std::string, std::string>;

/// Candidates from every template the frame triggers, priority descending,
/// file order on ties.
std::vector<CandidateReply> match_templates(const SemanticFrame& frame,
                                            std::span<const RuleTemplate> templates,
                                            const BotDefinition& bot, double default_threshold);

std::optional<CandidateReply> answer_from_kb(const SemanticFrame& frame, const BotDefinition& bot);

std::vector<CandidateReply> retrieve_candidates(const SemanticFrame& frame,
                                                const RetrievalIndex& index, std::size_t k = 3);

struct Generation {
  CandidateReply candidate;
  bool degenerate = false;  // no chain walk was possible; text is the echo prompt
};

Generation generate_candidate(const SemanticFrame& frame, std::string_view conversation_id,
                              std::size_t turn_index, const MarkovGenerator& model,
                              const RetrievalIndex& index);

/// The strategy cascade. Never empty.
std::vector<CandidateReply> plan(const SemanticFrame& frame, const ConversationState& state,
                                 const BotDefinition& bot, const EngineConfig& config);

}  // namespace convo
