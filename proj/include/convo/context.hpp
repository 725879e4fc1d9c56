#pragma once

// Conversation state and pronoun resolution against recently mentioned entities.

#include "convo/nlu.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace convo {

struct HistoryRecord;

enum class Speaker { User, Bot };

std::string_view to_string(Speaker speaker);

struct Turn {
  std::size_t index = 0;
  Speaker speaker = Speaker::User;
  std::string raw;
  std::string resolved;
  std::string source;  // strategy tag for bot turns, "-" for user turns
  std::int64_t timestamp_ms = 0;

  bool operator==(const Turn&) const = default;
};

struct SalienceEntry {
  std::string entity_id;
  EntityType type = EntityType::Thing;
  std::size_t last_turn = 0;

  bool operator==(const SalienceEntry&) const = default;
};

/// Turns may be a recent suffix of the full history; indices stay absolute.
struct ConversationState {
  std::string conversation_id;
  std::vector<Turn> turns;
  std::vector<SalienceEntry> salience;  // most recent first

  std::size_t next_index() const { return turns.empty() ? 0 : turns.back().index + 1; }
};

inline constexpr std::size_t kDefaultCorefWindow = 5;

/// The last min(k, |turns|) turns, oldest first.
std::vector<Turn> recent_utterances(const ConversationState& state, std::size_t k);

/// Replaces resolvable pronouns with canonical entity names from salience
/// entries no older than `window` turns. Possessive forms gain "'s".
std::string resolve_coreference(std::string_view raw, const ConversationState& state,
                                 const Gazetteer& gazetteer,
                                 std::size_t window = kDefaultCorefWindow);

/// Appends the user turn and the bot reply and refreshes salience from the
/// frame's mentions.
void update_state(ConversationState& state, const SemanticFrame& frame, std::string_view reply,
                  std::string_view source, std::int64_t user_ms, std::int64_t bot_ms);

/// Rebuilds state from persisted records, re-linking each user turn's
/// resolved text to recover salience.
ConversationState restore_state(std::string conversation_id,
                                std::span<const HistoryRecord> records, const Gazetteer& gazetteer);

}  // namespace convo
