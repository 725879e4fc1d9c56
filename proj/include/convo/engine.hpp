#pragma once

// One full conversational turn: coreference -> NLU -> dialogue manager ->
// reply generator -> history.

#include "convo/bot.hpp"
#include "convo/config.hpp"
#include "convo/context.hpp"
#include "convo/dialogue.hpp"
#include "convo/history.hpp"
#include "convo/replygen.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace convo {

/// Epoch milliseconds.
using Clock = std::function<std::int64_t()>;

Clock system_clock();
/// start, start+step, start+2·step, ... (thread-safe).
Clock counting_clock(std::int64_t start, std::int64_t step);

struct ChatRequest {
  std::string conversation_id;
  std::string text;
  std::optional<bool> debug;
};

struct MentionDebug {
  std::string entity_id;
  std::string type;
  std::string surface;

  bool operator==(const MentionDebug&) const = default;
};

struct FrameDebug {
  TopicScore topic;
  std::optional<IntentScore> top_intent;
  std::string resolved;
  std::vector<MentionDebug> mentions;

  bool operator==(const FrameDebug&) const = default;
};

struct ChatResponse {
  std::string reply;
  Source source = Source::Fallback;
  std::size_t rank_size = 0;
  std::optional<FrameDebug> frame_debug;

  bool operator==(const ChatResponse&) const = default;
};

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// 1-128 characters of [A-Za-z0-9_-].
bool valid_conversation_id(std::string_view id);
/// Throws ValidationError for a bad id or text without any token.
void validate_request(const ChatRequest& request);

/// Everything computed for one turn, before anything is persisted.
struct TurnResult {
  SemanticFrame frame;
  std::vector<CandidateReply> candidates;
  FilterOutcome filtered;
  std::vector<RankedReply> ranked;
  std::string reply;
  Source source = Source::Fallback;
};

/// The pure part of a turn. `state` is the conversation before this turn.
TurnResult run_turn(std::string_view raw, const ConversationState& state, const BotDefinition& bot,
                    const EngineConfig& config);

FrameDebug make_frame_debug(const SemanticFrame& frame);

class Engine {
 public:
  Engine(std::shared_ptr<const BotDefinition> bot, std::shared_ptr<HistoryStore> store,
         ConfigOverrides overrides = {}, Clock clock = system_clock());

  /// Turns sharing a conversation id are serialized; distinct ids run concurrently.
  /// Throws ValidationError, StorageError or LoadError (corrupt history).
  ChatResponse respond(const ChatRequest& request);

  std::shared_ptr<const BotDefinition> bot() const;
  EngineConfig config() const;

  /// Loads `dir` and swaps it in for later turns. On failure throws LoadError
  /// and keeps the current bot.
  void reload(const std::filesystem::path& dir);

  std::vector<HistoryRecord> history(const std::string& conversation_id,
                                     std::size_t limit = kAllRecords) const;

  ConversationState load_state(const std::string& conversation_id, const BotDefinition& bot,
                               const EngineConfig& config) const;

 private:
  std::shared_ptr<std::mutex> conversation_lock(const std::string& id);

  mutable std::mutex bot_mutex_;
  std::shared_ptr<const BotDefinition> bot_;
  std::shared_ptr<HistoryStore> store_;
  ConfigOverrides overrides_;
  Clock clock_;

  std::mutex locks_mutex_;
  std::map<std::string, std::shared_ptr<std::mutex>> locks_;
};

}  // namespace convo
