#include "convo/engine.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>

namespace convo {

Clock system_clock() {
  return [] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
  };
}

Clock counting_clock(std::int64_t start, std::int64_t step) {
  auto next = std::make_shared<std::atomic<std::int64_t>>(start);
  return [next, step] { return next->fetch_add(step); };
}

bool valid_conversation_id(std::string_view id) {
  if (id.empty() || id.size() > 128) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '-';
  });
}

void validate_request(const ChatRequest& request) {
  if (!valid_conversation_id(request.conversation_id)) {
    throw ValidationError("conversation_id must be 1-128 characters of [A-Za-z0-9_-]");
  }
  if (tokenize(request.text).empty()) throw ValidationError("text must not be empty");
}

TurnResult run_turn(std::string_view raw, const ConversationState& state, const BotDefinition& bot,
                    const EngineConfig& config) {
  TurnResult r;
  const auto resolved = resolve_coreference(raw, state, bot.gazetteer, config.coref_window);
  r.frame = analyze(resolved, bot);
  r.frame.raw = std::string(raw);

  r.candidates = plan(r.frame, state, bot, config);
  r.filtered = filter_candidates(r.candidates, bot.filter, r.frame);
  for (auto& c : r.filtered.survivors) c.engagement = engagement_score(c, r.frame, state, bot.gazetteer);
  r.ranked = rank_candidates(r.filtered.survivors);

  const auto& best = r.ranked.front().candidate;
  r.reply = realize(best.text);
  r.source = best.source;
  return r;
}

FrameDebug make_frame_debug(const SemanticFrame& frame) {
  FrameDebug d;
  d.topic = frame.topic;
  if (!frame.intents.empty()) d.top_intent = frame.intents.front();
  d.resolved = frame.resolved;
  for (const auto& m : frame.mentions) {
    std::vector<std::string> words;
    for (std::size_t i = m.begin; i < m.end; ++i) words.push_back(frame.tokens[i].surface);
    d.mentions.push_back({m.resolved, std::string(to_string(m.type)), join_surfaces(words)});
  }
  return d;
}

// ---------------------------------------------------------------------------

Engine::Engine(std::shared_ptr<const BotDefinition> bot, std::shared_ptr<HistoryStore> store,
               ConfigOverrides overrides, Clock clock)
    : bot_(std::move(bot)), store_(std::move(store)), overrides_(overrides), clock_(std::move(clock)) {}

std::shared_ptr<const BotDefinition> Engine::bot() const {
  std::lock_guard lock(bot_mutex_);
  return bot_;
}

EngineConfig Engine::config() const { return resolve_config(overrides_, bot()->overrides); }

void Engine::reload(const std::filesystem::path& dir) {
  auto fresh = load_bot_definition(dir);
  std::lock_guard lock(bot_mutex_);
  bot_ = std::move(fresh);
}

std::vector<HistoryRecord> Engine::history(const std::string& conversation_id, std::size_t limit) const {
  return store_->load_history(conversation_id, limit);
}

std::shared_ptr<std::mutex> Engine::conversation_lock(const std::string& id) {
  std::lock_guard lock(locks_mutex_);
  auto& m = locks_[id];
  if (!m) m = std::make_shared<std::mutex>();
  return m;
}

ConversationState Engine::load_state(const std::string& conversation_id, const BotDefinition& bot,
                                     const EngineConfig& config) const {
  // Enough records for the coreference window and the last five bot turns.
  const std::size_t keep = std::max<std::size_t>(32, config.coref_window + 2);
  const auto records = store_->load_history(conversation_id, keep);
  return restore_state(conversation_id, records, bot.gazetteer);
}

ChatResponse Engine::respond(const ChatRequest& request) {
  validate_request(request);
  const auto bot = this->bot();
  const auto config = resolve_config(overrides_, bot->overrides);

  const auto guard = conversation_lock(request.conversation_id);
  std::lock_guard lock(*guard);

  const auto state = load_state(request.conversation_id, *bot, config);
  const auto turn = run_turn(request.text, state, *bot, config);

  auto next = state;
  const auto user_ms = clock_();
  const auto bot_ms = clock_();
  update_state(next, turn.frame, turn.reply, to_string(turn.source), user_ms, bot_ms);

  std::array<HistoryRecord, 2> records;
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& t = next.turns[next.turns.size() - 2 + i];
    records[i] = HistoryRecord{request.conversation_id, t.index, t.timestamp_ms, t.speaker,
                               t.raw, t.resolved, t.source};
  }
  store_->append_batch(records);

  ChatResponse response;
  response.reply = turn.reply;
  response.source = turn.source;
  response.rank_size = turn.ranked.size();
  if (request.debug.value_or(config.debug_default)) response.frame_debug = make_frame_debug(turn.frame);
  return response;
}

}  // namespace convo
