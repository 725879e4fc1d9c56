#include "convo/context.hpp"
#include "convo/history.hpp"

#include <algorithm>
#include <optional>

namespace convo {

std::string_view to_string(Speaker speaker) { return speaker == Speaker::User ? "user" : "bot"; }

std::vector<Turn> recent_utterances(const ConversationState& state, std::size_t k) {
  const std::size_t n = std::min(k, state.turns.size());
  return {state.turns.end() - static_cast<std::ptrdiff_t>(n), state.turns.end()};
}

namespace {

enum class PronounClass { Personal, NonPerson, Any };

struct Pronoun {
  PronounClass cls;
  bool possessive;
};

std::optional<Pronoun> classify_pronoun(std::string_view word) {
  if (word == "he" || word == "him" || word == "she" || word == "her") return Pronoun{PronounClass::Personal, false};
  if (word == "his" || word == "hers") return Pronoun{PronounClass::Personal, true};
  if (word == "it") return Pronoun{PronounClass::NonPerson, false};
  if (word == "its") return Pronoun{PronounClass::NonPerson, true};
  if (word == "they" || word == "them") return Pronoun{PronounClass::Any, false};
  if (word == "their") return Pronoun{PronounClass::Any, true};
  return std::nullopt;
}

bool fits(PronounClass cls, EntityType type) {
  switch (cls) {
    case PronounClass::Personal: return type == EntityType::Person;
    case PronounClass::NonPerson: return type != EntityType::Person;
    case PronounClass::Any: return true;
  }
  return false;
}

void touch(std::vector<SalienceEntry>& salience, const EntityMention& m, std::size_t turn) {
  std::erase_if(salience, [&](const SalienceEntry& e) { return e.entity_id == m.resolved; });
  salience.insert(salience.begin(), SalienceEntry{m.resolved, m.type, turn});
}

}  // namespace

std::string resolve_coreference(std::string_view raw, const ConversationState& state,
                                 const Gazetteer& gazetteer, std::size_t window) {
  const auto tokens = tokenize(raw);
  const std::size_t next = state.next_index();
  const std::size_t oldest = next > window ? next - window : 0;

  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    const auto pronoun = classify_pronoun(t.normalized);
    const EntityRecord* target = nullptr;
    if (pronoun) {
      for (const auto& e : state.salience) {
        if (e.last_turn < oldest) break;
        if (!fits(pronoun->cls, e.type)) continue;
        target = gazetteer.find(e.entity_id);
        if (target != nullptr) break;
      }
    }
    if (target == nullptr) {
      out.push_back(t.surface);
    } else {
      out.push_back(pronoun->possessive ? target->canonical + "'s" : target->canonical);
    }
  }
  return join_surfaces(out);
}

void update_state(ConversationState& state, const SemanticFrame& frame, std::string_view reply,
                  std::string_view source, std::int64_t user_ms, std::int64_t bot_ms) {
  const std::size_t user_index = state.next_index();
  state.turns.push_back(Turn{user_index, Speaker::User, frame.raw, frame.resolved, "-", user_ms});
  state.turns.push_back(
      Turn{user_index + 1, Speaker::Bot, std::string(reply), std::string(reply), std::string(source), bot_ms});
  for (const auto& m : frame.mentions) touch(state.salience, m, user_index);
}

ConversationState restore_state(std::string conversation_id,
                                std::span<const HistoryRecord> records, const Gazetteer& gazetteer) {
  ConversationState state;
  state.conversation_id = std::move(conversation_id);
  for (const auto& r : records) {
    state.turns.push_back(Turn{r.index, r.speaker, r.raw, r.resolved, r.source, r.timestamp_ms});
    if (r.speaker != Speaker::User) continue;
    for (const auto& m : gazetteer.link(tokenize(r.resolved))) touch(state.salience, m, r.index);
  }
  return state;
}

}  // namespace convo
