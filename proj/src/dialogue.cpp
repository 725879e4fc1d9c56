#include "convo/dialogue.hpp"
#include "convo/bot.hpp"
#include "convo/config.hpp"
#include "convo/context.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace convo {

std::string_view to_string(Source source) {
  switch (source) {
    case Source::Backstory: return "rule:backstory";
    case Source::Intent: return "rule:intent";
    case Source::Entity: return "rule:entity";
    case Source::Kb: return "kb";
    case Source::Retrieval: return "retrieval";
    case Source::Generative: return "generative";
    case Source::Fallback: return "fallback";
  }
  return "fallback";
}

std::optional<Source> parse_source(std::string_view text) {
  for (auto s : {Source::Backstory, Source::Intent, Source::Entity, Source::Kb, Source::Retrieval,
                 Source::Generative, Source::Fallback}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

bool is_rule(Source source) {
  return source == Source::Backstory || source == Source::Intent || source == Source::Entity;
}

int default_priority(Source source) {
  switch (source) {
    case Source::Backstory: return 300;
    case Source::Intent: return 200;
    case Source::Kb: return 150;
    case Source::Entity: return 100;
    case Source::Retrieval: return 50;
    case Source::Generative: return 40;
    case Source::Fallback: return 0;
  }
  return 0;
}

int stage_order(Source source) {
  switch (source) {
    case Source::Backstory:
    case Source::Intent:
    case Source::Entity: return 0;
    case Source::Kb: return 1;
    case Source::Retrieval: return 2;
    case Source::Generative: return 3;
    case Source::Fallback: return 4;
  }
  return 4;
}

CandidateReply make_candidate(std::string text, Source source) {
  CandidateReply c;
  c.text = std::move(text);
  c.source = source;
  c.priority = default_priority(source);
  return c;
}

CandidateReply canned_fallback() { return make_candidate(std::string(kFallbackText), Source::Fallback); }
CandidateReply alternate_fallback() {
  return make_candidate(std::string(kAlternateFallbackText), Source::Fallback);
}

std::optional<TemplateKind> parse_template_kind(std::string_view text) {
  if (text == "backstory") return TemplateKind::Backstory;
  if (text == "intent") return TemplateKind::Intent;
  if (text == "entity") return TemplateKind::Entity;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Templates

namespace {

Source source_for(TemplateKind kind) {
  switch (kind) {
    case TemplateKind::Backstory: return Source::Backstory;
    case TemplateKind::Intent: return Source::Intent;
    case TemplateKind::Entity: return Source::Entity;
  }
  return Source::Backstory;
}

struct Slot {
  std::size_t begin;  // offset of '{'
  std::size_t end;    // one past '}'
  std::string name;
};

std::vector<Slot> find_slots(const std::string& response) {
  std::vector<Slot> slots;
  std::size_t pos = 0;
  while ((pos = response.find('{', pos)) != std::string::npos) {
    const auto close = response.find('}', pos);
    if (close == std::string::npos) throw std::invalid_argument("unterminated slot in response");
    std::string name = response.substr(pos + 1, close - pos - 1);
    if (name.empty()) throw std::invalid_argument("empty slot '{}' in response");
    slots.push_back({pos, close + 1, std::move(name)});
    pos = close + 1;
  }
  return slots;
}

std::optional<EntityType> placeholder_type(std::string_view token) {
  if (token.size() < 3 || token.front() != '<' || token.back() != '>') return std::nullopt;
  return parse_entity_type(token.substr(1, token.size() - 2));
}

}  // namespace

RuleTemplate make_template(TemplateKind kind, std::optional<int> priority, std::string trigger,
                           std::string response) {
  RuleTemplate t;
  t.kind = kind;
  t.priority = priority.value_or(default_priority(source_for(kind)));
  t.trigger = std::move(trigger);
  t.response = std::move(response);
  if (trim(t.response).empty()) throw std::invalid_argument("empty response");

  std::set<std::string> bindable{"entity", "topic"};
  switch (kind) {
    case TemplateKind::Backstory: {
      for (const auto& tok : tokenize(t.trigger)) {
        if (is_punctuation_token(tok.normalized)) continue;
        PatternElement e;
        if (tok.surface == "*") {
          e.kind = PatternElement::Kind::Wildcard;
        } else if (tok.surface.front() == '<' && tok.surface.back() == '>') {
          const auto type = placeholder_type(tok.surface);
          if (!type) throw std::invalid_argument("unknown placeholder '" + tok.surface + "'");
          e.kind = PatternElement::Kind::Placeholder;
          e.type = *type;
          bindable.insert(std::string(to_string(*type)));
        } else {
          e.word = tok.normalized;
        }
        t.pattern.push_back(std::move(e));
      }
      if (t.pattern.empty()) throw std::invalid_argument("empty backstory pattern");
      break;
    }
    case TemplateKind::Intent:
      if (trim(t.trigger).empty()) throw std::invalid_argument("empty intent trigger");
      break;
    case TemplateKind::Entity: {
      t.entity_type = parse_entity_type(t.trigger);
      if (!t.entity_type) throw std::invalid_argument("unknown entity type '" + t.trigger + "'");
      bindable.insert(t.trigger);
      break;
    }
  }
  for (const auto& slot : find_slots(t.response)) {
    if (!bindable.contains(slot.name)) {
      throw std::invalid_argument("slot {" + slot.name + "} is not bound by this template");
    }
  }
  return t;
}

namespace {

using Bindings = std::map<EntityType, std::size_t>;  // type -> mention index

std::size_t skip_punct(std::span<const Token> tokens, std::size_t i) {
  while (i < tokens.size() && is_punctuation_token(tokens[i].normalized)) ++i;
  return i;
}

bool match_pattern(std::span<const PatternElement> pattern, std::size_t pi,
                   std::span<const Token> tokens, std::size_t ti,
                   std::span<const EntityMention> mentions, Bindings& bindings) {
  ti = skip_punct(tokens, ti);
  if (pi == pattern.size()) return ti == tokens.size();
  const auto& e = pattern[pi];
  switch (e.kind) {
    case PatternElement::Kind::Literal:
      return ti < tokens.size() && tokens[ti].normalized == e.word &&
             match_pattern(pattern, pi + 1, tokens, ti + 1, mentions, bindings);
    case PatternElement::Kind::Placeholder:
      for (std::size_t m = 0; m < mentions.size(); ++m) {
        if (mentions[m].begin != ti || mentions[m].type != e.type) continue;
        Bindings trial = bindings;
        trial.try_emplace(e.type, m);
        if (match_pattern(pattern, pi + 1, tokens, mentions[m].end, mentions, trial)) {
          bindings = std::move(trial);
          return true;
        }
      }
      return false;
    case PatternElement::Kind::Wildcard:
      for (std::size_t j = tokens.size() + 1; j-- > ti;) {
        Bindings trial = bindings;
        if (match_pattern(pattern, pi + 1, tokens, j, mentions, trial)) {
          bindings = std::move(trial);
          return true;
        }
      }
      return false;
  }
  return false;
}

const std::string& canonical_of(const BotDefinition& bot, const EntityMention& m) {
  return bot.gazetteer.find(m.resolved)->canonical;
}

// Fills slots; nullopt when a slot has nothing to bind at chat time.
std::optional<std::string> fill(const RuleTemplate& t, const SemanticFrame& frame,
                                const BotDefinition& bot, const Bindings& bindings,
                                const EntityMention* entity) {
  const auto slots = find_slots(t.response);
  std::string out;
  std::size_t pos = 0;
  for (const auto& slot : slots) {
    out.append(t.response, pos, slot.begin - pos);
    if (slot.name == "topic") {
      out += frame.topic.name;
    } else if (slot.name == "entity") {
      if (entity == nullptr) return std::nullopt;
      out += canonical_of(bot, *entity);
    } else {
      const auto type = parse_entity_type(slot.name);
      const auto it = type ? bindings.find(*type) : bindings.end();
      if (it == bindings.end()) return std::nullopt;
      out += canonical_of(bot, frame.mentions[it->second]);
    }
    pos = slot.end;
  }
  out.append(t.response, pos);
  return out;
}

}  // namespace

std::vector<CandidateReply> match_templates(const SemanticFrame& frame,
                                            std::span<const RuleTemplate> templates,
                                            const BotDefinition& bot, double default_threshold) {
  std::vector<CandidateReply> out;
  const EntityMention* first_mention = frame.mentions.empty() ? nullptr : &frame.mentions.front();

  for (const auto& t : templates) {
    std::optional<std::string> text;
    switch (t.kind) {
      case TemplateKind::Backstory: {
        Bindings bindings;
        if (match_pattern(t.pattern, 0, frame.tokens, 0, frame.mentions, bindings)) {
          text = fill(t, frame, bot, bindings, first_mention);
        }
        break;
      }
      case TemplateKind::Intent: {
        const auto it = std::find_if(frame.intents.begin(), frame.intents.end(),
                                     [&](const IntentScore& s) { return s.name == t.trigger; });
        if (it != frame.intents.end() &&
            it->similarity >= bot.intents.threshold_for(t.trigger, default_threshold)) {
          text = fill(t, frame, bot, {}, first_mention);
        }
        break;
      }
      case TemplateKind::Entity: {
        const auto it = std::find_if(frame.mentions.begin(), frame.mentions.end(),
                                     [&](const EntityMention& m) { return m.type == *t.entity_type; });
        if (it != frame.mentions.end()) {
          Bindings bindings{{*t.entity_type, static_cast<std::size_t>(it - frame.mentions.begin())}};
          text = fill(t, frame, bot, bindings, &*it);
        }
        break;
      }
    }
    if (!text) continue;
    CandidateReply c = make_candidate(std::move(*text), source_for(t.kind));
    c.priority = t.priority;
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(), [](const CandidateReply& a, const CandidateReply& b) {
    return a.priority > b.priority;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Knowledge base

std::optional<CandidateReply> answer_from_kb(const SemanticFrame& frame, const BotDefinition& bot) {
  if (frame.mentions.empty()) return std::nullopt;

  static const std::set<std::string> kCues{"who", "what", "where", "when", "how"};
  bool cue = !frame.tokens.empty() && frame.tokens.back().normalized == "?";
  bool who_what = false;
  bool copula = false;
  for (const auto& t : frame.tokens) {
    if (kCues.contains(t.normalized)) cue = true;
    if (t.normalized == "who" || t.normalized == "what") who_what = true;
    if (t.normalized == "is" || t.normalized == "was" || t.normalized == "are") copula = true;
  }
  if (!cue) return std::nullopt;

  std::vector<std::string> predicates;
  for (const auto& w : content_words(frame.tokens, bot.stopwords)) {
    const auto it = bot.predicates.find(w);
    if (it != bot.predicates.end() &&
        std::find(predicates.begin(), predicates.end(), it->second) == predicates.end()) {
      predicates.push_back(it->second);
    }
  }

  std::set<std::string> subjects;
  for (const auto& m : frame.mentions) subjects.insert(m.resolved);

  if (!predicates.empty()) {
    for (const auto& triple : bot.triples) {
      if (!subjects.contains(triple.subject)) continue;
      if (std::find(predicates.begin(), predicates.end(), triple.predicate) == predicates.end()) continue;
      std::string answer = triple.object;
      if (triple.object_is_entity) answer = bot.gazetteer.find(triple.object)->canonical;
      return make_candidate(std::move(answer), Source::Kb);
    }
    return std::nullopt;
  }

  if (who_what && copula) {
    const auto* rec = bot.gazetteer.find(frame.mentions.front().resolved);
    if (rec != nullptr && !rec->description.empty()) return make_candidate(rec->description, Source::Kb);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Retrieval and generation

std::vector<CandidateReply> retrieve_candidates(const SemanticFrame& frame,
                                                const RetrievalIndex& index, std::size_t k) {
  std::vector<CandidateReply> out;
  const auto query = content_words(frame.tokens, index.stopwords());
  for (const auto& hit : index.search(query, k)) {
    out.push_back(make_candidate(index.documents()[hit.document].text, Source::Retrieval));
  }
  return out;
}

Generation generate_candidate(const SemanticFrame& frame, std::string_view conversation_id,
                              std::size_t turn_index, const MarkovGenerator& model,
                              const RetrievalIndex& index) {
  const auto words = content_words(frame.tokens, index.stopwords());

  std::map<std::string, std::size_t> counts;
  for (const auto& w : words) ++counts[w];
  const std::string* seed = nullptr;
  double best = 0.0;
  for (const auto& w : words) {
    if (!model.knows(w)) continue;
    const double weight = static_cast<double>(counts[w]) * index.idf(w);
    if (seed == nullptr || weight > best) {
      seed = &w;
      best = weight;
    }
  }

  if (seed != nullptr) {
    const auto walked = model.walk(*seed, stable_seed(conversation_id, turn_index));
    return {make_candidate(join_surfaces(walked), Source::Generative), false};
  }
  std::string text = words.empty() ? "Tell me more." : "Tell me more about " + words.back() + ".";
  return {make_candidate(std::move(text), Source::Generative), true};
}

// ---------------------------------------------------------------------------

std::vector<CandidateReply> plan(const SemanticFrame& frame, const ConversationState& state,
                                 const BotDefinition& bot, const EngineConfig& config) {
  auto rules = match_templates(frame, bot.templates, bot, config.default_intent_threshold);
  if (!rules.empty()) return rules;

  if (auto kb = answer_from_kb(frame, bot)) return {std::move(*kb)};

  auto out = retrieve_candidates(frame, bot.index, config.retrieval_k);
  auto gen = generate_candidate(frame, state.conversation_id, state.next_index(), bot.generator, bot.index);
  if (!gen.degenerate) out.push_back(std::move(gen.candidate));
  out.push_back(canned_fallback());
  return out;
}

}  // namespace convo
