#include "convo/replygen.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace convo {

bool blocks_fallback(std::string_view term) {
  const std::string folded = case_fold(term);
  for (const auto text : {kFallbackText, kAlternateFallbackText}) {
    for (const auto& t : tokenize(text)) {
      if (t.normalized == folded) return true;
    }
  }
  return false;
}

FilterOutcome filter_candidates(std::vector<CandidateReply> candidates, const FilterLexicon& lexicon,
                                const SemanticFrame& frame) {
  const std::string echo = case_fold(frame.resolved);

  // Visit in priority order (stable) so duplicates resolve toward the higher priority.
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].priority > candidates[b].priority;
  });

  std::vector<bool> keep(candidates.size(), false);
  std::set<std::string> kept_texts;
  for (const auto i : order) {
    auto& c = candidates[i];
    const auto tokens = tokenize(c.text);
    const std::string folded = case_fold(c.text);
    auto flag = [&c](std::string_view f) { c.filter_flags.emplace_back(f); };

    if (std::any_of(tokens.begin(), tokens.end(),
                    [&](const Token& t) { return lexicon.contains(t.normalized); })) {
      flag(flags::kBlocked);
    }
    if (tokens.empty()) flag(flags::kEmpty);
    if (folded == echo) flag(flags::kEcho);
    if (tokens.size() > kMaxReplyTokens) flag(flags::kOverlong);
    if (c.filter_flags.empty() && kept_texts.contains(folded)) flag(flags::kDuplicate);

    if (c.filter_flags.empty()) {
      keep[i] = true;
      kept_texts.insert(folded);
    }
  }

  FilterOutcome out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    (keep[i] ? out.survivors : out.rejected).push_back(std::move(candidates[i]));
  }
  if (out.survivors.empty()) {
    out.survivors.push_back(echo == case_fold(kFallbackText) ? alternate_fallback() : canned_fallback());
    out.injected_fallback = true;
  }
  return out;
}

double engagement_score(const CandidateReply& candidate, const SemanticFrame& frame,
                        const ConversationState& state, const Gazetteer& gazetteer) {
  const auto tokens = tokenize(candidate.text);
  const std::size_t n = tokens.size();

  double length = 0.0;
  if (n >= 4 && n <= 25) {
    length = 1.0;
  } else if ((n >= 1 && n <= 3) || (n >= 26 && n <= 40)) {
    length = 0.5;
  }

  std::set<std::string> frame_entities;
  for (const auto& m : frame.mentions) frame_entities.insert(m.resolved);
  std::size_t shared = 0;
  if (!frame_entities.empty()) {
    std::set<std::string> own;
    for (const auto& m : gazetteer.link(tokens)) own.insert(m.resolved);
    for (const auto& id : own) shared += frame_entities.contains(id) ? 1 : 0;
  }
  const double entity = static_cast<double>(shared) /
                        static_cast<double>(std::max<std::size_t>(1, frame_entities.size()));

  const auto words = word_set(tokens);
  double max_overlap = 0.0;
  std::size_t seen = 0;
  for (auto it = state.turns.rbegin(); it != state.turns.rend() && seen < 5; ++it) {
    if (it->speaker != Speaker::Bot) continue;
    ++seen;
    max_overlap = std::max(max_overlap, jaccard(words, word_set(tokenize(it->raw))));
  }
  const double novelty = 1.0 - max_overlap;

  const auto body = trim(candidate.text);
  const double question = !body.empty() && body.back() == '?' ? 1.0 : 0.0;

  return 0.4 * length + 0.3 * entity + 0.2 * novelty + 0.1 * question;
}

std::vector<RankedReply> rank_candidates(std::vector<CandidateReply> survivors) {
  std::vector<std::size_t> order(survivors.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = survivors[a];
    const auto& y = survivors[b];
    if (x.priority != y.priority) return x.priority > y.priority;
    if (x.engagement != y.engagement) return x.engagement > y.engagement;
    return stage_order(x.source) < stage_order(y.source);
  });
  std::vector<RankedReply> ranked;
  ranked.reserve(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    ranked.push_back({std::move(survivors[order[r]]), r + 1});
  }
  return ranked;
}

std::string realize(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
      if (c >= 'a') c = static_cast<char>(c - 'a' + 'A');
      break;
    }
  }
  if (out.empty() || (out.back() != '.' && out.back() != '!' && out.back() != '?')) out += '.';
  return out;
}

}  // namespace convo
