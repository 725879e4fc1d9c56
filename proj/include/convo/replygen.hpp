#pragma once

// Content filter, engagement ranking and final realization of candidate replies.

#include "convo/context.hpp"
#include "convo/dialogue.hpp"
#include "convo/nlu.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace convo {

using FilterLexicon = WordSet;

inline constexpr std::size_t kMaxReplyTokens = 60;

namespace flags {
inline constexpr std::string_view kBlocked = "blocked";
inline constexpr std::string_view kEmpty = "empty";
inline constexpr std::string_view kEcho = "echo";
inline constexpr std::string_view kOverlong = "overlong";
inline constexpr std::string_view kDuplicate = "duplicate";
}  // namespace flags

struct FilterOutcome {
  std::vector<CandidateReply> survivors;  // emission order preserved
  std::vector<CandidateReply> rejected;   // each carries its flags
  bool injected_fallback = false;         // every input was rejected; never an echo
};

/// True when blocking `term` would also block one of the fallback replies.
/// Such lexicons are rejected at bot load.
bool blocks_fallback(std::string_view term);

FilterOutcome filter_candidates(std::vector<CandidateReply> candidates, const FilterLexicon& lexicon,
                                const SemanticFrame& frame);

/// 0.4·length + 0.3·entity overlap + 0.2·novelty + 0.1·question.
double engagement_score(const CandidateReply& candidate, const SemanticFrame& frame,
                        const ConversationState& state, const Gazetteer& gazetteer);

struct RankedReply {
  CandidateReply candidate;
  std::size_t rank = 0;  // 1-based
};

/// Priority desc, engagement desc, stage order, then input order.
std::vector<RankedReply> rank_candidates(std::vector<CandidateReply> survivors);

/// Uppercases the first letter and adds a full stop when no sentence
/// punctuation ends the text.
std::string realize(std::string_view text);

}  // namespace convo
