#pragma once

// Scripted dialogue evaluation: expected strategy source (and optionally a
// reply substring) per user turn.

#include "convo/bot.hpp"
#include "convo/config.hpp"
#include "convo/dialogue.hpp"

#include <cstddef>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace convo {

struct EvalTurn {
  std::size_t line = 0;
  std::string text;
  Source expected_source = Source::Fallback;
  std::optional<std::string> expected_substring;
  std::string note;  // free-form, reported but never scored
};

struct EvalCase {
  std::string dialogue_id;
  std::vector<EvalTurn> turns;
};

/// `dialogue_id<TAB>user text<TAB>expected_source[<TAB>substring[<TAB>note]]`,
/// blank line between dialogues. Throws LoadError located at `source_name`.
std::vector<EvalCase> parse_eval_cases(std::istream& in, const std::string& source_name);

struct EvalTurnResult {
  std::string dialogue_id;
  std::size_t line = 0;
  std::string text;
  Source expected_source = Source::Fallback;
  Source actual_source = Source::Fallback;
  std::optional<std::string> expected_substring;
  std::string reply;
  std::string note;
  bool source_ok = false;
  bool substring_ok = true;

  bool passed() const { return source_ok && substring_ok; }
};

struct EvalReport {
  std::vector<EvalTurnResult> results;
  std::size_t source_matches = 0;
  std::size_t substring_checks = 0;
  std::size_t substring_matches = 0;

  bool all_passed() const;
  double source_match_rate() const;
  double substring_match_rate() const;
  void print(std::ostream& out) const;
};

/// Each dialogue runs against its own fresh in-memory history.
EvalReport run_eval(std::shared_ptr<const BotDefinition> bot, const std::vector<EvalCase>& cases,
                    const ConfigOverrides& overrides = {});

}  // namespace convo
