#include "convo/eval.hpp"
#include "convo/engine.hpp"
#include "convo/errors.hpp"

#include <cstdio>

namespace convo {

std::vector<EvalCase> parse_eval_cases(std::istream& in, const std::string& source_name) {
  std::vector<EvalCase> cases;
  std::vector<Located> errors;
  std::string line;
  std::size_t lineno = 0;
  bool open = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) {
      open = false;
      continue;
    }
    if (line.front() == '#') continue;
    const auto f = split(line, '\t');
    if (f.size() < 3 || f.size() > 5) {
      errors.push_back({source_name, lineno,
                        "expected dialogue_id<TAB>text<TAB>expected_source[<TAB>substring[<TAB>note]]"});
      continue;
    }
    const auto source = parse_source(f[2]);
    if (!source) {
      errors.push_back({source_name, lineno, "unknown source tag '" + f[2] + "'"});
      continue;
    }
    if (!valid_conversation_id(f[0])) {
      errors.push_back({source_name, lineno, "invalid dialogue id '" + f[0] + "'"});
      continue;
    }
    if (tokenize(f[1]).empty()) {
      errors.push_back({source_name, lineno, "empty user text"});
      continue;
    }
    if (!open || cases.back().dialogue_id != f[0]) {
      cases.push_back({f[0], {}});
      open = true;
    }
    EvalTurn turn;
    turn.line = lineno;
    turn.text = f[1];
    turn.expected_source = *source;
    if (f.size() >= 4 && !f[3].empty()) turn.expected_substring = f[3];
    if (f.size() == 5) turn.note = f[4];
    cases.back().turns.push_back(std::move(turn));
  }
  if (!errors.empty()) throw LoadError(std::move(errors));
  return cases;
}

bool EvalReport::all_passed() const {
  for (const auto& r : results) {
    if (!r.passed()) return false;
  }
  return true;
}

double EvalReport::source_match_rate() const {
  return results.empty() ? 1.0 : static_cast<double>(source_matches) / static_cast<double>(results.size());
}

double EvalReport::substring_match_rate() const {
  return substring_checks == 0 ? 1.0
                               : static_cast<double>(substring_matches) / static_cast<double>(substring_checks);
}

void EvalReport::print(std::ostream& out) const {
  std::size_t passed = 0;
  for (const auto& r : results) {
    if (r.passed()) ++passed;
    out << (r.passed() ? "PASS" : "FAIL") << "  " << r.dialogue_id << ":" << r.line << "  \"" << r.text
        << "\" -> \"" << r.reply << "\" [" << to_string(r.actual_source) << "]";
    if (!r.source_ok) out << " expected source " << to_string(r.expected_source);
    if (!r.substring_ok) out << " expected substring \"" << *r.expected_substring << "\"";
    if (!r.note.empty()) out << "  note: " << r.note;
    out << '\n';
  }
  char rates[160];
  std::snprintf(rates, sizeof rates, "source-match rate %.3f (%zu/%zu), substring-match rate %.3f (%zu/%zu)",
                source_match_rate(), source_matches, results.size(), substring_match_rate(),
                substring_matches, substring_checks);
  out << "cases: " << results.size() << ", passed: " << passed << ", failed: " << results.size() - passed
      << '\n'
      << rates << '\n';
}

EvalReport run_eval(std::shared_ptr<const BotDefinition> bot, const std::vector<EvalCase>& cases,
                    const ConfigOverrides& overrides) {
  EvalReport report;
  for (const auto& c : cases) {
    Engine engine(bot, std::make_shared<MemoryHistoryStore>(), overrides, counting_clock(0, 1));
    for (const auto& turn : c.turns) {
      const auto response = engine.respond({c.dialogue_id, turn.text, std::nullopt});
      EvalTurnResult r;
      r.dialogue_id = c.dialogue_id;
      r.line = turn.line;
      r.text = turn.text;
      r.expected_source = turn.expected_source;
      r.actual_source = response.source;
      r.expected_substring = turn.expected_substring;
      r.reply = response.reply;
      r.note = turn.note;
      r.source_ok = response.source == turn.expected_source;
      if (r.source_ok) ++report.source_matches;
      if (turn.expected_substring) {
        ++report.substring_checks;
        r.substring_ok = response.reply.find(*turn.expected_substring) != std::string::npos;
        if (r.substring_ok) ++report.substring_matches;
      }
      report.results.push_back(std::move(r));
    }
  }
  return report;
}

}  // namespace convo
