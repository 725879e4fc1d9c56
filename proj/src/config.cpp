#include "convo/config.hpp"
#include "convo/errors.hpp"
#include "convo/text.hpp"

#include <charconv>

namespace convo {

EngineConfig resolve_config(const ConfigOverrides& primary, const ConfigOverrides& secondary) {
  EngineConfig c;
  c.default_intent_threshold = primary.default_intent_threshold.value_or(
      secondary.default_intent_threshold.value_or(c.default_intent_threshold));
  c.coref_window = primary.coref_window.value_or(secondary.coref_window.value_or(c.coref_window));
  c.retrieval_k = primary.retrieval_k.value_or(secondary.retrieval_k.value_or(c.retrieval_k));
  c.debug_default = primary.debug_default.value_or(secondary.debug_default.value_or(c.debug_default));
  return c;
}

std::vector<KeyValue> read_key_values(std::istream& in, const std::string& source_name) {
  std::vector<KeyValue> out;
  std::vector<Located> errors;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back({source_name, lineno, "expected key=value"});
      continue;
    }
    out.push_back({std::string(trim(body.substr(0, eq))), std::string(trim(body.substr(eq + 1))), lineno});
  }
  if (!errors.empty()) throw LoadError(std::move(errors));
  return out;
}

namespace {

template <typename T>
bool parse_number(const std::string& s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

OverrideResult apply_override(ConfigOverrides& overrides, const KeyValue& kv) {
  if (kv.key == "default_intent_threshold") {
    double v = 0;
    if (!parse_number(kv.value, v) || v < 0.0 || v > 1.0) return OverrideResult::BadValue;
    overrides.default_intent_threshold = v;
  } else if (kv.key == "coref_window") {
    std::size_t v = 0;
    if (!parse_number(kv.value, v) || v == 0) return OverrideResult::BadValue;
    overrides.coref_window = v;
  } else if (kv.key == "retrieval_k") {
    std::size_t v = 0;
    if (!parse_number(kv.value, v) || v == 0) return OverrideResult::BadValue;
    overrides.retrieval_k = v;
  } else if (kv.key == "debug_default") {
    if (kv.value == "true" || kv.value == "1") {
      overrides.debug_default = true;
    } else if (kv.value == "false" || kv.value == "0") {
      overrides.debug_default = false;
    } else {
      return OverrideResult::BadValue;
    }
  } else {
    return OverrideResult::UnknownKey;
  }
  return OverrideResult::Applied;
}

}  // namespace convo
