#pragma once

#include <cstddef>
#include <optional>

namespace convo {

/// Effective tunables for one turn.
struct EngineConfig {
  double default_intent_threshold = 0.75;
  std::size_t coref_window = 5;
  std::size_t retrieval_k = 3;
  bool debug_default = false;
};

/// Partially specified tunables, from a bot's bot.conf or the service config.
struct ConfigOverrides {
  std::optional<double> default_intent_threshold;
  std::optional<std::size_t> coref_window;
  std::optional<std::size_t> retrieval_k;
  std::optional<bool> debug_default;
};

/// `primary` wins over `secondary`, which wins over the built-in defaults.
EngineConfig resolve_config(const ConfigOverrides& primary, const ConfigOverrides& secondary);

}  // namespace convo

#include <istream>
#include <string>
#include <vector>

namespace convo {

struct KeyValue {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

/// `key=value` lines; blank and `#` lines skipped. Throws LoadError on a line
/// without '='.
std::vector<KeyValue> read_key_values(std::istream& in, const std::string& source_name);

enum class OverrideResult { Applied, UnknownKey, BadValue };

/// Applies one of default_intent_threshold, coref_window, retrieval_k, debug_default.
OverrideResult apply_override(ConfigOverrides& overrides, const KeyValue& kv);

}  // namespace convo
