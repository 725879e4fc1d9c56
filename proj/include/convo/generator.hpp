#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace convo {

/// Deterministic word-level Markov chain, a stand-in for a learned reply
/// generator. The first step from the seed word uses single-word
/// transitions; every later step conditions on the previous two words.
class MarkovGenerator {
 public:
  static constexpr std::size_t kMaxTokens = 20;

  MarkovGenerator() = default;
  explicit MarkovGenerator(std::span<const std::string> sentences);

  bool empty() const noexcept { return vocabulary_.empty(); }
  bool knows(std::string_view word) const;

  /// Starts at `seed` and follows the chain until it ends or `max_tokens`
  /// words have been produced. Same (seed, rng_seed) -> same words.
  std::vector<std::string> walk(const std::string& seed, std::uint64_t rng_seed,
                                std::size_t max_tokens = kMaxTokens) const;

 private:
  using Successors = std::vector<std::pair<std::string, std::size_t>>;  // "" ends the chain

  static void bump(Successors& list, const std::string& word);
  static const std::string& draw(const Successors& list, std::uint64_t r);

  std::map<std::string, int, std::less<>> vocabulary_;
  std::map<std::string, Successors, std::less<>> first_order_;
  std::map<std::pair<std::string, std::string>, Successors> second_order_;
};

/// FNV-1a over "conversation_id:turn_index".
std::uint64_t stable_seed(std::string_view conversation_id, std::size_t turn_index);

}  // namespace convo
