#include "convo/generator.hpp"
#include "convo/text.hpp"

#include <random>

namespace convo {

void MarkovGenerator::bump(Successors& list, const std::string& word) {
  for (auto& [w, count] : list) {
    if (w == word) {
      ++count;
      return;
    }
  }
  list.emplace_back(word, 1);
}

const std::string& MarkovGenerator::draw(const Successors& list, std::uint64_t r) {
  std::size_t total = 0;
  for (const auto& [w, count] : list) total += count;
  std::uint64_t pick = r % total;
  for (const auto& [w, count] : list) {
    if (pick < count) return w;
    pick -= count;
  }
  return list.back().first;
}

MarkovGenerator::MarkovGenerator(std::span<const std::string> sentences) {
  for (const auto& sentence : sentences) {
    std::vector<std::string> words;
    for (const auto& t : tokenize(sentence)) {
      if (!is_punctuation_token(t.normalized)) words.push_back(t.normalized);
    }
    if (words.empty()) continue;
    for (std::size_t i = 0; i < words.size(); ++i) {
      vocabulary_.emplace(words[i], 0);
      const std::string next = i + 1 < words.size() ? words[i + 1] : std::string();
      bump(first_order_[words[i]], next);
      if (i + 1 < words.size()) {
        const std::string after = i + 2 < words.size() ? words[i + 2] : std::string();
        bump(second_order_[{words[i], words[i + 1]}], after);
      }
    }
  }
}

bool MarkovGenerator::knows(std::string_view word) const { return vocabulary_.contains(word); }

std::vector<std::string> MarkovGenerator::walk(const std::string& seed, std::uint64_t rng_seed,
                                               std::size_t max_tokens) const {
  std::vector<std::string> out;
  if (!knows(seed) || max_tokens == 0) return out;
  std::mt19937_64 rng(rng_seed);
  out.push_back(seed);

  const auto first = first_order_.find(seed);
  if (first == first_order_.end()) return out;
  std::string next = draw(first->second, rng());
  while (!next.empty() && out.size() < max_tokens) {
    out.push_back(next);
    if (out.size() == max_tokens) break;
    const auto it = second_order_.find({out[out.size() - 2], out.back()});
    if (it == second_order_.end()) break;
    next = draw(it->second, rng());
  }
  return out;
}

std::uint64_t stable_seed(std::string_view conversation_id, std::size_t turn_index) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  mix(conversation_id);
  mix(":");
  mix(std::to_string(turn_index));
  return h;
}

}  // namespace convo
