#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace convo {

/// A problem found while reading an on-disk file, pinned to file and line.
/// Line 0 means the problem concerns the file as a whole.
struct Located {
  std::string file;
  std::size_t line = 0;
  std::string message;

  std::string str() const;
};

/// Raised when a bot definition (or any other located input) fails to load.
/// Carries every problem found, not just the first.
class LoadError : public std::runtime_error {
 public:
  explicit LoadError(std::vector<Located> errors);
  explicit LoadError(Located error) : LoadError(std::vector<Located>{std::move(error)}) {}

  const std::vector<Located>& errors() const noexcept { return errors_; }

 private:
  std::vector<Located> errors_;
};

}  // namespace convo
