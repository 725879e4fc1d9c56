#include "convo/errors.hpp"

namespace convo {

std::string Located::str() const {
  std::string out = file;
  if (line > 0) out += ":" + std::to_string(line);
  out += ": " + message;
  return out;
}

namespace {
std::string join_errors(const std::vector<Located>& errors) {
  std::string out;
  for (const auto& e : errors) {
    if (!out.empty()) out += '\n';
    out += e.str();
  }
  return out;
}
}  // namespace

LoadError::LoadError(std::vector<Located> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

}  // namespace convo
