#pragma once

#include "convo/bot.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace convo::testing {

inline std::filesystem::path source_dir() { return CONVO_SOURCE_DIR; }
inline std::filesystem::path demo_bot_dir() { return source_dir() / "bots" / "demo"; }
inline std::filesystem::path fixture(const std::string& name) { return source_dir() / "tests" / "fixtures" / name; }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("convo-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

/// Writes a bot directory from `files`; required files not given are empty
/// (embeddings default to "#dim 2").
inline void write_bot(const std::filesystem::path& dir, const std::map<std::string, std::string>& files) {
  std::filesystem::create_directories(dir);
  for (const auto& name : required_bot_files()) {
    const auto it = files.find(name);
    std::string content = it != files.end() ? it->second : (name == "embeddings.txt" ? "#dim 2\n" : "");
    write_file(dir / name, content);
  }
  for (const auto& [name, content] : files) write_file(dir / name, content);
}

/// Tab-separated rows of a fixture file; blank and `#` lines skipped.
inline std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) row.push_back(field);
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Builds a bot from in-memory files through the real loader.
inline std::shared_ptr<const BotDefinition> make_bot(const std::map<std::string, std::string>& files) {
  TempDir dir;
  write_bot(dir.path(), files);
  return load_bot_definition(dir.path());
}

}  // namespace convo::testing
