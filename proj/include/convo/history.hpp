#pragma once

// Append-only conversation history: one tab-separated line per turn.

#include "convo/context.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace convo {

struct HistoryRecord {
  std::string conversation_id;
  std::size_t index = 0;
  std::int64_t timestamp_ms = 0;
  Speaker speaker = Speaker::User;
  std::string raw;
  std::string resolved;
  std::string source = "-";

  bool operator==(const HistoryRecord&) const = default;
};

/// Backslash escaping of tab, newline and backslash.
std::string escape_field(std::string_view text);
/// Inverse of escape_field. Throws std::invalid_argument on a dangling or unknown escape.
std::string unescape_field(std::string_view text);

/// One line, no trailing newline.
std::string format_record(const HistoryRecord& record);
/// Throws std::invalid_argument on a malformed line.
HistoryRecord parse_record(std::string_view line);

/// Raised when an appended record does not continue its conversation densely.
class SequencingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when persisted history cannot be read or written.
class StorageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kAllRecords = std::numeric_limits<std::size_t>::max();

class HistoryStore {
 public:
  virtual ~HistoryStore() = default;

  /// Appends one record; see append_batch.
  void append_turn(const HistoryRecord& record) { append_batch({&record, 1}); }

  /// Appends records of one conversation atomically: either all are stored or
  /// none. Indices must continue densely from the stored history.
  virtual void append_batch(std::span<const HistoryRecord> records) = 0;

  /// The last `limit` records, oldest first. Unknown ids give an empty list.
  virtual std::vector<HistoryRecord> load_history(const std::string& conversation_id,
                                                  std::size_t limit = kAllRecords) const = 0;
};

/// `<data_dir>/<conversation_id>.log`
class FileHistoryStore : public HistoryStore {
 public:
  explicit FileHistoryStore(std::filesystem::path data_dir);

  void append_batch(std::span<const HistoryRecord> records) override;
  std::vector<HistoryRecord> load_history(const std::string& conversation_id,
                                          std::size_t limit = kAllRecords) const override;

  std::filesystem::path path_for(const std::string& conversation_id) const;

 private:
  std::filesystem::path data_dir_;
  mutable std::mutex mutex_;
  std::map<std::string, std::size_t> next_index_;  // cache, filled lazily
};

class MemoryHistoryStore : public HistoryStore {
 public:
  void append_batch(std::span<const HistoryRecord> records) override;
  std::vector<HistoryRecord> load_history(const std::string& conversation_id,
                                          std::size_t limit = kAllRecords) const override;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::vector<HistoryRecord>> records_;
};

}  // namespace convo
