#include "convo/history.hpp"
#include "convo/errors.hpp"

#include <charconv>
#include <fstream>

namespace convo {

std::string escape_field(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_field(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '\\') {
      out += text[i];
      continue;
    }
    if (i + 1 == text.size()) throw std::invalid_argument("dangling backslash");
    switch (text[++i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      default: throw std::invalid_argument(std::string("unknown escape \\") + text[i]);
    }
  }
  return out;
}

std::string format_record(const HistoryRecord& r) {
  std::string line;
  line += r.conversation_id;
  line += '\t';
  line += std::to_string(r.index);
  line += '\t';
  line += std::to_string(r.timestamp_ms);
  line += '\t';
  line += to_string(r.speaker);
  line += '\t';
  line += escape_field(r.raw);
  line += '\t';
  line += escape_field(r.resolved);
  line += '\t';
  line += escape_field(r.source);
  return line;
}

namespace {

template <typename T>
T parse_number(std::string_view s, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument(std::string("invalid ") + what + " '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

HistoryRecord parse_record(std::string_view line) {
  const auto fields = split(line, '\t');
  if (fields.size() != 7) {
    throw std::invalid_argument("expected 7 tab-separated fields, found " + std::to_string(fields.size()));
  }
  HistoryRecord r;
  r.conversation_id = fields[0];
  r.index = parse_number<std::size_t>(fields[1], "turn index");
  r.timestamp_ms = parse_number<std::int64_t>(fields[2], "timestamp");
  if (fields[3] == "user") {
    r.speaker = Speaker::User;
  } else if (fields[3] == "bot") {
    r.speaker = Speaker::Bot;
  } else {
    throw std::invalid_argument("unknown speaker '" + fields[3] + "'");
  }
  r.raw = unescape_field(fields[4]);
  r.resolved = unescape_field(fields[5]);
  r.source = unescape_field(fields[6]);
  return r;
}

namespace {

void check_batch(std::span<const HistoryRecord> records, std::size_t next) {
  for (const auto& r : records) {
    if (r.conversation_id != records.front().conversation_id) {
      throw SequencingError("batch mixes conversations");
    }
    if (r.index != next) {
      throw SequencingError("conversation '" + r.conversation_id + "': expected turn index " +
                            std::to_string(next) + ", got " + std::to_string(r.index));
    }
    ++next;
  }
}

}  // namespace

// ---------------------------------------------------------------------------

FileHistoryStore::FileHistoryStore(std::filesystem::path data_dir) : data_dir_(std::move(data_dir)) {
  std::error_code ec;
  std::filesystem::create_directories(data_dir_, ec);
  if (ec) throw StorageError("cannot create data directory " + data_dir_.string() + ": " + ec.message());
}

std::filesystem::path FileHistoryStore::path_for(const std::string& conversation_id) const {
  return data_dir_ / (conversation_id + ".log");
}

std::vector<HistoryRecord> FileHistoryStore::load_history(const std::string& conversation_id,
                                                          std::size_t limit) const {
  const auto path = path_for(conversation_id);
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};

  std::vector<HistoryRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    try {
      records.push_back(parse_record(line));
    } catch (const std::invalid_argument& e) {
      throw LoadError(Located{path.string(), lineno, e.what()});
    }
  }
  if (records.size() > limit) records.erase(records.begin(), records.end() - static_cast<std::ptrdiff_t>(limit));
  return records;
}

void FileHistoryStore::append_batch(std::span<const HistoryRecord> records) {
  if (records.empty()) return;
  const auto& id = records.front().conversation_id;
  std::lock_guard lock(mutex_);

  auto it = next_index_.find(id);
  if (it == next_index_.end()) {
    const auto existing = load_history(id, 1);
    it = next_index_.emplace(id, existing.empty() ? 0 : existing.back().index + 1).first;
  }
  check_batch(records, it->second);

  std::string payload;
  for (const auto& r : records) {
    payload += format_record(r);
    payload += '\n';
  }

  const auto path = path_for(id);
  std::error_code ec;
  const auto before = std::filesystem::exists(path) ? std::filesystem::file_size(path, ec) : 0;
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (out) {
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    out.flush();
  }
  if (!out) {
    out.close();
    std::filesystem::resize_file(path, before, ec);
    throw StorageError("failed to append to " + path.string());
  }
  it->second += records.size();
}

// ---------------------------------------------------------------------------

void MemoryHistoryStore::append_batch(std::span<const HistoryRecord> records) {
  if (records.empty()) return;
  std::lock_guard lock(mutex_);
  auto& list = records_[records.front().conversation_id];
  check_batch(records, list.empty() ? 0 : list.back().index + 1);
  list.insert(list.end(), records.begin(), records.end());
}

std::vector<HistoryRecord> MemoryHistoryStore::load_history(const std::string& conversation_id,
                                                            std::size_t limit) const {
  std::lock_guard lock(mutex_);
  const auto it = records_.find(conversation_id);
  if (it == records_.end()) return {};
  const auto& list = it->second;
  const std::size_t n = std::min(limit, list.size());
  return {list.end() - static_cast<std::ptrdiff_t>(n), list.end()};
}

}  // namespace convo
