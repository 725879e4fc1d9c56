#pragma once

// HTTP/JSON front end over an Engine.

#include "convo/config.hpp"
#include "convo/engine.hpp"

#include <filesystem>
#include <istream>
#include <memory>
#include <string>

namespace convo {

struct ServiceConfig {
  std::filesystem::path bot_dir;
  std::filesystem::path data_dir;
  std::string host = "127.0.0.1";
  int port = 8080;
  ConfigOverrides overrides;
};

/// key=value lines: bot_dir, data_dir, bind_addr (host:port),
/// default_intent_threshold, coref_window, retrieval_k, debug_default.
/// Relative paths resolve against `base_dir`. Throws LoadError.
ServiceConfig parse_service_config(std::istream& in, const std::string& source_name,
                                   const std::filesystem::path& base_dir = {});
ServiceConfig load_service_config(const std::filesystem::path& file);

/// Routes:
///   POST /v1/chat                              {conversation_id, text, debug?}
///   GET  /v1/conversations/{id}/history?limit=N
///   GET  /healthz
///   POST /v1/admin/reload
class ChatService {
 public:
  ChatService(std::shared_ptr<Engine> engine, std::filesystem::path bot_dir);
  ~ChatService();
  ChatService(const ChatService&) = delete;
  ChatService& operator=(const ChatService&) = delete;

  /// Blocks until stop().
  bool listen(const std::string& host, int port);
  /// Returns the bound port, or -1.
  int bind_to_any_port(const std::string& host);
  bool listen_after_bind();
  void wait_until_ready() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace convo
