#include "convo/service.hpp"
#include "convo/errors.hpp"

#include <httplib.h>
#include <json.hpp>

#include <charconv>
#include <fstream>

namespace convo {

using nlohmann::json;

ServiceConfig parse_service_config(std::istream& in, const std::string& source_name,
                                   const std::filesystem::path& base_dir) {
  ServiceConfig config;
  std::vector<Located> errors;
  bool have_bot = false;
  bool have_data = false;
  auto resolve = [&](const std::string& value) {
    std::filesystem::path p(value);
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  };
  for (const auto& kv : read_key_values(in, source_name)) {
    if (kv.key == "bot_dir") {
      config.bot_dir = resolve(kv.value);
      have_bot = !kv.value.empty();
    } else if (kv.key == "data_dir") {
      config.data_dir = resolve(kv.value);
      have_data = !kv.value.empty();
    } else if (kv.key == "bind_addr") {
      const auto colon = kv.value.rfind(':');
      int port = 0;
      const char* end = kv.value.data() + kv.value.size();
      if (colon == std::string::npos || colon == 0) {
        errors.push_back({source_name, kv.line, "bind_addr must be host:port"});
        continue;
      }
      auto [ptr, ec] = std::from_chars(kv.value.data() + colon + 1, end, port);
      if (ec != std::errc() || ptr != end || port < 0 || port > 65535) {
        errors.push_back({source_name, kv.line, "invalid port in bind_addr"});
        continue;
      }
      config.host = kv.value.substr(0, colon);
      config.port = port;
    } else {
      switch (apply_override(config.overrides, kv)) {
        case OverrideResult::Applied: break;
        case OverrideResult::UnknownKey:
          errors.push_back({source_name, kv.line, "unknown key '" + kv.key + "'"});
          break;
        case OverrideResult::BadValue:
          errors.push_back({source_name, kv.line, "invalid value for '" + kv.key + "'"});
          break;
      }
    }
  }
  if (!have_bot) errors.push_back({source_name, 0, "bot_dir is required"});
  if (!have_data) errors.push_back({source_name, 0, "data_dir is required"});
  if (!errors.empty()) throw LoadError(std::move(errors));
  return config;
}

ServiceConfig load_service_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw LoadError(Located{file.string(), 0, "cannot open config file"});
  return parse_service_config(in, file.string(), file.parent_path());
}

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, json{{"error", message}});
}

json to_json(const FrameDebug& d) {
  json mentions = json::array();
  for (const auto& m : d.mentions) {
    mentions.push_back({{"id", m.entity_id}, {"type", m.type}, {"surface", m.surface}});
  }
  json top = nullptr;
  if (d.top_intent) top = {{"name", d.top_intent->name}, {"score", d.top_intent->similarity}};
  return {{"topic", {{"name", d.topic.name}, {"confidence", d.topic.confidence}}},
          {"top_intent", top},
          {"resolved", d.resolved},
          {"mentions", mentions}};
}

json to_json(const ChatResponse& r) {
  json out{{"reply", r.reply}, {"source", std::string(to_string(r.source))}, {"rank_size", r.rank_size}};
  if (r.frame_debug) out["frame_debug"] = to_json(*r.frame_debug);
  return out;
}

json to_json(const HistoryRecord& r) {
  return {{"index", r.index},
          {"speaker", std::string(to_string(r.speaker))},
          {"text", r.raw},
          {"resolved", r.resolved},
          {"source", r.source},
          {"timestamp_ms", r.timestamp_ms}};
}

}  // namespace

struct ChatService::Impl {
  std::shared_ptr<Engine> engine;
  std::filesystem::path bot_dir;
  httplib::Server server;

  void routes();
};

void ChatService::Impl::routes() {
  server.Post("/v1/chat", [this](const httplib::Request& req, httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::parse_error& e) {
      return send_error(res, 400, std::string("malformed JSON: ") + e.what());
    }
    if (!body.is_object()) return send_error(res, 400, "body must be a JSON object");
    if (!body.contains("conversation_id") || !body["conversation_id"].is_string()) {
      return send_error(res, 400, "conversation_id must be a string");
    }
    if (!body.contains("text") || !body["text"].is_string()) {
      return send_error(res, 400, "text must be a string");
    }
    ChatRequest request{body["conversation_id"].get<std::string>(), body["text"].get<std::string>(),
                        std::nullopt};
    if (body.contains("debug")) {
      if (!body["debug"].is_boolean()) return send_error(res, 400, "debug must be a boolean");
      request.debug = body["debug"].get<bool>();
    }
    try {
      send_json(res, 200, to_json(engine->respond(request)));
    } catch (const ValidationError& e) {
      send_error(res, 400, e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    }
  });

  server.Get(R"(/v1/conversations/([^/]+)/history)",
             [this](const httplib::Request& req, httplib::Response& res) {
               const std::string id = req.matches[1];
               if (!valid_conversation_id(id)) return send_error(res, 400, "invalid conversation id");
               std::size_t limit = kAllRecords;
               if (req.has_param("limit")) {
                 const auto value = req.get_param_value("limit");
                 auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), limit);
                 if (ec != std::errc() || ptr != value.data() + value.size()) {
                   return send_error(res, 400, "limit must be a non-negative integer");
                 }
               }
               try {
                 json turns = json::array();
                 for (const auto& r : engine->history(id, limit)) turns.push_back(to_json(r));
                 send_json(res, 200, turns);
               } catch (const std::exception& e) {
                 send_error(res, 500, e.what());
               }
             });

  server.Get("/healthz", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, json{{"status", "ok"}, {"bot", engine->bot()->name}});
  });

  server.Post("/v1/admin/reload", [this](const httplib::Request&, httplib::Response& res) {
    try {
      engine->reload(bot_dir);
      send_json(res, 200, json{{"status", "reloaded"}, {"bot", engine->bot()->name}});
    } catch (const LoadError& e) {
      send_error(res, 409, e.what());
    }
  });

  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
    send_error(res, res.status, res.status == 404 ? "not found" : "request failed");
    return httplib::Server::HandlerResponse::Handled;
  });
}

ChatService::ChatService(std::shared_ptr<Engine> engine, std::filesystem::path bot_dir)
    : impl_(std::make_unique<Impl>()) {
  impl_->engine = std::move(engine);
  impl_->bot_dir = std::move(bot_dir);
  impl_->routes();
}

ChatService::~ChatService() { stop(); }

bool ChatService::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }
int ChatService::bind_to_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }
bool ChatService::listen_after_bind() { return impl_->server.listen_after_bind(); }
void ChatService::wait_until_ready() const { impl_->server.wait_until_ready(); }
void ChatService::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace convo
