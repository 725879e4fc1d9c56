// convo: chat REPL, bot validation, scripted evaluation and the HTTP service.

#include "convo/bot.hpp"
#include "convo/engine.hpp"
#include "convo/errors.hpp"
#include "convo/eval.hpp"
#include "convo/history.hpp"
#include "convo/service.hpp"

#include <CLI11.hpp>

#include <unistd.h>

#include <csignal>
#include <fstream>
#include <iostream>

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

convo::ChatService* g_service = nullptr;

void on_signal(int) {
  if (g_service != nullptr) g_service->stop();
}

void print_load_error(const convo::LoadError& e) {
  for (const auto& err : e.errors()) std::cerr << "error: " << err.str() << '\n';
}

int run_chat(const std::string& bot_dir, const std::string& data_dir, const std::string& conversation) {
  std::shared_ptr<const convo::BotDefinition> bot;
  try {
    bot = convo::load_bot_definition(bot_dir);
  } catch (const convo::LoadError& e) {
    print_load_error(e);
    return kFailed;
  }
  if (!convo::valid_conversation_id(conversation)) {
    std::cerr << "error: invalid conversation id '" << conversation << "'\n";
    return kUsage;
  }
  convo::Engine engine(bot, std::make_shared<convo::FileHistoryStore>(data_dir));

  const bool interactive = ::isatty(STDIN_FILENO) != 0;
  std::string line;
  while (true) {
    if (interactive) std::cout << "> " << std::flush;
    if (!std::getline(std::cin, line)) break;
    if (convo::trim(line).empty()) continue;
    try {
      const auto response = engine.respond({conversation, line, std::nullopt});
      std::cout << response.reply << "  [" << convo::to_string(response.source) << "]" << std::endl;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
    }
  }
  return kOk;
}

int run_validate(const std::string& bot_dir) {
  try {
    const auto bot = convo::load_bot_definition(bot_dir);
    std::cout << "OK " << bot->name << '\n';
    return kOk;
  } catch (const convo::LoadError& e) {
    for (const auto& err : e.errors()) std::cout << err.str() << '\n';
    return kFailed;
  }
}

int run_eval(const std::string& bot_dir, const std::string& cases_file) {
  try {
    const auto bot = convo::load_bot_definition(bot_dir);
    std::ifstream in(cases_file);
    if (!in) throw convo::LoadError(convo::Located{cases_file, 0, "cannot open cases file"});
    const auto cases = convo::parse_eval_cases(in, cases_file);
    const auto report = convo::run_eval(bot, cases);
    report.print(std::cout);
    return report.all_passed() ? kOk : kFailed;
  } catch (const convo::LoadError& e) {
    print_load_error(e);
    return kFailed;
  }
}

int run_serve(const std::string& config_file) {
  convo::ServiceConfig config;
  std::shared_ptr<const convo::BotDefinition> bot;
  try {
    config = convo::load_service_config(config_file);
    bot = convo::load_bot_definition(config.bot_dir);
  } catch (const convo::LoadError& e) {
    print_load_error(e);
    return kFailed;
  }
  auto engine = std::make_shared<convo::Engine>(
      bot, std::make_shared<convo::FileHistoryStore>(config.data_dir), config.overrides);
  convo::ChatService service(engine, config.bot_dir);
  g_service = &service;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cout << "serving bot " << bot->name << " on " << config.host << ":" << config.port << std::endl;
  const bool ok = service.listen(config.host, config.port);
  g_service = nullptr;
  if (!ok) {
    std::cerr << "error: could not listen on " << config.host << ":" << config.port << '\n';
    return kFailed;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rule-cascade conversational agent"};
  app.require_subcommand(1);

  std::string bot_dir;
  std::string data_dir;
  std::string conversation = "cli";
  std::string cases_file;
  std::string config_file;

  auto* chat = app.add_subcommand("chat", "Interactive chat on stdin/stdout");
  chat->add_option("--bot", bot_dir, "Bot definition directory")->required();
  chat->add_option("--data", data_dir, "History data directory")->required();
  chat->add_option("--conversation", conversation, "Conversation id");

  auto* validate = app.add_subcommand("validate", "Load and check a bot definition");
  validate->add_option("--bot", bot_dir, "Bot definition directory")->required();

  auto* eval = app.add_subcommand("eval", "Run scripted dialogues and report");
  eval->add_option("--bot", bot_dir, "Bot definition directory")->required();
  eval->add_option("--cases", cases_file, "Cases file")->required();

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--config", config_file, "Service config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (chat->parsed()) return run_chat(bot_dir, data_dir, conversation);
  if (validate->parsed()) return run_validate(bot_dir);
  if (eval->parsed()) return run_eval(bot_dir, cases_file);
  if (serve->parsed()) return run_serve(config_file);
  return kUsage;
}
