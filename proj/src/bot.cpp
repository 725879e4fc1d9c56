#include "convo/bot.hpp"
#include "convo/errors.hpp"
#include "convo/replygen.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace convo {

const std::vector<std::string>& required_bot_files() {
  static const std::vector<std::string> files{
      "intents.txt", "topics.txt",     "entities.txt",  "templates.txt", "triples.txt",
      "predicates.txt", "embeddings.txt", "stopwords.txt", "filter.txt",    "corpus.txt"};
  return files;
}

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> fields;
};

/// Collects located errors while the files of one bot directory are read.
class Reader {
 public:
  explicit Reader(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::optional<std::string> slurp(const std::string& file) {
    std::ifstream in(dir_ / file, std::ios::binary);
    if (!in) {
      error(file, 0, "missing file");
      return std::nullopt;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  // Tab-split data lines; comments and blanks skipped.
  std::optional<std::vector<Line>> lines(const std::string& file) {
    auto text = slurp(file);
    if (!text) return std::nullopt;
    std::vector<Line> out;
    std::istringstream in(*text);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (trim(line).empty() || line.front() == '#') continue;
      out.push_back({n, split(line, '\t')});
    }
    return out;
  }

  void error(const std::string& file, std::size_t line, std::string message) {
    errors_.push_back({(dir_ / file).string(), line, std::move(message)});
  }

  std::string where(const std::string& file) const { return (dir_ / file).string(); }
  std::vector<Located>& errors() { return errors_; }

 private:
  std::filesystem::path dir_;
  std::vector<Located> errors_;
};

bool parse_double(const std::string& s, double& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

WordSet read_terms(Reader& reader, const std::string& file, bool is_filter = false) {
  WordSet terms;
  auto lines = reader.lines(file);
  if (!lines) return terms;
  for (const auto& l : *lines) {
    const auto term = trim(l.fields.front());
    const auto tokens = tokenize(term);
    if (l.fields.size() != 1 || tokens.size() != 1) {
      reader.error(file, l.number, "expected a single term per line");
      continue;
    }
    if (is_filter && blocks_fallback(tokens.front().normalized)) {
      reader.error(file, l.number, "term '" + tokens.front().normalized + "' would block the fallback reply");
      continue;
    }
    terms.insert(tokens.front().normalized);
  }
  return terms;
}

std::vector<IntentDefinition> read_intents(Reader& reader) {
  const std::string file = "intents.txt";
  std::vector<IntentDefinition> intents;
  std::map<std::string, std::size_t> pos;
  std::map<std::string, std::size_t> first_line;
  auto lines = reader.lines(file);
  if (!lines) return intents;
  for (const auto& l : *lines) {
    const auto& f = l.fields;
    if (f.size() < 2 || f[0].empty()) {
      reader.error(file, l.number, "expected intent<TAB>example");
      continue;
    }
    auto [it, fresh] = pos.emplace(f[0], intents.size());
    if (fresh) {
      intents.push_back({f[0], {}, std::nullopt});
      first_line[f[0]] = l.number;
    }
    auto& intent = intents[it->second];
    if (f[1] == "@threshold") {
      double v = 0;
      if (f.size() != 3 || !parse_double(f[2], v) || v < 0.0 || v > 1.0) {
        reader.error(file, l.number, "expected intent<TAB>@threshold<TAB>value in [0,1]");
        continue;
      }
      intent.threshold = v;
      continue;
    }
    if (f.size() != 2) {
      reader.error(file, l.number, "expected intent<TAB>example");
      continue;
    }
    if (tokenize(f[1]).empty()) {
      reader.error(file, l.number, "example has no tokens");
      continue;
    }
    intent.examples.push_back(f[1]);
  }
  for (const auto& intent : intents) {
    if (intent.examples.empty()) {
      reader.error(file, first_line[intent.name], "intent '" + intent.name + "' has no examples");
    }
  }
  return intents;
}

std::vector<TopicDefinition> read_topics(Reader& reader) {
  const std::string file = "topics.txt";
  std::vector<TopicDefinition> topics;
  std::map<std::string, std::size_t> pos;
  auto lines = reader.lines(file);
  if (!lines) return topics;
  for (const auto& l : *lines) {
    const auto& f = l.fields;
    double w = 0;
    if (f.size() != 3 || f[0].empty() || f[1].empty()) {
      reader.error(file, l.number, "expected topic<TAB>keyword<TAB>weight");
      continue;
    }
    if (!parse_double(f[2], w) || !(w > 0.0)) {
      reader.error(file, l.number, "weight must be a positive number");
      continue;
    }
    auto [it, fresh] = pos.emplace(f[0], topics.size());
    if (fresh) topics.push_back({f[0], {}});
    topics[it->second].keywords[case_fold(f[1])] = w;
  }
  return topics;
}

std::vector<EntityRecord> read_entities(Reader& reader) {
  const std::string file = "entities.txt";
  std::vector<EntityRecord> records;
  std::set<std::string> ids;
  auto lines = reader.lines(file);
  if (!lines) return records;
  for (const auto& l : *lines) {
    const auto& f = l.fields;
    if (f.size() < 4 || f.size() > 5) {
      reader.error(file, l.number, "expected id<TAB>canonical<TAB>TYPE<TAB>aliases<TAB>description");
      continue;
    }
    EntityRecord r;
    r.id = f[0];
    r.canonical = f[1];
    const auto type = parse_entity_type(f[2]);
    if (r.id.empty() || trim(r.canonical).empty()) {
      reader.error(file, l.number, "empty id or canonical name");
      continue;
    }
    if (!type) {
      reader.error(file, l.number, "unknown entity type '" + f[2] + "'");
      continue;
    }
    if (!ids.insert(r.id).second) {
      reader.error(file, l.number, "duplicate entity id '" + r.id + "'");
      continue;
    }
    r.type = *type;
    r.aliases.push_back(r.canonical);
    for (const auto& a : split(f[3], '|')) {
      if (!trim(a).empty()) r.aliases.emplace_back(trim(a));
    }
    if (f.size() == 5) r.description = f[4];
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<RuleTemplate> read_templates(Reader& reader, const IntentClassifier& intents) {
  const std::string file = "templates.txt";
  std::vector<RuleTemplate> templates;
  auto lines = reader.lines(file);
  if (!lines) return templates;
  for (const auto& l : *lines) {
    const auto& f = l.fields;
    if (f.size() != 4) {
      reader.error(file, l.number, "expected kind<TAB>priority<TAB>trigger<TAB>response");
      continue;
    }
    const auto kind = parse_template_kind(f[0]);
    if (!kind) {
      reader.error(file, l.number, "unknown template kind '" + f[0] + "'");
      continue;
    }
    std::optional<int> priority;
    if (!f[1].empty() && f[1] != "-") {
      int p = 0;
      auto [ptr, ec] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), p);
      if (ec != std::errc() || ptr != f[1].data() + f[1].size()) {
        reader.error(file, l.number, "priority must be an integer or '-'");
        continue;
      }
      priority = p;
    }
    if (*kind == TemplateKind::Intent && intents.find(f[2]) == nullptr) {
      reader.error(file, l.number, "unknown intent '" + f[2] + "'");
      continue;
    }
    try {
      templates.push_back(make_template(*kind, priority, f[2], f[3]));
    } catch (const std::invalid_argument& e) {
      reader.error(file, l.number, e.what());
    }
  }
  return templates;
}

std::vector<KnowledgeTriple> read_triples(Reader& reader, const Gazetteer& gazetteer) {
  const std::string file = "triples.txt";
  std::vector<KnowledgeTriple> triples;
  auto lines = reader.lines(file);
  if (!lines) return triples;
  for (const auto& l : *lines) {
    const auto& f = l.fields;
    if (f.size() != 3 || f[1].empty() || f[2].empty()) {
      reader.error(file, l.number, "expected subject_id<TAB>predicate<TAB>object");
      continue;
    }
    if (gazetteer.find(f[0]) == nullptr) {
      reader.error(file, l.number, "unknown subject entity '" + f[0] + "'");
      continue;
    }
    triples.push_back({f[0], f[1], f[2], gazetteer.find(f[2]) != nullptr});
  }
  return triples;
}

PredicateLexicon read_predicates(Reader& reader) {
  const std::string file = "predicates.txt";
  PredicateLexicon lexicon;
  auto lines = reader.lines(file);
  if (!lines) return lexicon;
  for (const auto& l : *lines) {
    const auto& f = l.fields;
    if (f.size() != 2 || tokenize(f[0]).size() != 1 || f[1].empty()) {
      reader.error(file, l.number, "expected word<TAB>predicate");
      continue;
    }
    lexicon[case_fold(f[0])] = f[1];
  }
  return lexicon;
}

std::vector<Document> read_corpus(Reader& reader) {
  const std::string file = "corpus.txt";
  std::vector<Document> docs;
  auto lines = reader.lines(file);
  if (!lines) return docs;
  for (const auto& l : *lines) {
    const auto& f = l.fields;
    std::int64_t ts = 0;
    if (f.size() != 2) {
      reader.error(file, l.number, "expected timestamp_ms<TAB>text");
      continue;
    }
    auto [ptr, ec] = std::from_chars(f[0].data(), f[0].data() + f[0].size(), ts);
    if (ec != std::errc() || ptr != f[0].data() + f[0].size()) {
      reader.error(file, l.number, "invalid timestamp '" + f[0] + "'");
      continue;
    }
    docs.push_back({docs.size(), f[1], ts});
  }
  return docs;
}

void read_bot_conf(Reader& reader, const std::filesystem::path& dir, BotDefinition& bot) {
  const std::string file = "bot.conf";
  std::ifstream in(dir / file);
  if (!in) return;
  try {
    for (const auto& kv : read_key_values(in, reader.where(file))) {
      if (kv.key == "name") {
        if (kv.value.empty()) reader.error(file, kv.line, "empty bot name");
        else bot.name = kv.value;
        continue;
      }
      switch (apply_override(bot.overrides, kv)) {
        case OverrideResult::Applied: break;
        case OverrideResult::UnknownKey: reader.error(file, kv.line, "unknown key '" + kv.key + "'"); break;
        case OverrideResult::BadValue: reader.error(file, kv.line, "invalid value for '" + kv.key + "'"); break;
      }
    }
  } catch (const LoadError& e) {
    for (const auto& err : e.errors()) reader.errors().push_back(err);
  }
}

}  // namespace

std::shared_ptr<const BotDefinition> load_bot_definition(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw LoadError(Located{dir.string(), 0, "not a bot directory"});
  }
  Reader reader(dir);
  auto bot = std::make_shared<BotDefinition>();
  const auto abs = std::filesystem::absolute(dir).lexically_normal();
  bot->name = abs.has_filename() ? abs.filename().string() : abs.parent_path().filename().string();
  read_bot_conf(reader, dir, *bot);

  bot->stopwords = read_terms(reader, "stopwords.txt");
  bot->filter = read_terms(reader, "filter.txt", true);

  if (auto text = reader.slurp("embeddings.txt")) {
    std::istringstream in(*text);
    try {
      bot->embeddings = EmbeddingTable::parse(in, reader.where("embeddings.txt"));
    } catch (const LoadError& e) {
      for (const auto& err : e.errors()) reader.errors().push_back(err);
    }
  }

  bot->intents = IntentClassifier(read_intents(reader), bot->embeddings, bot->stopwords);
  bot->topics = read_topics(reader);
  bot->gazetteer = Gazetteer(read_entities(reader), bot->stopwords);
  bot->templates = read_templates(reader, bot->intents);
  bot->triples = read_triples(reader, bot->gazetteer);
  bot->predicates = read_predicates(reader);

  const auto corpus = read_corpus(reader);
  std::vector<std::string> sentences;
  for (const auto& d : corpus) sentences.push_back(d.text);
  bot->generator = MarkovGenerator(sentences);
  bot->index = build_corpus_index(corpus, bot->stopwords);

  if (!reader.errors().empty()) throw LoadError(std::move(reader.errors()));
  return bot;
}

}  // namespace convo
