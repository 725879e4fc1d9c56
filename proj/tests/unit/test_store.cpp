#include "convo/bot.hpp"
#include "convo/errors.hpp"
#include "convo/history.hpp"
#include "convo/retrieval.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace convo;
using convo::testing::TempDir;
using convo::testing::write_bot;
using convo::testing::write_file;

namespace {
HistoryRecord rec(const std::string& id, std::size_t index, std::string raw = "text") {
  HistoryRecord r;
  r.conversation_id = id;
  r.index = index;
  r.timestamp_ms = 1000 + static_cast<std::int64_t>(index);
  r.speaker = index % 2 ? Speaker::Bot : Speaker::User;
  r.raw = raw;
  r.resolved = raw;
  r.source = index % 2 ? "kb" : "-";
  return r;
}

std::vector<Located> load_errors(const std::filesystem::path& dir) {
  try {
    load_bot_definition(dir);
  } catch (const LoadError& e) {
    return e.errors();
  }
  return {};
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}
}  // namespace

TEST_CASE("escape round trip on random text") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<int> special(0, 3);
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const int n = i % 50;
    for (int k = 0; k < n; ++k) {
      const int pick = special(rng);
      s += pick == 0 ? '\t' : pick == 1 ? '\n' : pick == 2 ? '\\' : static_cast<char>(byte(rng));
    }
    const auto escaped = escape_field(s);
    REQUIRE(escaped.find('\t') == std::string::npos);
    REQUIRE(escaped.find('\n') == std::string::npos);
    REQUIRE(unescape_field(escaped) == s);
  }
  CHECK(escape_field("a\tb") == "a\\tb");
  CHECK_THROWS_AS(unescape_field("x\\"), std::invalid_argument);
  CHECK_THROWS_AS(unescape_field("\\q"), std::invalid_argument);
}

TEST_CASE("record format round trip") {
  auto r = rec("c-1", 3, "tab\there, newline\nthere, slash \\ end");
  CHECK(parse_record(format_record(r)) == r);
  CHECK_THROWS_AS(parse_record("c\t0\t1\tuser\traw"), std::invalid_argument);
  CHECK_THROWS_AS(parse_record("c\tx\t1\tuser\traw\traw\t-"), std::invalid_argument);
  CHECK_THROWS_AS(parse_record("c\t0\t1\trobot\traw\traw\t-"), std::invalid_argument);
}

TEST_CASE("file history store") {
  TempDir dir;
  FileHistoryStore store(dir.path());

  CHECK(store.load_history("unknown").empty());
  store.append_turn(rec("c1", 0));
  CHECK_THROWS_AS(store.append_turn(rec("c1", 0)), SequencingError);
  CHECK_THROWS_AS(store.append_turn(rec("c1", 2)), SequencingError);
  CHECK_THROWS_AS(store.append_turn(rec("fresh", 1)), SequencingError);
  for (std::size_t i = 1; i < 5; ++i) store.append_turn(rec("c1", i));
  store.append_turn(rec("c1", 5));
  CHECK_THROWS_AS(store.append_turn(rec("c1", 3)), SequencingError);

  const std::vector<HistoryRecord> batch{rec("c1", 6), rec("c1", 8)};
  CHECK_THROWS_AS(store.append_batch(batch), SequencingError);
  CHECK(store.load_history("c1").size() == 6);  // nothing from the bad batch

  const auto tail = FileHistoryStore(dir.path()).load_history("c1", 3);
  REQUIRE(tail.size() == 3);
  CHECK(tail[0].index == 3);
  CHECK(tail[2].index == 5);

  // A fresh store picks up where the file left off.
  FileHistoryStore reopened(dir.path());
  CHECK_THROWS_AS(reopened.append_turn(rec("c1", 0)), SequencingError);
  reopened.append_turn(rec("c1", 6, "tab\tand\nnewline"));
  CHECK(reopened.load_history("c1", 1)[0].raw == "tab\tand\nnewline");

  CHECK(store.path_for("c1") == dir.path() / "c1.log");
}

TEST_CASE("corrupted history line is reported with its number") {
  TempDir dir;
  FileHistoryStore store(dir.path());
  store.append_turn(rec("c", 0));
  store.append_turn(rec("c", 1));
  {
    std::ofstream out(store.path_for("c"), std::ios::app);
    out << "c\t2\tbroken\n";
  }
  try {
    FileHistoryStore(dir.path()).load_history("c");
    FAIL("expected LoadError");
  } catch (const LoadError& e) {
    REQUIRE(e.errors().size() == 1);
    CHECK(e.errors()[0].line == 3);
  }
}

TEST_CASE("memory history store") {
  MemoryHistoryStore store;
  store.append_turn(rec("m", 0));
  CHECK_THROWS_AS(store.append_turn(rec("m", 2)), SequencingError);
  for (std::size_t i = 1; i < 7; ++i) store.append_turn(rec("m", i));
  const auto last = store.load_history("m", 3);
  REQUIRE(last.size() == 3);
  CHECK(last[0].index == 4);
  CHECK(last[2].index == 6);
  CHECK(store.load_history("other").empty());
}

TEST_CASE("load_bot_definition") {
  SUBCASE("demo bot") {
    const auto bot = load_bot_definition(convo::testing::demo_bot_dir());
    CHECK(bot->name == "DemoBot");
    CHECK(bot->intents.find("book_restaurant") != nullptr);
    CHECK(bot->gazetteer.find("klm") != nullptr);
    CHECK(bot->index.size() > 0);
  }
  SUBCASE("dangling triple subject cites the line") {
    TempDir dir;
    write_bot(dir.path(), {{"entities.txt", "klm\tKLM\tORG\t\t\n"},
                           {"triples.txt", "# comment\nklm\tfounded_in\t1919\nghost\tfounded_in\t1920\n"}});
    const auto errors = load_errors(dir.path());
    REQUIRE(errors.size() == 1);
    CHECK(ends_with(errors[0].file, "triples.txt"));
    CHECK(errors[0].line == 3);
  }
  SUBCASE("mixed embedding dimensions") {
    TempDir dir;
    write_bot(dir.path(), {{"embeddings.txt", "a 1 2\nb 1 2 3\n"}});
    const auto errors = load_errors(dir.path());
    REQUIRE(errors.size() == 1);
    CHECK(ends_with(errors[0].file, "embeddings.txt"));
    CHECK(errors[0].line == 2);
    CHECK(errors[0].message.find("dimension") != std::string::npos);
  }
  SUBCASE("missing file") {
    TempDir dir;
    write_bot(dir.path(), {});
    std::filesystem::remove(dir.path() / "embeddings.txt");
    const auto errors = load_errors(dir.path());
    REQUIRE(errors.size() == 1);
    CHECK(ends_with(errors[0].file, "embeddings.txt"));
  }
  SUBCASE("filter terms may not block the fallback reply") {
    TempDir dir;
    write_bot(dir.path(), {{"filter.txt", "damn\nsure\n"}});
    const auto errors = load_errors(dir.path());
    REQUIRE(errors.size() == 1);
    CHECK(ends_with(errors[0].file, "filter.txt"));
    CHECK(errors[0].line == 2);
  }
  SUBCASE("every problem is reported") {
    TempDir dir;
    write_bot(dir.path(), {{"templates.txt", "intent\t-\tnope\thi\nbackstory\t-\t* x *\t{PLACE}\n"},
                           {"topics.txt", "t\tword\tnot-a-number\n"},
                           {"entities.txt", "x\tX\tANIMAL\t\t\n"}});
    const auto errors = load_errors(dir.path());
    CHECK(errors.size() == 4);
  }
  SUBCASE("bot name defaults to the directory name") {
    TempDir dir;
    write_bot(dir.path() / "travelbot", {});
    CHECK(load_bot_definition(dir.path() / "travelbot")->name == "travelbot");
  }
}

TEST_CASE("build_corpus_index") {
  const WordSet stop{"to", "are", "i", "has"};
  const std::vector<Document> docs{
      {0, "flights to rome are lovely", 1}, {1, "i cook pasta", 2}, {2, "rome has great pizza", 3}};

  const auto empty = build_corpus_index({}, stop);
  CHECK(empty.size() == 0);
  CHECK(empty.search(std::vector<std::string>{"rome"}, 3).empty());

  const auto index = build_corpus_index(docs, stop);
  CHECK(index.df("rome") == 2);
  CHECK(index.idf("rome") == doctest::Approx(1.0));
  CHECK(index.idf("pizza") == doctest::Approx(std::log(3.0 / 2.0) + 1.0));

  auto shuffled = docs;
  std::mt19937 rng(7);
  const std::vector<std::vector<std::string>> queries{{"rome"}, {"rome", "pizza"}, {"pasta", "lovely", "x"}};
  for (int round = 0; round < 5; ++round) {
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto other = build_corpus_index(shuffled, stop);
    for (const auto& q : queries) {
      const auto a = index.scores(q);
      const auto b = other.scores(q);
      for (std::size_t i = 0; i < shuffled.size(); ++i) CHECK(b[i] == a[shuffled[i].id]);
    }
  }
}

TEST_CASE("fresh text ingestion from a local file") {
  TempDir dir;
  write_file(dir.path() / "fresh.txt", "100\tsnow in rome today\n300\trome marathon on sunday\n200\tparis is rainy\n");
  LocalFileSource source(dir.path() / "fresh.txt");
  const auto fetched = source.fetch("rome news", 5);
  REQUIRE(fetched.size() == 2);
  CHECK(fetched[0].text == "rome marathon on sunday");

  const auto base = build_corpus_index({{0, "rome has great pizza", 1}}, {});
  const auto grown = ingest(base, source, "rome", 1);
  CHECK(base.size() == 1);
  REQUIRE(grown.size() == 2);
  CHECK(grown.documents()[1].text == "rome marathon on sunday");
  CHECK(grown.documents()[1].id == 1);
}
