#include "convo/bot.hpp"
#include "convo/errors.hpp"
#include "convo/nlu.hpp"
#include "support.hpp"

#include <doctest.h>

#include <sstream>

using namespace convo;
using convo::testing::make_bot;

namespace {
EmbeddingTable parse_table(const std::string& text) {
  std::istringstream in(text);
  return EmbeddingTable::parse(in, "embeddings.txt");
}

std::shared_ptr<const BotDefinition> demo() {
  static auto bot = load_bot_definition(convo::testing::demo_bot_dir());
  return bot;
}
}  // namespace

TEST_CASE("embed_utterance") {
  const auto table = parse_table("#dim 2\ngood 1 0\nbad 0 1\n");
  const WordSet stop{"the"};

  CHECK_FALSE(embed_utterance({}, table, stop).has_value());
  CHECK_FALSE(embed_utterance(tokenize("the unknown"), table, stop).has_value());

  const auto v = embed_utterance(tokenize("good bad"), table, stop);
  REQUIRE(v.has_value());
  CHECK(*v == std::vector<double>{0.5, 0.5});

  const auto single = embed_utterance(tokenize("GOOD"), table, stop);
  REQUIRE(single.has_value());
  CHECK(*single == *table.lookup("good"));
}

TEST_CASE("embedding table parse errors are located") {
  CHECK_THROWS_AS(parse_table("#dim 2\na 1 2\nb 1 2 3\n"), LoadError);
  try {
    parse_table("a 1 2\nb 1 2 3\n");
    FAIL("expected LoadError");
  } catch (const LoadError& e) {
    REQUIRE(e.errors().size() == 1);
    CHECK(e.errors()[0].line == 2);
  }
}

TEST_CASE("classify_intent on a two-word table") {
  const auto bot = make_bot({
      {"embeddings.txt", "#dim 2\nhello 1 0\nbuy 0 1\n"},
      {"intents.txt", "greet\thello\nshop\tbuy\n"},
  });
  const auto frame = analyze("hello", *bot);
  REQUIRE(frame.intents.size() == 2);
  CHECK(frame.intents[0] == IntentScore{"greet", 1.0});
  CHECK(frame.intents[1] == IntentScore{"shop", 0.0});
}

TEST_CASE("classify_intent falls back to token overlap without vectors") {
  const auto bot = make_bot({
      {"embeddings.txt", "#dim 2\nhello 1 0\n"},
      {"intents.txt", "greet\thello\nweather\tsunny day today\n"},
  });
  const auto frame = analyze("sunny afternoon", *bot);
  REQUIRE(frame.intents.size() == 2);
  CHECK(frame.intents[0].name == "weather");
  CHECK(frame.intents[0].similarity == doctest::Approx(1.0 / 4.0));
  CHECK(frame.intents[1] == IntentScore{"greet", 0.0});
}

TEST_CASE("classify_intent ties break by name") {
  const auto bot = make_bot({
      {"embeddings.txt", "#dim 2\nhi 1 0\n"},
      {"intents.txt", "zeta\thi\nalpha\thi\n"},
  });
  const auto frame = analyze("hi", *bot);
  REQUIRE(frame.intents.size() == 2);
  CHECK(frame.intents[0].name == "alpha");
  CHECK(frame.intents[1].name == "zeta");
}

TEST_CASE("paraphrased booking request on the demo bot") {
  const auto bot = demo();
  const auto paraphrase = analyze("I need a table in a pizzeria", *bot);
  REQUIRE_FALSE(paraphrase.intents.empty());
  CHECK(paraphrase.intents[0].name == "book_restaurant");
  // Frozen from an independent cosine computation over the bundled table.
  CHECK(paraphrase.intents[0].similarity == doctest::Approx(0.9931645385214267).epsilon(1e-12));

  const auto original = analyze("I want to make a reservation in an Italian restaurant", *bot);
  REQUIRE_FALSE(original.intents.empty());
  CHECK(original.intents[0].name == "book_restaurant");
  CHECK(original.intents[0].similarity == doctest::Approx(1.0));
}

TEST_CASE("intent ranking is invariant under scaling the embedding table") {
  const std::string intents =
      "greet\thello there\nshop\tbuy shoes\nshop\tpurchase a bag\nweather\tsunny rain\n";
  const auto base = make_bot({
      {"embeddings.txt",
       "#dim 3\nhello 1 0.1 0\nthere 0.2 0.1 0\nbuy 0 1 0.3\nshoes 0.1 0.8 0\n"
       "purchase 0 0.9 0.2\nbag 0.3 0.7 0\nsunny 0 0 1\nrain 0.1 0 0.9\n"},
      {"intents.txt", intents},
  });
  const auto scaled = make_bot({
      {"embeddings.txt",
       "#dim 3\nhello 4 0.4 0\nthere 0.8 0.4 0\nbuy 0 4 1.2\nshoes 0.4 3.2 0\n"
       "purchase 0 3.6 0.8\nbag 1.2 2.8 0\nsunny 0 0 4\nrain 0.4 0 3.6\n"},
      {"intents.txt", intents},
  });
  for (const char* text : {"hello", "buy a bag", "rain and sun", "there shoes sunny", "nothing"}) {
    const auto a = analyze(text, *base).intents;
    const auto b = analyze(text, *scaled).intents;
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].name == b[i].name);
      CHECK(a[i].similarity == doctest::Approx(b[i].similarity).epsilon(1e-12));
    }
  }
}

TEST_CASE("detect_topic") {
  const std::vector<TopicDefinition> topics{
      {"flights", {{"flight", 2.0}, {"seat", 1.0}}},
      {"dining", {{"pizza", 3.0}}},
      {"boats", {{"seat", 3.0}}},
  };
  CHECK(detect_topic(tokenize("nothing here"), topics) == TopicScore{"general", 0.0});
  const auto t = detect_topic(tokenize("book a flight seat"), std::span(topics).first(2));
  CHECK(t.name == "flights");
  CHECK(t.confidence == doctest::Approx(0.75));
  // boats and dining both score 3: the smaller name wins.
  CHECK(detect_topic(tokenize("pizza on a seat"), std::vector<TopicDefinition>{topics[1], topics[2]}).name ==
        "boats");
  CHECK(detect_topic(tokenize("pizza seat"), std::vector<TopicDefinition>{topics[2], topics[1]}).name ==
        "boats");
  // Repeated keywords count once.
  CHECK(detect_topic(tokenize("flight flight"), topics).confidence == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("link_entities") {
  const WordSet stop{"the", "a", "i", "was"};
  SUBCASE("single candidate") {
    const Gazetteer g({{"klm", "KLM", {"KLM"}, EntityType::Org, "a Dutch airline"}}, stop);
    const auto m = g.link(tokenize("when was klm founded"));
    REQUIRE(m.size() == 1);
    CHECK(m[0].resolved == "klm");
    CHECK(m[0].begin == 2);
    CHECK(m[0].end == 3);
    CHECK(m[0].type == EntityType::Org);
  }
  SUBCASE("longest match") {
    const Gazetteer g({{"new_york", "New York", {"New York"}, EntityType::Place, ""},
                       {"york", "York", {"York"}, EntityType::Place, ""}},
                      stop);
    const auto m = g.link(tokenize("i love new york"));
    REQUIRE(m.size() == 1);
    CHECK(m[0].resolved == "new_york");
    CHECK(m[0].begin == 2);
    CHECK(m[0].end == 4);
  }
  SUBCASE("disambiguation by description overlap") {
    const Gazetteer g({{"mercury_planet", "Mercury", {"Mercury"}, EntityType::Thing,
                        "the smallest planet, it orbits the sun"},
                       {"mercury_element", "Mercury", {"Mercury"}, EntityType::Thing,
                        "a chemical element and liquid metal"}},
                      stop);
    const auto m = g.link(tokenize("mercury orbits the sun"));
    REQUIRE(m.size() == 1);
    CHECK(m[0].candidates == std::vector<std::string>{"mercury_element", "mercury_planet"});
    CHECK(m[0].resolved == "mercury_planet");
    CHECK(m[0].score == 2.0);

    const auto tie = g.link(tokenize("mercury"));
    REQUIRE(tie.size() == 1);
    CHECK(tie[0].resolved == "mercury_element");
    CHECK(tie[0].score == 0.0);
  }
  SUBCASE("no records") { CHECK(Gazetteer({}, stop).link(tokenize("anything at all")).empty()); }
  SUBCASE("mentions never overlap and resolve among candidates") {
    const Gazetteer g({{"a", "Alpha Beta", {"Alpha Beta", "beta"}, EntityType::Thing, ""},
                       {"b", "Beta Gamma", {"Beta Gamma"}, EntityType::Thing, ""}},
                      stop);
    const auto m = g.link(tokenize("alpha beta gamma beta gamma"));
    REQUIRE(m.size() == 2);
    CHECK(m[0].end <= m[1].begin);
    CHECK(m[0].resolved == "a");
    CHECK(m[1].resolved == "b");
  }
}

TEST_CASE("analyze") {
  const auto bot = demo();
  const auto empty = analyze("", *bot);
  CHECK(empty.tokens.empty());
  CHECK(empty.topic == TopicScore{"general", 0.0});
  CHECK(empty.mentions.empty());

  const auto a = analyze("when was klm founded, and who runs Schiphol?", *bot);
  const auto b = analyze("when was klm founded, and who runs Schiphol?", *bot);
  CHECK(a == b);
  REQUIRE(a.mentions.size() == 2);
  CHECK(a.mentions[0].resolved == "klm");
  CHECK(a.mentions[1].resolved == "schiphol");
  for (std::size_t i = 1; i < a.intents.size(); ++i) {
    const auto& p = a.intents[i - 1];
    const auto& q = a.intents[i];
    CHECK((p.similarity > q.similarity || (p.similarity == q.similarity && p.name < q.name)));
  }
}
