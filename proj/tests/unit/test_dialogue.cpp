#include "convo/bot.hpp"
#include "convo/config.hpp"
#include "convo/context.hpp"
#include "convo/dialogue.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace convo;
using convo::testing::make_bot;

namespace {
const std::string kKlmEntity = "klm\tKLM\tORG\t\ta Dutch airline\n";

std::vector<std::string> texts(const std::vector<CandidateReply>& cands) {
  std::vector<std::string> out;
  for (const auto& c : cands) out.push_back(c.text);
  return out;
}

std::vector<CandidateReply> templates_for(const BotDefinition& bot, const std::string& text) {
  return match_templates(analyze(text, bot), bot.templates, bot, kDefaultIntentThreshold);
}
}  // namespace

TEST_CASE("source tags and default priorities") {
  CHECK(to_string(Source::Backstory) == "rule:backstory");
  CHECK(parse_source("kb") == Source::Kb);
  CHECK_FALSE(parse_source("rule").has_value());
  CHECK(default_priority(Source::Backstory) == 300);
  CHECK(default_priority(Source::Intent) == 200);
  CHECK(default_priority(Source::Kb) == 150);
  CHECK(default_priority(Source::Entity) == 100);
  CHECK(default_priority(Source::Retrieval) == 50);
  CHECK(default_priority(Source::Generative) == 40);
  CHECK(default_priority(Source::Fallback) == 0);
  CHECK(canned_fallback().text == "I'm not sure I follow \xE2\x80\x94 tell me more.");
}

TEST_CASE("make_template rejects unbindable slots") {
  CHECK_NOTHROW(make_template(TemplateKind::Backstory, {}, "* fly to <PLACE> *", "To {PLACE}."));
  CHECK_THROWS_AS(make_template(TemplateKind::Backstory, {}, "* fly *", "To {PLACE}."), std::invalid_argument);
  CHECK_THROWS_AS(make_template(TemplateKind::Backstory, {}, "* <CITY> *", "x"), std::invalid_argument);
  CHECK_THROWS_AS(make_template(TemplateKind::Entity, {}, "ANIMAL", "x"), std::invalid_argument);
  CHECK_THROWS_AS(make_template(TemplateKind::Intent, {}, "greet", "Hi {name}"), std::invalid_argument);
  CHECK(make_template(TemplateKind::Entity, 7, "ORG", "x").priority == 7);
  CHECK(make_template(TemplateKind::Entity, {}, "ORG", "x").priority == 100);
}

TEST_CASE("match_templates") {
  SUBCASE("no templates") {
    const auto bot = make_bot({});
    CHECK(templates_for(*bot, "what is your name please").empty());
  }
  SUBCASE("backstory wildcard") {
    const auto bot = make_bot({{"templates.txt", "backstory\t-\t* your name *\tI am DemoBot.\n"}});
    const auto c = templates_for(*bot, "what is your name please");
    REQUIRE(c.size() == 1);
    CHECK(c[0].text == "I am DemoBot.");
    CHECK(c[0].source == Source::Backstory);
    CHECK(c[0].priority == 300);
    CHECK(templates_for(*bot, "your name").size() == 1);
    CHECK(templates_for(*bot, "your name?").size() == 1);
    CHECK(templates_for(*bot, "your game").empty());
  }
  SUBCASE("entity template") {
    const auto bot = make_bot({{"entities.txt", kKlmEntity},
                               {"templates.txt", "entity\t-\tORG\tTell me more about {entity}.\n"}});
    CHECK(texts(templates_for(*bot, "i flew with klm")) == std::vector<std::string>{"Tell me more about KLM."});
    CHECK(templates_for(*bot, "i flew with nobody").empty());
  }
  SUBCASE("placeholder binds a typed mention") {
    const auto bot = make_bot({{"entities.txt", "rome\tRome\tPLACE\t\t\nklm\tKLM\tORG\t\t\n"},
                               {"templates.txt", "backstory\t-\t* fly to <PLACE> *\tFlights to {PLACE}!\n"}});
    CHECK(texts(templates_for(*bot, "can i fly to rome tomorrow")) == std::vector<std::string>{"Flights to Rome!"});
    CHECK(templates_for(*bot, "can i fly to klm").empty());
  }
  SUBCASE("intent template respects thresholds") {
    const auto bot = make_bot({{"embeddings.txt", "#dim 2\nhello 1 0\nhey 0.8 0.6\n"},
                               {"intents.txt", "greet\thello\n"},
                               {"templates.txt", "intent\t-\tgreet\tHi!\n"}});
    CHECK(templates_for(*bot, "hello").size() == 1);
    CHECK(templates_for(*bot, "hey").size() == 1);  // cosine 0.8
    const auto strict = make_bot({{"embeddings.txt", "#dim 2\nhello 1 0\nhey 0.8 0.6\n"},
                                  {"intents.txt", "greet\thello\ngreet\t@threshold\t0.9\n"},
                                  {"templates.txt", "intent\t-\tgreet\tHi!\n"}});
    CHECK(templates_for(*strict, "hey").empty());
  }
  SUBCASE("ordered by priority, then file order") {
    const auto bot = make_bot({{"entities.txt", kKlmEntity},
                               {"templates.txt",
                                "entity\t-\tORG\tfirst\n"
                                "backstory\t-\t* klm *\tsecond\n"
                                "entity\t100\tORG\tthird\n"
                                "entity\t500\tORG\tfourth\n"}});
    CHECK(texts(templates_for(*bot, "about klm")) ==
          std::vector<std::string>{"fourth", "second", "first", "third"});
  }
}

TEST_CASE("answer_from_kb") {
  const auto bot = make_bot({
      {"entities.txt", "klm\tKLM\tORG\t\ta Dutch airline\nplesman\tAlbert Plesman\tPERSON\t\t\n"},
      {"triples.txt", "klm\tfounded_in\t1919\nklm\tfounded_by\tplesman\n"},
      {"predicates.txt", "founded\tfounded_in\nfounder\tfounded_by\n"},
      {"stopwords.txt", "the\nof\nwas\n"},
  });
  auto kb = [&](const std::string& text) { return answer_from_kb(analyze(text, *bot), *bot); };

  const auto founded = kb("when was klm founded");
  REQUIRE(founded.has_value());
  CHECK(founded->text == "1919");
  CHECK(founded->source == Source::Kb);
  CHECK(founded->priority == 150);

  CHECK_FALSE(kb("when was it founded").has_value());
  CHECK(kb("what is klm")->text == "a Dutch airline");
  CHECK(kb("who was the founder of klm")->text == "Albert Plesman");
  CHECK(kb("klm founded?")->text == "1919");
  CHECK_FALSE(kb("klm was founded").has_value());  // no question cue
  CHECK_FALSE(kb("what is albert plesman").has_value());  // empty description
}

TEST_CASE("retrieve_candidates") {
  const WordSet stop{"to", "are", "i", "has", "tell", "me", "about", "the", "a"};
  const auto index = build_corpus_index(
      {{0, "flights to rome are lovely", 100}, {1, "i cook pasta", 200}, {2, "rome has great pizza", 300}}, stop);
  const auto bot = make_bot({});
  auto frame_of = [&](const std::string& text) { return analyze(text, *bot); };

  CHECK(retrieve_candidates(frame_of("rome"), RetrievalIndex{}, 3).empty());

  // Frozen from an independent tf-idf implementation.
  const std::vector<std::string> query{"rome", "pizza"};
  const auto s = index.scores(query);
  REQUIRE(s.size() == 3);
  CHECK(s[0] == doctest::Approx(0.2605556710562624).epsilon(1e-12));
  CHECK(s[1] == 0.0);
  CHECK(s[2] == doctest::Approx(0.7752396701981646).epsilon(1e-12));

  CHECK(texts(retrieve_candidates(frame_of("tell me about rome pizza"), index, 3)) ==
        std::vector<std::string>{"rome has great pizza", "flights to rome are lovely"});
  CHECK(retrieve_candidates(frame_of("quantum chromodynamics"), index, 3).empty());
  CHECK(retrieve_candidates(frame_of("rome pizza"), index, 1).size() == 1);
}

TEST_CASE("retrieval ties prefer newer documents, then lower ids") {
  const auto index = build_corpus_index(
      {{0, "red apple", 100}, {1, "red apple", 300}, {2, "red apple", 300}, {3, "green pear", 400}}, {});
  const std::vector<std::string> q{"apple"};
  const auto hits = index.search(q, 5);
  REQUIRE(hits.size() == 3);
  CHECK(hits[0].document == 1);
  CHECK(hits[1].document == 2);
  CHECK(hits[2].document == 0);
}

TEST_CASE("generate_candidate") {
  SUBCASE("empty model gives the echo prompt") {
    const auto bot = make_bot({});
    const auto g = generate_candidate(analyze("pizza?", *bot), "c", 0, bot->generator, bot->index);
    CHECK(g.degenerate);
    CHECK(g.candidate.text == "Tell me more about pizza.");
    CHECK(g.candidate.source == Source::Generative);
    CHECK(generate_candidate(analyze("?", *bot), "c", 0, bot->generator, bot->index).candidate.text ==
          "Tell me more.");
  }
  SUBCASE("single-path chain yields the suffix from the seed") {
    const auto bot = make_bot({{"corpus.txt", "1\trome has great pizza near the pantheon\n"}});
    const auto g = generate_candidate(analyze("any pizza", *bot), "c", 4, bot->generator, bot->index);
    CHECK_FALSE(g.degenerate);
    CHECK(g.candidate.text == "pizza near the pantheon");
  }
  SUBCASE("same conversation and turn give the same text") {
    const auto bot = make_bot({{"corpus.txt",
                                "1\tthe cat sat on the mat\n2\tthe dog sat on the rug\n"
                                "3\tthe cat ran to the dog\n4\ta dog and a cat sat\n"}});
    const auto frame = analyze("cat", *bot);
    for (std::size_t turn = 0; turn < 20; ++turn) {
      const auto a = generate_candidate(frame, "conv", turn, bot->generator, bot->index);
      const auto b = generate_candidate(frame, "conv", turn, bot->generator, bot->index);
      CHECK(a.candidate == b.candidate);
      CHECK(tokenize(a.candidate.text).size() <= MarkovGenerator::kMaxTokens);
      CHECK(a.candidate.text.rfind("cat", 0) == 0);
    }
  }
  SUBCASE("walk length is capped") {
    const std::vector<std::string> sentences{"a b a b a b a b a b a b a b a b a b a b a b a b a b"};
    const MarkovGenerator gen(sentences);
    CHECK(gen.walk("a", 1).size() == MarkovGenerator::kMaxTokens);
    CHECK(gen.walk("zzz", 1).empty());
  }
}

TEST_CASE("plan cascade") {
  const auto files = std::map<std::string, std::string>{
      {"entities.txt", kKlmEntity},
      {"triples.txt", "klm\tfounded_in\t1919\n"},
      {"predicates.txt", "founded\tfounded_in\n"},
  };
  ConversationState state;
  state.conversation_id = "c";
  const EngineConfig config;

  SUBCASE("templates short-circuit the knowledge base") {
    auto with_rule = files;
    with_rule["templates.txt"] = "backstory\t-\t* klm *\tI like KLM.\n";
    const auto bot = make_bot(with_rule);
    const auto out = plan(analyze("when was klm founded", *bot), state, *bot, config);
    REQUIRE(out.size() == 1);
    CHECK(out[0].source == Source::Backstory);
  }
  SUBCASE("knowledge base answers when no template fires") {
    const auto bot = make_bot(files);
    const auto out = plan(analyze("when was klm founded", *bot), state, *bot, config);
    REQUIRE(out.size() == 1);
    CHECK(out[0].source == Source::Kb);
    CHECK(out[0].text == "1919");
  }
  SUBCASE("singleton fallback when nothing else can answer") {
    const auto bot = make_bot({});
    const auto out = plan(analyze("xyzzy plugh", *bot), state, *bot, config);
    REQUIRE(out.size() == 1);
    CHECK(out[0] == canned_fallback());
  }
  SUBCASE("ensemble stage unions retrieval, generation and fallback") {
    auto with_corpus = files;
    with_corpus["corpus.txt"] = "1\trome has great pizza\n2\tpizza in naples\n";
    const auto bot = make_bot(with_corpus);
    const auto out = plan(analyze("i want pizza", *bot), state, *bot, config);
    REQUIRE(out.size() == 4);
    CHECK(out[0].source == Source::Retrieval);
    CHECK(out[1].source == Source::Retrieval);
    CHECK(out[2].source == Source::Generative);
    CHECK(out[3].source == Source::Fallback);
  }
}
