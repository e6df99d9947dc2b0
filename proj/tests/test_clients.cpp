#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#ifdef XSCOT_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <map>
#include <string>
#include <thread>

#include "xscot/clients.hpp"

using namespace xscot;

TEST_CASE("mock translator rotates letters and keeps structure") {
  MockTranslator t;
  CHECK(t.translate("abc", "en", "de") == "bcd");
  CHECK(t.translate("Zz!", "en", "de") == "Aa!");
  CHECK(t.translate("Hello, world 42", "en", "de") == "Ifmmp, xpsme 42");
  CHECK(t.translate("", "en", "de") == "");
  // Distinct inputs stay distinct, so scripted lookups keyed on the
  // translation cannot collide.
  CHECK(t.translate("aa", "en", "de") != t.translate("ab", "en", "de"));
}

TEST_CASE("percent encoding round-trips") {
  for (std::string text : {"hello world", "a+b=c&d", "100%", "日本語テキスト", ""}) {
    CHECK(percent_decode(percent_encode(text)) == text);
  }
  CHECK(percent_encode("a b") == "a%20b");
}

TEST_CASE("mock synthesis and recognition invert each other") {
  MockSynthesizer synth;
  MockRecognizer recog;
  std::string audio = synth.synthesize("Guten Morgen, Welt", "de", "anna");
  CHECK(audio.rfind("mock://de/anna?text=", 0) == 0);
  CHECK(recog.transcribe(audio, "de") == "Guten Morgen, Welt");

  CHECK_THROWS_AS(recog.transcribe("s3://bucket/a.wav", "de"), ClientError);
  try {
    recog.transcribe("mock://de/anna", "de");
  } catch (const ClientError& e) {
    CHECK_FALSE(e.retryable());
  }
}

TEST_CASE("scripted recognizer corrupts exactly the requested fraction") {
  MockSynthesizer synth;
  ScriptedRecognizer recog({{"one two three four", 0.5}, {"abcd", 0.25}});

  std::string word_audio = synth.synthesize("one two three four", "de", "v");
  CHECK(recog.transcribe(word_audio, "de") == "<unk> <unk> three four");

  std::string char_audio = synth.synthesize("abcd", "ja", "v");
  CHECK(recog.transcribe(char_audio, "ja") == "◆bcd");

  // Texts outside the script pass through untouched.
  std::string clean = synth.synthesize("untouched text", "de", "v");
  CHECK(recog.transcribe(clean, "de") == "untouched text");
}

TEST_CASE("scripted judge varies by attempt") {
  std::map<std::string, ScriptedJudgeClient::Entry> replies;
  replies["a"] = {"4", ""};
  replies["b"] = {"garbled", "2"};
  ScriptedJudgeClient judge(std::move(replies));
  CHECK(judge.judge("a", "prompt", 1) == "4");
  CHECK(judge.judge("a", "prompt", 2) == "4");
  CHECK(judge.judge("b", "prompt", 1) == "garbled");
  CHECK(judge.judge("b", "prompt", 2) == "2");
  CHECK(judge.judge("missing", "prompt", 1) == "0");
}

TEST_CASE("rest clients speak the expected wire format") {
  httplib::Server server;
  std::atomic<int> translate_calls{0};

  server.Post("/v1/translate", [&](const httplib::Request& req, httplib::Response& res) {
    ++translate_calls;
    auto body = nlohmann::json::parse(req.body);
    REQUIRE(body.at("source_lang") == "en");
    REQUIRE(body.at("target_lang") == "de");
    REQUIRE(req.get_header_value("Authorization") == "Bearer sekrit");
    std::string text = body.at("text").get<std::string>();
    if (text == "FATAL") {
      res.status = 400;
      return;
    }
    res.set_content(nlohmann::json{{"translation", "DE:" + text}}.dump(),
                    "application/json");
  });
  server.Post("/v1/synthesize", [&](const httplib::Request& req, httplib::Response& res) {
    auto body = nlohmann::json::parse(req.body);
    res.set_content(nlohmann::json{{"audio_ref",
                                    "tts://" + body.at("voice").get<std::string>()}}
                        .dump(),
                    "application/json");
  });
  server.Post("/v1/transcribe", [&](const httplib::Request& req, httplib::Response& res) {
    auto body = nlohmann::json::parse(req.body);
    REQUIRE(body.at("audio_ref") == "tts://anna");
    res.set_content(nlohmann::json{{"text", "heard it"}}.dump(), "application/json");
  });
  server.Post("/v1/chat/completions",
              [&](const httplib::Request& req, httplib::Response& res) {
                auto body = nlohmann::json::parse(req.body);
                REQUIRE(body.at("temperature").get<double>() == 0.0);
                REQUIRE(body.at("messages").at(0).at("role") == "user");
                nlohmann::json message = {{"role", "assistant"}, {"content", "4"}};
                nlohmann::json reply;
                reply["choices"] = nlohmann::json::array({{{"message", message}}});
                res.set_content(reply.dump(), "application/json");
              });

  int port = server.bind_to_any_port("127.0.0.1");
  if (port <= 0) {
    MESSAGE("cannot bind a loopback port in this environment; skipping");
    return;
  }
  std::thread server_thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  const std::string base = "http://127.0.0.1:" + std::to_string(port);

  RestTranslator translator({base, "sekrit"});
  CHECK(translator.translate("good morning", "en", "de") == "DE:good morning");
  CHECK(translate_calls == 1);

  RestSynthesizer synthesizer({base, "sekrit"});
  CHECK(synthesizer.synthesize("hallo", "de", "anna") == "tts://anna");

  RestRecognizer recognizer({base, "sekrit"});
  CHECK(recognizer.transcribe("tts://anna", "de") == "heard it");

  RestJudgeClient judge({base, "sekrit"}, "test-model");
  CHECK(judge.judge("id-1", "rate this", 1) == "4");

  // A 4xx reply is the caller's fault; retrying would not help.
  try {
    translator.translate("FATAL", "en", "de");
    FAIL("expected an error");
  } catch (const ClientError& e) {
    CHECK_FALSE(e.retryable());
  }

  server.stop();
  server_thread.join();
}

TEST_CASE("rest error classification") {
  httplib::Server server;
  server.Post("/v1/translate", [&](const httplib::Request&, httplib::Response& res) {
    res.status = 503;
  });
  int port = server.bind_to_any_port("127.0.0.1");
  if (port <= 0) {
    MESSAGE("cannot bind a loopback port in this environment; skipping");
    return;
  }
  std::thread server_thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  const std::string base = "http://127.0.0.1:" + std::to_string(port);

  RestTranslator translator({base, "t"});
  try {
    translator.translate("x", "en", "de");
    FAIL("expected an error");
  } catch (const ClientError& e) {
    CHECK(e.retryable());  // 503 is worth another attempt
  }
  server.stop();
  server_thread.join();

  // A connection that cannot be established at all is retryable too.
  RestTranslator unreachable({"http://127.0.0.1:1", "t", 1});
  try {
    unreachable.translate("x", "en", "de");
    FAIL("expected an error");
  } catch (const ClientError& e) {
    CHECK(e.retryable());
  }
}
