#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "xscot/compressor.hpp"
#include "xscot/errors.hpp"
#include "xscot/token_counter.hpp"

using namespace xscot;

namespace {

SegmentationProfile en_profile() {
  SegmentationProfile p;
  p.language = "en";
  p.grouping = GroupingRule::WhitespaceGroups;
  return p;
}

SegmentationProfile ja_profile() {
  SegmentationProfile p;
  p.language = "ja";
  p.grouping = GroupingRule::ScriptRunGroups;
  return p;
}

std::string compress_one(std::string_view sentence, std::size_t k,
                         const SegmentationProfile& profile) {
  CompressionConfig cfg;
  cfg.keep_groups = k;
  auto sentences = split_sentences(sentence, profile);
  REQUIRE(sentences.size() == 1);
  return compress_sentence(sentences[0].text, cfg, profile);
}

}  // namespace

TEST_CASE("reference counter on space-delimited text") {
  const TokenCounter& counter = reference_token_counter();
  CHECK(counter.count("Hello, world", "en") == 3);
  CHECK(counter.count("Hello  world", "en") == 2);
  CHECK(counter.count("...", "en") == 1);
  CHECK(counter.count("[CORE-INSTR]", "en") == 5);
  CHECK(counter.count("aaa...bbb!!!ccc", "en") == 5);
  CHECK(counter.count("a.b", "en") == 3);
  CHECK(counter.count("What?!", "en") == 3);
  CHECK(counter.count("", "en") == 0);
  CHECK(counter.count("   ", "en") == 0);
  CHECK(counter.count("IPv4は速い。", "en") == 2);
}

TEST_CASE("reference counter on cjk text") {
  const TokenCounter& counter = reference_token_counter();
  CHECK(counter.count("学生です", "ja") == 4);
  CHECK(counter.count("[TGT-INSTR]", "ja") == 11);
  CHECK(counter.count("光の速さを説明してください。", "ja") == 14);
  CHECK(counter.count("こんにちは、世界。", "ja") == 9);
  CHECK(counter.count("です。。。", "ja") == 3);
  CHECK(counter.count("IPv4は速い。", "ja") == 8);
}

TEST_CASE("whitespace counter splits on spaces only") {
  WhitespaceTokenCounter counter;
  CHECK(counter.count("Hello, world", "en") == 2);
  CHECK(counter.count("one  two\tthree", "en") == 3);
  CHECK(counter.count("こんにちは世界。", "ja") == 1);
  CHECK(counter.count("", "en") == 0);
}

TEST_CASE("compression keeps the first k groups") {
  CHECK(compress_one("IPv4 and IPv6 are the two versions of the Internet Protocol.", 4,
                     en_profile()) == "IPv4 and IPv6 are ...");
  CHECK(compress_one("Explain the speed of light.", 3, en_profile()) ==
        "Explain the speed ...");
  CHECK(compress_one("光の速さを説明してください。", 3, ja_profile()) == "光の速...");
}

TEST_CASE("short sentences are left alone") {
  CHECK(compress_one("Too short.", 3, en_profile()) == "Too short.");
  CHECK(compress_one("はい。", 3, ja_profile()) == "はい。");
  // Exactly k groups: nothing to elide.
  CHECK(compress_one("a b c.", 3, en_profile()) == "a b c.");
}

TEST_CASE("compression preserves surrounding whitespace") {
  CompressionConfig cfg;
  cfg.keep_groups = 2;
  SegmentationProfile profile = en_profile();
  std::string text = " Alpha beta gamma delta. Next one here too.";
  auto sentences = split_sentences(text, profile);
  REQUIRE(sentences.size() == 2);
  CHECK(compress_sentence(sentences[0].text, cfg, profile) == " Alpha beta ... ");
  CHECK(compress_sentence(sentences[1].text, cfg, profile) == "Next one ...");
}

TEST_CASE("alternate ellipsis markers") {
  CompressionConfig cfg;
  cfg.keep_groups = 3;
  cfg.ellipsis_marker = "…";
  SegmentationProfile profile = ja_profile();
  auto sentences = split_sentences("光の速さを説明してください。", profile);
  REQUIRE(sentences.size() == 1);
  CHECK(compress_sentence(sentences[0].text, cfg, profile) == "光の速…");
}

TEST_CASE("compressing a compressed sentence changes nothing") {
  CompressionConfig cfg;
  cfg.keep_groups = 3;
  const TokenCounter& counter = reference_token_counter();
  const std::vector<std::pair<std::string, SegmentationProfile>> cases = {
      {"The quick brown fox jumps over the lazy dog.", en_profile()},
      {"Short one.", en_profile()},
      {"光の速さを説明してください。", ja_profile()},
      {"こんにちは、世界。元気ですか。", ja_profile()},
  };
  for (const auto& [text, profile] : cases) {
    std::string lang = profile.language.empty() ? "en" : profile.language;
    CompressedSegment once = compress_whole_segment(text, cfg, profile, counter, lang);
    CompressedSegment twice =
        compress_whole_segment(once.text, cfg, profile, counter, lang);
    CHECK(twice.text == once.text);
    CHECK(twice.tokens_after == once.tokens_after);
  }
}

TEST_CASE("compression never increases the token count") {
  CompressionConfig cfg;
  cfg.keep_groups = 3;
  const TokenCounter& counter = reference_token_counter();
  const std::vector<std::string> en_words = {"alpha", "beta",  "gamma", "delta",
                                             "epsilon", "zeta", "eta",  "theta"};
  std::mt19937 rng(23);
  std::uniform_int_distribution<std::size_t> pick(0, en_words.size() - 1);
  std::uniform_int_distribution<int> words(1, 14);
  std::uniform_int_distribution<int> sents(1, 5);
  for (int i = 0; i < 300; ++i) {
    std::string text;
    int ns = sents(rng);
    for (int s = 0; s < ns; ++s) {
      if (s > 0) text += ' ';
      int nw = words(rng);
      for (int w = 0; w < nw; ++w) {
        if (w > 0) text += ' ';
        text += en_words[pick(rng)];
      }
      text += '.';
    }
    CompressedSegment out =
        compress_whole_segment(text, cfg, en_profile(), counter, "en");
    CHECK(out.tokens_after <= out.tokens_before);
    CHECK(out.tokens_before == counter.count(text, "en"));
    CHECK(out.tokens_after == counter.count(out.text, "en"));
  }
}

TEST_CASE("prefix depth compresses only the first sentences") {
  CompressionConfig cfg;
  cfg.keep_groups = 2;
  const TokenCounter& counter = reference_token_counter();
  std::string text = "One two three four. Five six seven eight. Nine ten eleven twelve.";

  CompressedSegment zero =
      compress_segment_prefix(text, 0, cfg, en_profile(), counter, "en");
  CHECK(zero.text == text);
  CHECK(zero.sentences_total == 3);
  CHECK(zero.sentences_compressed == 0);

  CompressedSegment one =
      compress_segment_prefix(text, 1, cfg, en_profile(), counter, "en");
  CHECK(one.text == "One two ... Five six seven eight. Nine ten eleven twelve.");
  CHECK(one.sentences_compressed == 1);

  CompressedSegment all =
      compress_segment_prefix(text, 99, cfg, en_profile(), counter, "en");
  CHECK(all.text == "One two ... Five six ... Nine ten ...");
  CHECK(all.sentences_compressed == 3);
  CHECK(compress_whole_segment(text, cfg, en_profile(), counter, "en").text == all.text);
}

TEST_CASE("compression config validation") {
  CompressionConfig ok;
  CHECK_NOTHROW(ok.validate());

  CompressionConfig zero_k;
  zero_k.keep_groups = 0;
  CHECK_THROWS_AS(zero_k.validate(), Error);

  CompressionConfig empty_marker;
  empty_marker.ellipsis_marker = "";
  CHECK_THROWS_AS(empty_marker.validate(), Error);

  // Fullwidth terminators in the marker would re-split compressed output.
  CompressionConfig bad_marker;
  bad_marker.ellipsis_marker = "。";
  CHECK_THROWS_AS(bad_marker.validate(), Error);

  CompressionConfig ascii_dots;
  ascii_dots.ellipsis_marker = "...";
  CHECK_NOTHROW(ascii_dots.validate());
}
