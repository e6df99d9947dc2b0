#pragma once

#include <cstddef>
#include <memory>
#include <string_view>

namespace xscot {

/// Counting interface so reports can be recomputed under a real model
/// tokenizer later. All built-in counts use ReferenceTokenCounter.
class TokenCounter {
 public:
  virtual ~TokenCounter() = default;
  virtual std::size_t count(std::string_view text, std::string_view lang) const = 0;
};

/// Language-aware approximation of a subword tokenizer:
/// - space-delimited languages: one token per maximal run of word
///   characters (letters, digits, underscore), one per punctuation run
///   of a single repeated codepoint;
/// - CJK languages: one token per non-whitespace codepoint, with repeated
///   punctuation runs collapsed the same way.
/// Collapsing repeated punctuation keeps an ellipsis cheaper than the
/// words it replaces.
class ReferenceTokenCounter final : public TokenCounter {
 public:
  std::size_t count(std::string_view text, std::string_view lang) const override;
};

/// One token per whitespace-separated chunk regardless of language.
class WhitespaceTokenCounter final : public TokenCounter {
 public:
  std::size_t count(std::string_view text, std::string_view lang) const override;
};

const TokenCounter& reference_token_counter();

}  // namespace xscot
