#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "xscot/segmenter.hpp"
#include "xscot/token_counter.hpp"

namespace xscot {

struct CompressionConfig {
  std::size_t keep_groups = 3;        // word groups kept per compressed sentence
  std::string ellipsis_marker = "..."; // appended where the tail was dropped

  void validate() const;  // keep_groups >= 1, marker non-empty, no hard terminator
};

/// Replaces the sentence tail after the first keep_groups word groups with
/// the ellipsis marker. Sentences of keep_groups or fewer groups are
/// returned unchanged. Trailing whitespace of the sentence is preserved.
std::string compress_sentence(std::string_view sentence, const CompressionConfig& config,
                              const SegmentationProfile& profile);

struct CompressedSegment {
  std::string text;
  std::size_t sentences_total = 0;
  std::size_t sentences_compressed = 0;
  std::size_t tokens_before = 0;
  std::size_t tokens_after = 0;
};

/// Compresses the first `depth` sentences of the segment and leaves the
/// rest untouched. depth greater than the sentence count compresses the
/// whole segment.
CompressedSegment compress_segment_prefix(std::string_view text, std::size_t depth,
                                          const CompressionConfig& config,
                                          const SegmentationProfile& profile,
                                          const TokenCounter& counter,
                                          std::string_view lang);

CompressedSegment compress_whole_segment(std::string_view text,
                                         const CompressionConfig& config,
                                         const SegmentationProfile& profile,
                                         const TokenCounter& counter,
                                         std::string_view lang);

}  // namespace xscot
