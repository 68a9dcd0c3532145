#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cotagnet/bipartite.hpp"

namespace cotagnet {

inline constexpr std::size_t kMaxTagsPerQuestion = 5;

struct QuestionRecord {
  std::string question_id;
  std::vector<std::string> tags;
};

// Counters for rows that did not become records. Nothing is dropped silently.
struct IngestStats {
  std::size_t rows = 0;                  // rows/lines examined
  std::size_t skipped_non_question = 0;  // PostTypeId != 1
  std::size_t skipped_untagged = 0;      // question rows without a Tags attribute
  std::size_t rejected_tag_count = 0;    // 0 or more than kMaxTagsPerQuestion tags
  std::size_t malformed = 0;             // missing ids, bad tag syntax, invalid names
};

struct CommunityDataset {
  std::string name;
  std::vector<QuestionRecord> records;
  IngestStats stats;
  std::vector<std::string> issues;  // first few row-level problems, for reporting
};

// Streams `row` elements out of an extracted Stack Exchange Posts.xml.
// Throws ParseError (with byte offset) if the markup cannot be tokenized and
// DataError on a duplicate question Id.
[[nodiscard]] CommunityDataset parse_posts_xml(std::istream& in, std::string_view community_name);

// "<a><b>" -> {"a", "b"}. The "|a|b|" form used by newer dumps is also accepted.
[[nodiscard]] std::vector<std::string> decode_tag_attribute(std::string_view raw);

inline constexpr std::size_t kNoTagLimit = static_cast<std::size_t>(-1);

// One `question_id<TAB>tag1,tag2,...` record per line; blank lines skipped.
// Generated graphs may exceed the five-tag cap, so TSV input is uncapped
// unless `max_tags` says otherwise.
[[nodiscard]] CommunityDataset parse_tsv(std::istream& in, std::string_view community_name,
                                         std::size_t max_tags = kNoTagLimit);

struct BuildResult {
  BipartiteTagGraph graph;
  std::size_t duplicate_tags = 0;  // repeated tags within one record, collapsed
};

// Tag ids follow lexicographic order of names; question indices follow record order.
[[nodiscard]] BuildResult build_bipartite(const CommunityDataset& dataset);

// Canonical TSV: one line per question in index order, tags sorted and comma-joined.
void write_canonical_tsv(std::ostream& out, const BipartiteTagGraph& graph);

// True if `name` is usable as a tag: non-empty, no angle brackets, commas,
// pipes or whitespace.
[[nodiscard]] bool valid_tag_name(std::string_view name) noexcept;

}  // namespace cotagnet
