#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cotagnet {

using TagId = std::uint32_t;
using QuestionIndex = std::uint32_t;

// Compressed question -> tags view of a bipartite graph.
struct QuestionTags {
  std::vector<std::size_t> offsets;  // size n_questions + 1
  std::vector<TagId> tags;           // tags of each question, ascending

  [[nodiscard]] std::size_t n_questions() const noexcept {
    return offsets.empty() ? 0 : offsets.size() - 1;
  }
  [[nodiscard]] std::span<const TagId> of(QuestionIndex q) const noexcept {
    return {tags.data() + offsets[q], offsets[q + 1] - offsets[q]};
  }
  [[nodiscard]] std::size_t size(QuestionIndex q) const noexcept {
    return offsets[q + 1] - offsets[q];
  }
};

struct GraphSummary {
  std::size_t n_tags = 0;
  std::size_t n_questions = 0;
  std::uint64_t occurrences = 0;  // m, the number of tag-question edges
  std::optional<std::uint64_t> min_frequency;
  std::optional<std::uint64_t> max_frequency;
};

// Tag-question incidence B = (T u Q, E).
//
// Tag ids index `tag_names`, which is strictly ascending. Each tag's question
// list is strictly ascending, so (tag, question) pairs are never duplicated.
// The graph is immutable once constructed.
class BipartiteTagGraph {
 public:
  enum class EmptyQuestions { kReject, kAllow };

  BipartiteTagGraph() = default;

  // Validates every structural invariant; throws DataError on violation.
  // Orphan questions (no tags) are rejected unless `empty` is kAllow.
  BipartiteTagGraph(std::vector<std::string> tag_names, std::vector<std::string> question_ids,
                    std::vector<std::vector<QuestionIndex>> incidence,
                    EmptyQuestions empty = EmptyQuestions::kReject);

  [[nodiscard]] std::size_t n_tags() const noexcept { return tag_names_.size(); }
  [[nodiscard]] std::size_t n_questions() const noexcept { return question_ids_.size(); }
  [[nodiscard]] std::uint64_t occurrences() const noexcept { return occurrences_; }

  [[nodiscard]] const std::vector<std::string>& tag_names() const noexcept { return tag_names_; }
  [[nodiscard]] const std::string& tag_name(TagId t) const { return tag_names_.at(t); }
  [[nodiscard]] const std::vector<std::string>& question_ids() const noexcept {
    return question_ids_;
  }

  [[nodiscard]] std::span<const QuestionIndex> questions_of(TagId t) const {
    return incidence_.at(t);
  }
  [[nodiscard]] std::size_t degree(TagId t) const { return incidence_.at(t).size(); }

  // Tag frequencies x_t in tag-id order.
  [[nodiscard]] std::vector<std::uint64_t> frequencies() const;

  [[nodiscard]] QuestionTags question_tags() const;

  [[nodiscard]] std::size_t count_empty_questions() const;

  // Copy with tagless questions removed and the survivors renumbered in
  // their original order.
  [[nodiscard]] BipartiteTagGraph without_empty_questions() const;

  friend bool operator==(const BipartiteTagGraph&, const BipartiteTagGraph&) = default;

 private:
  std::vector<std::string> tag_names_;
  std::vector<std::string> question_ids_;
  std::vector<std::vector<QuestionIndex>> incidence_;
  std::uint64_t occurrences_ = 0;
};

[[nodiscard]] GraphSummary summarize(const BipartiteTagGraph& graph);

}  // namespace cotagnet
