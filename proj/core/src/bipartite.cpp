#include "cotagnet/bipartite.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

#include "cotagnet/error.hpp"

namespace cotagnet {

BipartiteTagGraph::BipartiteTagGraph(std::vector<std::string> tag_names,
                                     std::vector<std::string> question_ids,
                                     std::vector<std::vector<QuestionIndex>> incidence,
                                     EmptyQuestions empty)
    : tag_names_(std::move(tag_names)),
      question_ids_(std::move(question_ids)),
      incidence_(std::move(incidence)) {
  if (incidence_.size() != tag_names_.size()) {
    throw DataError("bipartite graph: incidence has " + std::to_string(incidence_.size()) +
                    " lists for " + std::to_string(tag_names_.size()) + " tags");
  }
  if (question_ids_.size() > std::numeric_limits<QuestionIndex>::max()) {
    throw DataError("bipartite graph: too many questions");
  }
  for (std::size_t t = 0; t < tag_names_.size(); ++t) {
    if (tag_names_[t].empty()) throw DataError("bipartite graph: empty tag name");
    if (t > 0 && !(tag_names_[t - 1] < tag_names_[t])) {
      throw DataError("bipartite graph: tag names not strictly ascending at '" + tag_names_[t] +
                      "'");
    }
  }

  const auto n_q = static_cast<QuestionIndex>(question_ids_.size());
  std::vector<bool> covered(n_q, false);
  for (std::size_t t = 0; t < incidence_.size(); ++t) {
    const auto& qs = incidence_[t];
    for (std::size_t i = 0; i < qs.size(); ++i) {
      if (qs[i] >= n_q) {
        throw DataError("bipartite graph: question index out of range for tag '" +
                        tag_names_[t] + "'");
      }
      if (i > 0 && qs[i - 1] >= qs[i]) {
        throw DataError("bipartite graph: duplicate or unsorted question for tag '" +
                        tag_names_[t] + "'");
      }
      covered[qs[i]] = true;
    }
    occurrences_ += qs.size();
  }
  if (empty == EmptyQuestions::kReject) {
    auto it = std::find(covered.begin(), covered.end(), false);
    if (it != covered.end()) {
      throw DataError("bipartite graph: question '" +
                      question_ids_[static_cast<std::size_t>(it - covered.begin())] +
                      "' has no tags");
    }
  }

  std::unordered_set<std::string_view> seen;
  seen.reserve(question_ids_.size());
  for (const auto& id : question_ids_) {
    if (!seen.insert(id).second) throw DataError("bipartite graph: duplicate question id '" + id + "'");
  }
}

std::vector<std::uint64_t> BipartiteTagGraph::frequencies() const {
  std::vector<std::uint64_t> out;
  out.reserve(incidence_.size());
  for (const auto& qs : incidence_) out.push_back(qs.size());
  return out;
}

QuestionTags BipartiteTagGraph::question_tags() const {
  QuestionTags qt;
  qt.offsets.assign(n_questions() + 1, 0);
  for (const auto& qs : incidence_) {
    for (auto q : qs) ++qt.offsets[q + 1];
  }
  for (std::size_t q = 0; q < n_questions(); ++q) qt.offsets[q + 1] += qt.offsets[q];
  qt.tags.resize(occurrences_);
  std::vector<std::size_t> cursor(qt.offsets.begin(), qt.offsets.end() - 1);
  // Tags are visited in ascending id order, so each question's slice ends up sorted.
  for (TagId t = 0; t < incidence_.size(); ++t) {
    for (auto q : incidence_[t]) qt.tags[cursor[q]++] = t;
  }
  return qt;
}

std::size_t BipartiteTagGraph::count_empty_questions() const {
  std::vector<bool> covered(n_questions(), false);
  for (const auto& qs : incidence_) {
    for (auto q : qs) covered[q] = true;
  }
  return static_cast<std::size_t>(std::count(covered.begin(), covered.end(), false));
}

BipartiteTagGraph BipartiteTagGraph::without_empty_questions() const {
  std::vector<bool> covered(n_questions(), false);
  for (const auto& qs : incidence_) {
    for (auto q : qs) covered[q] = true;
  }
  constexpr auto kDropped = std::numeric_limits<QuestionIndex>::max();
  std::vector<QuestionIndex> remap(n_questions(), kDropped);
  std::vector<std::string> ids;
  QuestionIndex next = 0;
  for (std::size_t q = 0; q < n_questions(); ++q) {
    if (covered[q]) {
      remap[q] = next++;
      ids.push_back(question_ids_[q]);
    }
  }
  std::vector<std::vector<QuestionIndex>> inc(incidence_.size());
  for (std::size_t t = 0; t < incidence_.size(); ++t) {
    inc[t].reserve(incidence_[t].size());
    for (auto q : incidence_[t]) inc[t].push_back(remap[q]);
  }
  return BipartiteTagGraph(tag_names_, std::move(ids), std::move(inc));
}

GraphSummary summarize(const BipartiteTagGraph& graph) {
  GraphSummary s;
  s.n_tags = graph.n_tags();
  s.n_questions = graph.n_questions();
  s.occurrences = graph.occurrences();
  for (TagId t = 0; t < graph.n_tags(); ++t) {
    const std::uint64_t x = graph.degree(t);
    if (!s.min_frequency || x < *s.min_frequency) s.min_frequency = x;
    if (!s.max_frequency || x > *s.max_frequency) s.max_frequency = x;
  }
  return s;
}

}  // namespace cotagnet
