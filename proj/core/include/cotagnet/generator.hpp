#pragma once

// Random tag-question bipartite graphs with lognormal tag frequencies.
//
// generate() runs four steps, each exposed separately:
//   1. sample_frequencies: N_T lognormal draws, scaled to sum to m, rounded.
//   2. solve_corrected_questions: inflate N_Q to N^ so that, after uniform
//      assignment, about N_Q questions end up with at least one tag.
//   3. assign_tags: each tag picks x_t distinct questions of the N^ uniformly.
//   4. drop the questions that received no tag.
//
// Random streams: frequencies use derive_seed(seed, kFrequencyStream); tag t
// is assigned with derive_seed(seed, kAssignStream, t). Output is therefore a
// pure function of the config.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cotagnet/bipartite.hpp"
#include "cotagnet/rng.hpp"

namespace cotagnet {

inline constexpr std::uint64_t kFrequencyStream = 0x66726571;  // "freq"
inline constexpr std::uint64_t kAssignStream = 0x61736e67;     // "asng"

struct GeneratorConfig {
  std::uint64_t n_tags = 0;
  std::uint64_t n_questions = 0;
  std::uint64_t occurrences = 0;  // target m
  double mu = 0.0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  // Reduce x_t > N^ to N^ instead of failing.
  bool clamp_to_questions = false;

  // Throws UsageError if a field is out of range.
  void validate() const;
};

struct SampledFrequencies {
  std::vector<std::uint64_t> values;
  std::uint64_t realized_occurrences = 0;  // sum of values
  std::size_t n_clamped_zero = 0;          // rounded to 0, raised to 1
};

struct GenerationReport {
  std::uint64_t target_questions = 0;
  std::uint64_t corrected_questions = 0;  // N^
  std::uint64_t target_occurrences = 0;
  std::uint64_t realized_occurrences = 0;
  std::size_t n_clamped_zero = 0;
  std::size_t n_clamped_to_questions = 0;
  std::size_t n_empty_discarded = 0;
  std::size_t surviving_questions = 0;
  double frac_over_five = 0.0;
  double expected_empty = 0.0;
  double expected_empty_std = 0.0;
};

struct GeneratedGraph {
  BipartiteTagGraph graph;
  GenerationReport report;
};

[[nodiscard]] SampledFrequencies sample_frequencies(const GeneratorConfig& config, Rng& rng);

// f(n) = n (1 - exp(-m / n)) is strictly increasing with supremum m, so
// f(n) = n_questions has a root iff n_questions < m. Bisection to relative
// width 1e-9, then rounded to the nearest integer. Throws NumericError when
// no root exists.
[[nodiscard]] std::uint64_t solve_corrected_questions(std::uint64_t occurrences,
                                                      std::uint64_t n_questions);

// Unrounded root of the same equation.
[[nodiscard]] double corrected_questions_exact(std::uint64_t occurrences,
                                               std::uint64_t n_questions);

struct Assignment {
  BipartiteTagGraph graph;  // may contain tagless questions
  std::size_t n_clamped = 0;
};

// Uniform x_t-subset of [0, n_hat) for every tag, tag t drawing from
// derive_seed(seed, kAssignStream, t). Throws DataError if some x_t > n_hat
// unless `clamp` is set.
[[nodiscard]] Assignment assign_tags(std::span<const std::uint64_t> frequencies,
                                     std::uint64_t n_hat, std::uint64_t seed, bool clamp = false);

// Uniform random `count`-subset of [0, n), ascending. Exact for all count <= n.
[[nodiscard]] std::vector<QuestionIndex> sample_without_replacement(std::uint64_t n,
                                                                    std::uint64_t count, Rng& rng);

[[nodiscard]] GeneratedGraph generate(const GeneratorConfig& config);

struct EmptyQuestionEstimate {
  double expected = 0.0;
  double std = 0.0;
};

// Expected number (and std) of tagless questions when m occurrences land on
// n_hat questions: p = exp(-m / n_hat), mean n_hat p, variance n_hat p (1 - p).
[[nodiscard]] EmptyQuestionEstimate expected_empty_questions(std::uint64_t occurrences,
                                                             std::uint64_t n_hat);

// Fractions of tagged questions carrying 1, 2, 3, 4, 5 and more than 5 tags.
using TagsPerQuestion = std::array<double, 6>;
[[nodiscard]] TagsPerQuestion tags_per_question_distribution(const BipartiteTagGraph& graph);

// Canonical synthetic tag name for id t out of n_tags, zero-padded so that
// lexicographic and numeric order agree.
[[nodiscard]] std::string synthetic_tag_name(std::uint64_t t, std::uint64_t n_tags);

}  // namespace cotagnet
