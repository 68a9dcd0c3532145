#include "cotagnet/generator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

#include "cotagnet/error.hpp"

namespace cotagnet {
namespace {

double correction_lhs(double n_hat, double m) { return -n_hat * std::expm1(-m / n_hat); }

constexpr std::uint64_t kMaxQuestionSlots = std::numeric_limits<QuestionIndex>::max();

}  // namespace

void GeneratorConfig::validate() const {
  if (n_tags < 1) throw UsageError("generator: need at least one tag");
  if (n_questions < 1) throw UsageError("generator: need at least one question");
  if (occurrences <= n_questions) {
    throw UsageError("generator: occurrences (" + std::to_string(occurrences) +
                     ") must exceed questions (" + std::to_string(n_questions) + ")");
  }
  if (!std::isfinite(mu)) throw UsageError("generator: mu must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw UsageError("generator: sigma must be > 0");
}

SampledFrequencies sample_frequencies(const GeneratorConfig& config, Rng& rng) {
  std::vector<double> raw(config.n_tags);
  for (double& x : raw) x = rng.lognormal(config.mu, config.sigma);
  double total = 0.0;
  for (double x : raw) total += x;

  SampledFrequencies out;
  out.values.reserve(raw.size());
  const auto m = static_cast<double>(config.occurrences);
  for (double x : raw) {
    // Half-way cases round away from zero.
    auto v = static_cast<std::uint64_t>(std::llround(m * x / total));
    if (v == 0) {
      v = 1;
      ++out.n_clamped_zero;
    }
    out.values.push_back(v);
    out.realized_occurrences += v;
  }
  return out;
}

double corrected_questions_exact(std::uint64_t occurrences, std::uint64_t n_questions) {
  if (n_questions == 0) throw NumericError("corrected question count: need at least one question");
  if (n_questions >= occurrences) {
    throw NumericError("no solution: every question needs >=1 tag and some need >=2 (questions " +
                       std::to_string(n_questions) + ", occurrences " +
                       std::to_string(occurrences) + ")");
  }
  const auto m = static_cast<double>(occurrences);
  const auto target = static_cast<double>(n_questions);
  double lo = target;
  double hi = 2.0 * target;
  while (correction_lhs(hi, m) <= target) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw NumericError("corrected question count diverged");
  }
  while (hi - lo > 1e-9 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (correction_lhs(mid, m) > target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::uint64_t solve_corrected_questions(std::uint64_t occurrences, std::uint64_t n_questions) {
  return static_cast<std::uint64_t>(std::llround(corrected_questions_exact(occurrences, n_questions)));
}

std::vector<QuestionIndex> sample_without_replacement(std::uint64_t n, std::uint64_t count,
                                                      Rng& rng) {
  if (count > n) throw DataError("cannot sample " + std::to_string(count) + " of " + std::to_string(n));
  if (n > kMaxQuestionSlots) throw DataError("too many question slots");
  std::vector<QuestionIndex> out;
  out.reserve(count);

  // Floyd's algorithm draws a uniform k-subset in k steps. For dense subsets
  // it draws the excluded complement instead.
  const bool complement = count > n / 2;
  const std::uint64_t k = complement ? n - count : count;
  if (complement || k * 8 > n) {
    std::vector<bool> chosen(n, false);
    for (std::uint64_t j = n - k; j < n; ++j) {
      const std::uint64_t t = rng.below(j + 1);
      chosen[chosen[t] ? j : t] = true;
    }
    for (std::uint64_t q = 0; q < n; ++q) {
      if (chosen[q] != complement) out.push_back(static_cast<QuestionIndex>(q));
    }
    return out;
  }
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(k * 2);
  for (std::uint64_t j = n - k; j < n; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  for (auto q : chosen) out.push_back(static_cast<QuestionIndex>(q));
  std::sort(out.begin(), out.end());
  return out;
}

Assignment assign_tags(std::span<const std::uint64_t> frequencies, std::uint64_t n_hat,
                       std::uint64_t seed, bool clamp) {
  if (n_hat > kMaxQuestionSlots) {
    throw NumericError("corrected question count " + std::to_string(n_hat) + " is too large");
  }
  const auto n_tags = static_cast<std::uint64_t>(frequencies.size());
  Assignment out;
  std::vector<std::vector<QuestionIndex>> incidence(frequencies.size());
  for (std::uint64_t t = 0; t < n_tags; ++t) {
    std::uint64_t x = frequencies[t];
    if (x > n_hat) {
      if (!clamp) {
        throw DataError("tag " + std::to_string(t) + " has frequency " + std::to_string(x) +
                        " > " + std::to_string(n_hat) + " questions");
      }
      x = n_hat;
      ++out.n_clamped;
    }
    Rng rng(derive_seed(seed, kAssignStream, t));
    incidence[t] = sample_without_replacement(n_hat, x, rng);
  }

  std::vector<std::string> names;
  names.reserve(frequencies.size());
  for (std::uint64_t t = 0; t < n_tags; ++t) names.push_back(synthetic_tag_name(t, n_tags));
  std::vector<std::string> ids;
  ids.reserve(n_hat);
  for (std::uint64_t q = 0; q < n_hat; ++q) ids.push_back("q" + std::to_string(q));
  out.graph = BipartiteTagGraph(std::move(names), std::move(ids), std::move(incidence),
                                BipartiteTagGraph::EmptyQuestions::kAllow);
  return out;
}

GeneratedGraph generate(const GeneratorConfig& config) {
  config.validate();
  Rng freq_rng(derive_seed(config.seed, kFrequencyStream));
  const SampledFrequencies freqs = sample_frequencies(config, freq_rng);
  const std::uint64_t n_hat =
      solve_corrected_questions(freqs.realized_occurrences, config.n_questions);
  Assignment assigned =
      assign_tags(freqs.values, n_hat, config.seed, config.clamp_to_questions);

  GeneratedGraph out;
  auto& r = out.report;
  r.target_questions = config.n_questions;
  r.corrected_questions = n_hat;
  r.target_occurrences = config.occurrences;
  r.realized_occurrences = assigned.graph.occurrences();
  r.n_clamped_zero = freqs.n_clamped_zero;
  r.n_clamped_to_questions = assigned.n_clamped;
  r.n_empty_discarded = assigned.graph.count_empty_questions();
  out.graph = assigned.graph.without_empty_questions();
  r.surviving_questions = out.graph.n_questions();
  r.frac_over_five = out.graph.n_questions() == 0 ? 0.0 : tags_per_question_distribution(out.graph)[5];
  const auto estimate = expected_empty_questions(r.realized_occurrences, n_hat);
  r.expected_empty = estimate.expected;
  r.expected_empty_std = estimate.std;
  return out;
}

EmptyQuestionEstimate expected_empty_questions(std::uint64_t occurrences, std::uint64_t n_hat) {
  if (n_hat < 1) throw NumericError("expected_empty_questions: n_hat must be >= 1");
  const auto n = static_cast<double>(n_hat);
  const double p = std::exp(-static_cast<double>(occurrences) / n);
  return {n * p, std::sqrt(n * p * (1.0 - p))};
}

TagsPerQuestion tags_per_question_distribution(const BipartiteTagGraph& graph) {
  const QuestionTags qt = graph.question_tags();
  TagsPerQuestion counts{};
  double tagged = 0.0;
  for (QuestionIndex q = 0; q < qt.n_questions(); ++q) {
    const std::size_t k = qt.size(q);
    if (k == 0) continue;
    counts[std::min<std::size_t>(k, 6) - 1] += 1.0;
    tagged += 1.0;
  }
  if (tagged == 0.0) throw DataError("tags per question: graph has no tagged questions");
  for (double& c : counts) c /= tagged;
  return counts;
}

std::string synthetic_tag_name(std::uint64_t t, std::uint64_t n_tags) {
  const std::size_t width = std::to_string(n_tags > 0 ? n_tags - 1 : 0).size();
  std::string digits = std::to_string(t);
  return "t" + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

}  // namespace cotagnet
