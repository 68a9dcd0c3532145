#pragma once

// Co-tag statistics that connect observed graphs to the generative model.
// Logarithms are natural throughout; reports carry log_base = "e".

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cotagnet/bipartite.hpp"
#include "cotagnet/cotag.hpp"
#include "cotagnet/generator.hpp"

namespace cotagnet {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// OLS of y on x with intercept. Needs >= 3 points and non-constant x
// (DataError / NumericError otherwise).
[[nodiscard]] LinearFit linear_cotag_regression(std::span<const double> x,
                                                std::span<const double> y);

// E[k_t] = (m - x_t) x_t / n_hat with m = sum of x.
[[nodiscard]] double expected_weighted_cotags(std::span<const std::uint64_t> x, TagId t,
                                              std::uint64_t n_hat);

// E[d_t] = sum_{s != t} P(w_{s,t} > 0) with w_{s,t} ~ Hypergeom(n_hat, x_s, x_t).
[[nodiscard]] double expected_unique_cotags(std::span<const std::uint64_t> x, TagId t,
                                            std::uint64_t n_hat);

// P(two uniform subsets of sizes a and b of an n-set are disjoint)
// = C(n - a, b) / C(n, b). Exact 0 when a + b > n.
[[nodiscard]] double disjoint_probability(std::uint64_t n, std::uint64_t a, std::uint64_t b);

struct PolyLogFit {
  std::vector<double> coeffs;  // a_0 .. a_degree
  int requested_degree = 3;
  int degree = 3;              // lower than requested when the design is rank deficient
  bool rank_deficient = false;
  double mse = 0.0;
  std::size_t n = 0;
};

// Least squares of ln(d + 1) on powers 0..degree of ln(x + 1), solved by a
// column-pivoted Householder QR.
[[nodiscard]] PolyLogFit poly_log_fit(std::span<const double> x, std::span<const double> d,
                                      int degree);
// Degree-3 case; needs >= 5 points.
[[nodiscard]] PolyLogFit cubic_log_fit(std::span<const double> x, std::span<const double> d);

struct PcaSummary {
  std::vector<double> explained_variance_ratios;  // descending, sums to 1
};

// Explained variance of the mean-centred rows (no scaling). Needs >= 2 rows
// of equal length; throws NumericError for zero total variance.
[[nodiscard]] PcaSummary pca_explained_variance(const std::vector<std::vector<double>>& rows);

struct AnalysisReport {
  std::string community;
  std::optional<int> replicate;
  std::size_t n_tags = 0;
  std::size_t n_questions = 0;
  std::uint64_t occurrences = 0;

  struct Lognormal {
    double mu = 0.0;
    double sigma = 0.0;
    double ks = 0.0;
  };
  std::optional<Lognormal> lognormal;
  std::optional<LinearFit> linear;
  std::optional<PolyLogFit> cubic;
  std::optional<double> linear_log_mse;  // degree-1 counterpart of `cubic`
  std::optional<ClusteringReport> clustering;
  TagsPerQuestion tags_per_question{};

  // Model expectations evaluated with this graph's own frequencies.
  std::optional<std::uint64_t> corrected_questions;
  std::optional<double> unique_cotag_mean_error;      // mean of E[d_t] - d_t
  std::optional<double> unique_cotag_mean_abs_error;  // mean of |E[d_t] - d_t|

  std::vector<std::string> notes;  // sections that could not be computed, and why
};

// Per-tag quantities behind an AnalysisReport.
struct TagTable {
  std::vector<std::uint64_t> frequency;        // x_t
  std::vector<std::uint64_t> weighted_degree;  // k_t
  std::vector<std::size_t> unweighted_degree;  // d_t
  std::vector<double> expected_weighted;       // empty unless n_hat exists
  std::vector<double> expected_unique;
};

struct GraphAnalysis {
  AnalysisReport report;
  TagTable tags;
};

[[nodiscard]] GraphAnalysis analyze_graph(const BipartiteTagGraph& graph, std::string community,
                                          std::optional<int> replicate = std::nullopt);

struct MetricComparison {
  std::size_t n = 0;
  std::optional<double> correlation;  // Pearson; absent when undefined
  double mse = 0.0;
};

struct ComparisonRecord {
  std::vector<std::string> communities;
  std::map<std::string, MetricComparison> metrics;
  std::optional<PcaSummary> pca_data;
  std::optional<PcaSummary> pca_model;
  std::map<std::string, double> data_means;
  std::map<std::string, double> model_means;
};

// Matches reports by community. Several model reports for one community
// (replicates) are averaged per metric first. Throws DataError when the two
// sides cover different communities.
[[nodiscard]] ComparisonRecord compare_model_to_data(std::span<const AnalysisReport> data,
                                                     std::span<const AnalysisReport> model);

// Pearson correlation; 1 for identical inputs, nullopt when undefined.
[[nodiscard]] std::optional<double> pearson(std::span<const double> a, std::span<const double> b);

}  // namespace cotagnet
