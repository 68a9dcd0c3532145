#include "doctest.h"

#include <cmath>

#include "cotagnet/analysis.hpp"
#include "cotagnet/error.hpp"

using namespace cotagnet;
using doctest::Approx;

TEST_CASE("linear regression") {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  const std::vector<double> k = {2, 4, 6, 8, 10};
  const auto f = linear_cotag_regression(x, k);
  CHECK(f.slope == Approx(2.0).epsilon(1e-14));
  CHECK(f.intercept == Approx(0.0).epsilon(1e-12));
  CHECK(f.r_squared == Approx(1.0).epsilon(1e-14));

  const std::vector<double> noisy = {2.1, 3.7, 6.4, 8.0, 9.9};
  const auto a = linear_cotag_regression(x, noisy);
  std::vector<double> scaled;
  for (double v : x) scaled.push_back(3.0 * v + 7.0);
  const auto b = linear_cotag_regression(scaled, noisy);
  CHECK(b.r_squared == Approx(a.r_squared).epsilon(1e-12));
  CHECK(b.slope == Approx(a.slope / 3.0).epsilon(1e-12));

  CHECK_THROWS_AS((void)linear_cotag_regression(std::vector<double>{1, 2}, std::vector<double>{1, 2}), DataError);
  CHECK_THROWS_AS((void)linear_cotag_regression(std::vector<double>{2, 2, 2}, std::vector<double>{1, 2, 3}),
                  NumericError);
}

TEST_CASE("disjoint probability is the hypergeometric zero mass") {
  // Hypergeom(6, 3, 3): P(0) = 1/20
  CHECK(disjoint_probability(6, 3, 3) == Approx(1.0 / 20).epsilon(1e-14));
  CHECK(disjoint_probability(4, 2, 2) == Approx(1.0 / 6).epsilon(1e-14));
  CHECK(disjoint_probability(5, 3, 3) == 0.0);
  CHECK(disjoint_probability(10, 0, 4) == 1.0);
  // large branch agrees with the direct product near the switch-over
  const double direct = disjoint_probability(1000000, 64, 5000);
  const double big = disjoint_probability(1000000, 65, 5000);
  CHECK(big < direct);
  CHECK(big == Approx(direct * (1.0 - 5000.0 / (1000000.0 - 64))).epsilon(1e-9));
}

TEST_CASE("expected co-tag counts") {
  const std::vector<std::uint64_t> x = {2, 2, 2};
  CHECK(expected_unique_cotags(x, 0, 4) == Approx(5.0 / 3.0).epsilon(1e-14));
  CHECK(expected_weighted_cotags(x, 0, 4) == Approx(2.0).epsilon(1e-14));

  const std::vector<std::uint64_t> y = {50, 1200, 7, 333, 90000, 1};
  CHECK(expected_unique_cotags(y, 0, 1000000) == Approx(1.066232016220278022923163).epsilon(1e-12));
  const std::vector<std::uint64_t> z = {5000, 1200, 7, 333, 90000, 1};
  CHECK(expected_unique_cotags(z, 3, 1000000) == Approx(2.143929049126884600293149).epsilon(1e-12));
  CHECK(expected_weighted_cotags(z, 3, 1000000) == Approx((96541.0 - 333.0) * 333.0 / 1e6));
}

TEST_CASE("polynomial fit in log1p space") {
  std::vector<double> x, d;
  for (int i = 1; i <= 40; ++i) {
    x.push_back(i * 3.0);
    const double l = std::log1p(i * 3.0);
    d.push_back(std::expm1(0.2 + 0.9 * l - 0.05 * l * l + 0.002 * l * l * l));
  }
  const auto f = cubic_log_fit(x, d);
  REQUIRE(f.coeffs.size() == 4);
  CHECK(f.coeffs[0] == Approx(0.2).epsilon(1e-8));
  CHECK(f.coeffs[1] == Approx(0.9).epsilon(1e-8));
  CHECK(f.coeffs[2] == Approx(-0.05).epsilon(1e-7));
  CHECK(f.coeffs[3] == Approx(0.002).epsilon(1e-6));
  CHECK(f.mse < 1e-20);
  CHECK_FALSE(f.rank_deficient);

  const std::vector<double> two = {1, 1, 1, 3, 3, 3};
  const std::vector<double> dd = {0, 1, 2, 3, 4, 5};
  const auto r = cubic_log_fit(two, dd);
  CHECK(r.rank_deficient);
  CHECK(r.degree == 1);
  CHECK(r.coeffs.size() == 2);

  CHECK_THROWS_AS((void)cubic_log_fit(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 2, 3, 4}),
                  DataError);
}

TEST_CASE("pca explained variance") {
  // points on a line: one component
  const std::vector<std::vector<double>> line = {{0, 0}, {1, 2}, {2, 4}, {3, 6}};
  const auto p = pca_explained_variance(line);
  REQUIRE(p.explained_variance_ratios.size() == 2);
  CHECK(p.explained_variance_ratios[0] == Approx(1.0).epsilon(1e-12));
  CHECK(p.explained_variance_ratios[1] == Approx(0.0).epsilon(1e-12));

  // axis-aligned with variances 4 : 1
  const std::vector<std::vector<double>> box = {{-2, 0}, {2, 0}, {0, -1}, {0, 1}};
  const auto q = pca_explained_variance(box);
  CHECK(q.explained_variance_ratios[0] == Approx(0.8).epsilon(1e-12));
  CHECK(q.explained_variance_ratios[1] == Approx(0.2).epsilon(1e-12));

  CHECK_THROWS_AS((void)pca_explained_variance({{1, 1}, {1, 1}}), NumericError);
  CHECK_THROWS((void)pca_explained_variance({{1, 1}}));
}

TEST_CASE("pearson") {
  const std::vector<double> a = {1, 2, 3, 4};
  CHECK(*pearson(a, a) == 1.0);
  const std::vector<double> b = {4, 3, 2, 1};
  CHECK(*pearson(a, b) == Approx(-1.0));
  const std::vector<double> c = {5, 5, 5, 5};
  CHECK_FALSE(pearson(a, c).has_value());
}

TEST_CASE("analyze_graph on a single triangle question") {
  const BipartiteTagGraph g({"a", "b", "c"}, {"q"}, {{0}, {0}, {0}});
  const auto ga = analyze_graph(g, "triangle");
  CHECK(ga.report.clustering->c_unweighted == 1.0);
  CHECK(ga.report.clustering->c_weighted == 1.0);
  CHECK(ga.report.tags_per_question[2] == 1.0);
  CHECK_FALSE(ga.report.lognormal.has_value());
  CHECK_FALSE(ga.report.notes.empty());
  CHECK(ga.tags.weighted_degree == std::vector<std::uint64_t>{2, 2, 2});
}

TEST_CASE("compare_model_to_data") {
  AnalysisReport a;
  a.community = "alpha";
  a.linear = LinearFit{2.0, 1.0, 0.99};
  a.tags_per_question = {0.3, 0.3, 0.2, 0.1, 0.1, 0.0};
  AnalysisReport b = a;
  b.community = "beta";
  b.linear = LinearFit{1.5, 0.0, 0.98};
  b.tags_per_question = {0.5, 0.2, 0.1, 0.1, 0.1, 0.0};
  AnalysisReport c = a;
  c.community = "gamma";
  c.linear = LinearFit{1.7, 0.0, 0.97};
  const std::vector<AnalysisReport> data = {a, b, c};

  const auto same = compare_model_to_data(data, data);
  CHECK(same.communities == std::vector<std::string>{"alpha", "beta", "gamma"});
  CHECK(*same.metrics.at("linear_slope").correlation == 1.0);
  CHECK(same.metrics.at("linear_slope").mse == 0.0);
  CHECK(same.metrics.at("linear_slope").n == 3);

  // replicates averaged per community
  auto a1 = a, a2 = a;
  a1.replicate = 1;
  a1.linear->slope = 1.0;
  a2.replicate = 2;
  a2.linear->slope = 3.0;
  const std::vector<AnalysisReport> model = {a1, a2, b, c};
  const auto avg = compare_model_to_data(data, model);
  CHECK(avg.model_means.at("linear_slope") == Approx(data.size() > 0 ? (2.0 + 1.5 + 1.7) / 3 : 0));
  CHECK(*avg.metrics.at("linear_slope").correlation == Approx(1.0));

  const std::vector<AnalysisReport> other = {a, b};
  CHECK_THROWS_AS((void)compare_model_to_data(data, other), DataError);
}
