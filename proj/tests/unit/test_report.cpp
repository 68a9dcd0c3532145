#include "doctest.h"

#include <cmath>
#include <limits>

#include "cotagnet/report.hpp"
#include "json.hpp"

using namespace cotagnet;
using Json = nlohmann::json;

namespace {

AnalysisReport sample_report() {
  AnalysisReport r;
  r.community = "coffee";
  r.replicate = 2;
  r.n_tags = 107;
  r.n_questions = 937;
  r.occurrences = 2100;
  r.lognormal = AnalysisReport::Lognormal{2.1, 1.3, 0.05};
  r.linear = LinearFit{1.8, 0.4, 0.97};
  PolyLogFit c;
  c.coeffs = {0.1, 0.9, -0.02, 0.001};
  c.mse = 0.03;
  c.n = 107;
  r.cubic = c;
  r.linear_log_mse = 0.08;
  ClusteringReport cl;
  cl.c_unweighted = 0.6;
  cl.c_weighted = 0.0;
  cl.log_c_weighted = -std::numeric_limits<double>::infinity();
  cl.c_logweighted = 0.2;
  cl.n_nodes = 107;
  cl.n_nodes_deg_lt2 = 3;
  r.clustering = cl;
  r.tags_per_question = {0.2, 0.3, 0.3, 0.1, 0.1, 0.0};
  r.corrected_questions = 1100;
  r.unique_cotag_mean_error = 0.5;
  r.unique_cotag_mean_abs_error = 1.5;
  r.notes = {"something"};
  return r;
}

}  // namespace

TEST_CASE("analysis json round trips") {
  const auto text = analysis_json(sample_report());
  const auto j = Json::parse(text);
  CHECK(j["schema"] == "cotagnet/analysis/v1");
  CHECK(j["clustering"]["logCw"].is_null());
  CHECK(j["cubic"]["a3"] == 0.001);
  const auto back = parse_analysis_json(text);
  CHECK(analysis_json(back) == text);
  CHECK(std::isinf(back.clustering->log_c_weighted));
}

TEST_CASE("rank deficient cubic is zero padded") {
  auto r = sample_report();
  r.cubic->coeffs = {0.5, 0.7};
  r.cubic->degree = 1;
  r.cubic->rank_deficient = true;
  const auto j = Json::parse(analysis_json(r));
  CHECK(j["cubic"]["a2"] == 0.0);
  CHECK(j["cubic"]["degree"] == 1);
  CHECK(parse_analysis_json(analysis_json(r)).cubic->coeffs.size() == 2);
}

TEST_CASE("parse_analysis_json rejects other documents") {
  CHECK_THROWS_AS((void)parse_analysis_json("{\"schema\": \"cotagnet/fit/v1\"}"), DataError);
  CHECK_THROWS_AS((void)parse_analysis_json("{not json"), ParseError);
  CHECK_THROWS_AS((void)parse_analysis_json("{\"schema\": \"cotagnet/analysis/v1\"}"), DataError);
}

TEST_CASE("error json carries kind, code and byte offset") {
  const auto j = Json::parse(error_json(ParseError("bad", 42)));
  CHECK(j["error"]["kind"] == "parse");
  CHECK(j["error"]["exit_code"] == 2);
  CHECK(j["error"]["byte_offset"] == 42);
  const auto u = Json::parse(error_json(UsageError("nope")));
  CHECK(u["error"]["exit_code"] == 1);
  CHECK_FALSE(u["error"].contains("byte_offset"));
  const auto wrapped = Json::parse(error_json(ParseError("bad", 7).in_file("x.xml")));
  CHECK(wrapped["error"]["byte_offset"] == 7);
  CHECK(wrapped["error"]["message"] == "x.xml: bad (at byte 7)");
}

TEST_CASE("fits csv columns follow the family filter") {
  CommunityFits cf;
  cf.community = "c";
  cf.n = 30;
  FamilyResult fr;
  fr.family = Family::kLognormal;
  DistributionFit fit;
  fit.params = LognormalParams{1.5, 0.5};
  fit.ks_statistic = 0.25;
  fit.loglik = -10.0;
  fr.fit = fit;
  cf.families.push_back(fr);
  const std::vector<Family> only = {Family::kLognormal};
  CHECK(fits_csv_header(only) == "community,n,lognormal_mu,lognormal_sigma,lognormal_D,lognormal_loglik\n");
  CHECK(fits_csv_row(cf, only) == "c,30,1.5,0.5,0.25,-10\n");
  CHECK(lognormal_from_fits_json(fits_json(cf)).mu == 1.5);
}

TEST_CASE("analysis csv row width matches header") {
  const auto header = analysis_csv_header();
  const auto row = analysis_csv_row(sample_report());
  CHECK(std::count(header.begin(), header.end(), ',') == std::count(row.begin(), row.end(), ','));
  AnalysisReport empty;
  empty.community = "e";
  const auto row2 = analysis_csv_row(empty);
  CHECK(std::count(header.begin(), header.end(), ',') == std::count(row2.begin(), row2.end(), ','));
}
