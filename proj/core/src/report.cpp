#include "cotagnet/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace cotagnet {
namespace {

using Json = nlohmann::ordered_json;

// Non-finite values serialize as null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string csv_number(double v) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json params_json(const DistributionParams& params) {
  return std::visit(
      [](const auto& p) -> Json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, LognormalParams>) {
          return {{"mu", number(p.mu)}, {"sigma", number(p.sigma)}};
        } else if constexpr (std::is_same_v<T, PowerLawParams>) {
          return {{"alpha", number(p.alpha)}};
        } else if constexpr (std::is_same_v<T, TruncatedPowerLawParams>) {
          return {{"alpha", number(p.alpha)}, {"lambda", number(p.lambda)}};
        } else {
          return {{"lambda", number(p.lambda)}, {"beta", number(p.beta)}};
        }
      },
      params);
}

std::vector<std::string> param_names(Family f) {
  switch (f) {
    case Family::kLognormal:
      return {"mu", "sigma"};
    case Family::kPowerLaw:
      return {"alpha"};
    case Family::kTruncatedPowerLaw:
      return {"alpha", "lambda"};
    case Family::kStretchedExponential:
      return {"lambda", "beta"};
  }
  return {};
}

std::vector<double> param_values(const DistributionParams& params) {
  return std::visit(
      [](const auto& p) -> std::vector<double> {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, LognormalParams>) {
          return {p.mu, p.sigma};
        } else if constexpr (std::is_same_v<T, PowerLawParams>) {
          return {p.alpha};
        } else if constexpr (std::is_same_v<T, TruncatedPowerLawParams>) {
          return {p.alpha, p.lambda};
        } else {
          return {p.lambda, p.beta};
        }
      },
      params);
}

double get_number(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nan("");
  return it->get<double>();
}

Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string(what) + ": invalid JSON: " + e.what(), e.byte);
  }
}

void expect_schema(const Json& j, std::string_view schema) {
  if (!j.is_object() || !j.contains("schema") || j["schema"] != schema) {
    throw DataError("expected a document with schema '" + std::string(schema) + "'");
  }
}

}  // namespace

const DistributionFit* CommunityFits::find(Family f) const {
  for (const auto& r : families) {
    if (r.family == f && r.fit) return &*r.fit;
  }
  return nullptr;
}

std::string summary_json(std::string_view community, const GraphSummary& summary,
                         const IngestStats& stats, std::size_t duplicate_tags,
                         const std::vector<std::string>& issues) {
  Json j;
  j["schema"] = kSummarySchema;
  j["community"] = community;
  j["n_tags"] = summary.n_tags;
  j["n_questions"] = summary.n_questions;
  j["occurrences"] = summary.occurrences;
  j["min_frequency"] = summary.min_frequency ? Json(*summary.min_frequency) : Json(nullptr);
  j["max_frequency"] = summary.max_frequency ? Json(*summary.max_frequency) : Json(nullptr);
  j["duplicate_tags"] = duplicate_tags;
  j["stats"] = {{"rows", stats.rows},
                {"skipped_non_question", stats.skipped_non_question},
                {"skipped_untagged", stats.skipped_untagged},
                {"rejected_tag_count", stats.rejected_tag_count},
                {"malformed", stats.malformed}};
  j["issues"] = issues;
  return dump(j);
}

std::string fits_json(const CommunityFits& fits) {
  Json j;
  j["schema"] = kFitSchema;
  j["community"] = fits.community;
  j["n"] = fits.n;
  Json fams = Json::object();
  for (const auto& r : fits.families) {
    Json f;
    f["family"] = family_name(r.family);
    if (r.fit) {
      f["params"] = params_json(r.fit->params);
      f["x_min"] = number(r.fit->x_min);
      f["D"] = number(r.fit->ks_statistic);
      f["loglik"] = number(r.fit->loglik);
    } else {
      f["error"] = r.error;
    }
    fams[std::string(family_name(r.family))] = f;
  }
  j["fits"] = fams;
  Json lrs = Json::array();
  for (const auto& e : fits.likelihood_ratios) {
    Json l;
    l["null"] = family_name(Family::kLognormal);
    l["alternative"] = family_name(e.alternative);
    if (e.result) {
      l["R"] = number(e.result->R);
      l["p_value"] = number(e.result->p_value);
      l["log_ratio"] = number(e.result->log_ratio);
    } else {
      l["error"] = e.error;
    }
    lrs.push_back(l);
  }
  j["likelihood_ratio_tests"] = lrs;
  return dump(j);
}

LognormalParams lognormal_from_fits_json(std::string_view text) {
  const Json j = parse_json(text, "fit document");
  expect_schema(j, kFitSchema);
  const auto& fits = j.at("fits");
  if (!fits.contains("lognormal") || !fits["lognormal"].contains("params")) {
    throw DataError("fit document has no lognormal parameters");
  }
  const auto& p = fits["lognormal"]["params"];
  LognormalParams out{get_number(p, "mu"), get_number(p, "sigma")};
  if (!std::isfinite(out.mu) || !(out.sigma > 0.0)) {
    throw DataError("fit document has invalid lognormal parameters");
  }
  return out;
}

std::string population_json(const ParamPopulation& pop, const std::vector<std::string>& communities) {
  Json j;
  j["schema"] = kPopulationSchema;
  j["communities"] = communities;
  auto side = [](const std::vector<double>& values, double mean, double sd, double ks) {
    Json s;
    Json arr = Json::array();
    for (double v : values) arr.push_back(number(v));
    s["values"] = arr;
    s["mean"] = number(mean);
    s["sd"] = number(sd);
    s["normality_ks"] = number(ks);
    return s;
  };
  j["mu"] = side(pop.mus, pop.mu_mean, pop.mu_sd, pop.mu_normality_ks);
  j["sigma"] = side(pop.sigmas, pop.sigma_mean, pop.sigma_sd, pop.sigma_normality_ks);
  return dump(j);
}

std::string generation_report_json(const GeneratorConfig& config, const GenerationReport& r,
                                   std::string_view community, std::optional<int> replicate) {
  Json j;
  j["schema"] = kGenerationSchema;
  if (!community.empty()) j["community"] = community;
  if (replicate) j["replicate"] = *replicate;
  j["config"] = {{"n_tags", config.n_tags},
                 {"n_questions", config.n_questions},
                 {"occurrences", config.occurrences},
                 {"mu", number(config.mu)},
                 {"sigma", number(config.sigma)},
                 {"seed", config.seed},
                 {"clamp_to_questions", config.clamp_to_questions}};
  j["rng"] = "mt19937_64+splitmix64";
  j["corrected_questions"] = r.corrected_questions;
  j["realized_occurrences"] = r.realized_occurrences;
  j["n_clamped_zero"] = r.n_clamped_zero;
  j["n_clamped_to_questions"] = r.n_clamped_to_questions;
  j["n_empty_discarded"] = r.n_empty_discarded;
  j["surviving_questions"] = r.surviving_questions;
  const double rel_err =
      std::fabs(static_cast<double>(r.surviving_questions) - static_cast<double>(r.target_questions)) /
      static_cast<double>(r.target_questions);
  j["relative_question_error"] = number(rel_err);
  j["frac_over_five"] = number(r.frac_over_five);
  j["expected_empty"] = number(r.expected_empty);
  j["expected_empty_std"] = number(r.expected_empty_std);
  return dump(j);
}

std::string analysis_json(const AnalysisReport& r) {
  Json j;
  j["schema"] = kAnalysisSchema;
  j["community"] = r.community;
  j["replicate"] = r.replicate ? Json(*r.replicate) : Json(nullptr);
  j["log_base"] = "e";
  j["n_tags"] = r.n_tags;
  j["n_questions"] = r.n_questions;
  j["m"] = r.occurrences;
  j["lognormal"] = r.lognormal ? Json{{"mu", number(r.lognormal->mu)},
                                      {"sigma", number(r.lognormal->sigma)},
                                      {"D", number(r.lognormal->ks)}}
                               : Json(nullptr);
  j["linear"] = r.linear ? Json{{"slope", number(r.linear->slope)},
                                {"intercept", number(r.linear->intercept)},
                                {"r2", number(r.linear->r_squared)}}
                         : Json(nullptr);
  if (r.cubic) {
    Json c;
    for (int i = 0; i < 4; ++i) {
      const double a = i < static_cast<int>(r.cubic->coeffs.size()) ? r.cubic->coeffs[i] : 0.0;
      c["a" + std::to_string(i)] = number(a);
    }
    c["mse"] = number(r.cubic->mse);
    c["degree"] = r.cubic->degree;
    c["rank_deficient"] = r.cubic->rank_deficient;
    c["linear_mse"] = r.linear_log_mse ? number(*r.linear_log_mse) : Json(nullptr);
    j["cubic"] = c;
  } else {
    j["cubic"] = nullptr;
  }
  j["clustering"] = r.clustering ? Json{{"C", number(r.clustering->c_unweighted)},
                                        {"Cw", number(r.clustering->c_weighted)},
                                        {"logCw", number(r.clustering->log_c_weighted)},
                                        {"Clw", number(r.clustering->c_logweighted)},
                                        {"n_nodes", r.clustering->n_nodes},
                                        {"n_nodes_deg_lt2", r.clustering->n_nodes_deg_lt2}}
                                 : Json(nullptr);
  Json tpq = Json::array();
  for (double f : r.tags_per_question) tpq.push_back(number(f));
  j["tags_per_question"] = tpq;
  j["corrected_questions"] = r.corrected_questions ? Json(*r.corrected_questions) : Json(nullptr);
  j["unique_cotags"] = r.unique_cotag_mean_error
                           ? Json{{"mean_error", number(*r.unique_cotag_mean_error)},
                                  {"mean_abs_error", number(r.unique_cotag_mean_abs_error.value_or(
                                                         std::nan("")))}}
                           : Json(nullptr);
  j["notes"] = r.notes;
  return dump(j);
}

AnalysisReport parse_analysis_json(std::string_view text) {
  const Json j = parse_json(text, "analysis report");
  expect_schema(j, kAnalysisSchema);
  AnalysisReport r;
  try {
    r.community = j.at("community").get<std::string>();
    if (!j.at("replicate").is_null()) r.replicate = j["replicate"].get<int>();
    r.n_tags = j.at("n_tags").get<std::size_t>();
    r.n_questions = j.at("n_questions").get<std::size_t>();
    r.occurrences = j.at("m").get<std::uint64_t>();
    if (const auto& l = j.at("lognormal"); !l.is_null()) {
      r.lognormal = AnalysisReport::Lognormal{get_number(l, "mu"), get_number(l, "sigma"),
                                              get_number(l, "D")};
    }
    if (const auto& l = j.at("linear"); !l.is_null()) {
      r.linear = LinearFit{get_number(l, "slope"), get_number(l, "intercept"), get_number(l, "r2")};
    }
    if (const auto& c = j.at("cubic"); !c.is_null()) {
      PolyLogFit fit;
      fit.degree = c.at("degree").get<int>();
      fit.rank_deficient = c.at("rank_deficient").get<bool>();
      for (int i = 0; i <= fit.degree; ++i) fit.coeffs.push_back(get_number(c, ("a" + std::to_string(i)).c_str()));
      fit.mse = get_number(c, "mse");
      fit.n = r.n_tags;
      r.cubic = fit;
      const double lm = get_number(c, "linear_mse");
      if (std::isfinite(lm)) r.linear_log_mse = lm;
    }
    if (const auto& c = j.at("clustering"); !c.is_null()) {
      ClusteringReport cr;
      cr.c_unweighted = get_number(c, "C");
      cr.c_weighted = get_number(c, "Cw");
      const double log_cw = get_number(c, "logCw");
      cr.log_c_weighted = std::isfinite(log_cw) ? log_cw : -INFINITY;
      cr.c_logweighted = get_number(c, "Clw");
      cr.n_nodes = c.at("n_nodes").get<std::size_t>();
      cr.n_nodes_deg_lt2 = c.at("n_nodes_deg_lt2").get<std::size_t>();
      r.clustering = cr;
    }
    const auto& tpq = j.at("tags_per_question");
    if (tpq.size() != 6) throw DataError("tags_per_question must have 6 entries");
    for (std::size_t i = 0; i < 6; ++i) r.tags_per_question[i] = tpq[i].is_null() ? 0.0 : tpq[i].get<double>();
    if (!j.at("corrected_questions").is_null()) r.corrected_questions = j["corrected_questions"].get<std::uint64_t>();
    if (const auto& u = j.at("unique_cotags"); !u.is_null()) {
      r.unique_cotag_mean_error = get_number(u, "mean_error");
      r.unique_cotag_mean_abs_error = get_number(u, "mean_abs_error");
    }
    r.notes = j.at("notes").get<std::vector<std::string>>();
  } catch (const Json::exception& e) {
    throw DataError(std::string("analysis report: ") + e.what());
  }
  return r;
}

std::string comparison_json(const ComparisonRecord& rec) {
  Json j;
  j["schema"] = kComparisonSchema;
  j["communities"] = rec.communities;
  Json metrics = Json::object();
  for (const auto& [name, mc] : rec.metrics) {
    metrics[name] = {{"n", mc.n},
                     {"correlation", mc.correlation ? number(*mc.correlation) : Json(nullptr)},
                     {"mse", number(mc.mse)}};
  }
  j["metrics"] = metrics;
  auto means = [](const std::map<std::string, double>& m) {
    Json o = Json::object();
    for (const auto& [k, v] : m) o[k] = number(v);
    return o;
  };
  j["data_means"] = means(rec.data_means);
  j["model_means"] = means(rec.model_means);
  auto pca = [](const std::optional<PcaSummary>& p) {
    if (!p) return Json(nullptr);
    Json arr = Json::array();
    for (double v : p->explained_variance_ratios) arr.push_back(number(v));
    return Json{{"explained_variance_ratios", arr}};
  };
  j["pca_data"] = pca(rec.pca_data);
  j["pca_model"] = pca(rec.pca_model);
  // Expected values for a full-corpus run, for side-by-side reading.
  j["reference_targets"] = {{"linear_slope_mean", 1.82},
                            {"linear_slope_correlation", 0.932},
                            {"linear_slope_mse", 0.10},
                            {"pca_data_first", 0.86},
                            {"pca_data_second", 0.13},
                            {"pca_model_first", 0.89},
                            {"pca_model_second", 0.10}};
  return dump(j);
}

std::string error_json(std::string_view kind, std::string_view message, ExitCode code) {
  Json j;
  j["schema"] = kErrorSchema;
  j["error"] = {{"kind", kind}, {"message", message}, {"exit_code", static_cast<int>(code)}};
  return j.dump() + "\n";
}

std::string error_json(const Error& e) {
  Json j;
  j["schema"] = kErrorSchema;
  Json err = {{"kind", e.kind()}, {"message", e.what()}, {"exit_code", static_cast<int>(e.exit_code())}};
  if (const auto* pe = dynamic_cast<const ParseError*>(&e); pe != nullptr && pe->byte_offset()) {
    err["byte_offset"] = *pe->byte_offset();
  }
  j["error"] = err;
  return j.dump() + "\n";
}

std::string fits_csv_header(const std::vector<Family>& families) {
  std::string h = "community,n";
  for (Family f : families) {
    const std::string name(family_name(f));
    for (const auto& p : param_names(f)) h += "," + name + "_" + p;
    h += "," + name + "_D," + name + "_loglik";
  }
  const bool has_lognormal = std::find(families.begin(), families.end(), Family::kLognormal) != families.end();
  if (has_lognormal) {
    for (Family f : families) {
      if (f == Family::kLognormal) continue;
      const std::string name(family_name(f));
      h += ",lr_" + name + "_R,lr_" + name + "_p";
    }
  }
  return h + "\n";
}

std::string fits_csv_row(const CommunityFits& fits, const std::vector<Family>& families) {
  std::ostringstream row;
  row << fits.community << ',' << fits.n;
  for (Family f : families) {
    const DistributionFit* fit = fits.find(f);
    const std::size_t n_params = param_names(f).size();
    if (fit == nullptr) {
      for (std::size_t i = 0; i < n_params + 2; ++i) row << ',';
      continue;
    }
    for (double v : param_values(fit->params)) row << ',' << csv_number(v);
    row << ',' << csv_number(fit->ks_statistic) << ',' << csv_number(fit->loglik);
  }
  const bool has_lognormal = std::find(families.begin(), families.end(), Family::kLognormal) != families.end();
  if (has_lognormal) {
    for (Family f : families) {
      if (f == Family::kLognormal) continue;
      const LikelihoodRatioEntry* entry = nullptr;
      for (const auto& e : fits.likelihood_ratios) {
        if (e.alternative == f) entry = &e;
      }
      if (entry != nullptr && entry->result) {
        row << ',' << csv_number(entry->result->R) << ',' << csv_number(entry->result->p_value);
      } else {
        row << ",,";
      }
    }
  }
  row << '\n';
  return row.str();
}

std::string analysis_csv_header() {
  return "community,replicate,n_tags,n_questions,m,mu,sigma,D,slope,intercept,r2,a0,a1,a2,a3,"
         "cubic_mse,linear_log_mse,C,Cw,logCw,Clw,tpq_1,tpq_2,tpq_3,tpq_4,tpq_5,tpq_gt5,"
         "corrected_questions,unique_cotag_mean_error\n";
}

std::string analysis_csv_row(const AnalysisReport& r) {
  std::ostringstream row;
  const double nan = std::nan("");
  row << r.community << ',' << (r.replicate ? std::to_string(*r.replicate) : "") << ','
      << r.n_tags << ',' << r.n_questions << ',' << r.occurrences;
  auto put = [&](double v) { row << ',' << csv_number(v); };
  put(r.lognormal ? r.lognormal->mu : nan);
  put(r.lognormal ? r.lognormal->sigma : nan);
  put(r.lognormal ? r.lognormal->ks : nan);
  put(r.linear ? r.linear->slope : nan);
  put(r.linear ? r.linear->intercept : nan);
  put(r.linear ? r.linear->r_squared : nan);
  for (int i = 0; i < 4; ++i) {
    put(r.cubic ? (i < static_cast<int>(r.cubic->coeffs.size()) ? r.cubic->coeffs[i] : 0.0) : nan);
  }
  put(r.cubic ? r.cubic->mse : nan);
  put(r.linear_log_mse.value_or(nan));
  put(r.clustering ? r.clustering->c_unweighted : nan);
  put(r.clustering ? r.clustering->c_weighted : nan);
  put(r.clustering ? r.clustering->log_c_weighted : nan);
  put(r.clustering ? r.clustering->c_logweighted : nan);
  for (double f : r.tags_per_question) put(f);
  row << ',' << (r.corrected_questions ? std::to_string(*r.corrected_questions) : "");
  put(r.unique_cotag_mean_error.value_or(nan));
  row << '\n';
  return row.str();
}

std::string tag_table_csv(const std::vector<std::string>& names, const TagTable& table) {
  std::ostringstream out;
  out << "tag,frequency,weighted_degree,unweighted_degree,expected_weighted,expected_unique\n";
  const bool has_expected = table.expected_unique.size() == names.size();
  for (std::size_t t = 0; t < names.size(); ++t) {
    out << names[t] << ',' << table.frequency[t] << ',' << table.weighted_degree[t] << ','
        << table.unweighted_degree[t] << ','
        << (has_expected ? csv_number(table.expected_weighted[t]) : "") << ','
        << (has_expected ? csv_number(table.expected_unique[t]) : "") << '\n';
  }
  return out.str();
}

}  // namespace cotagnet
