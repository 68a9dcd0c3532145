#pragma once

// Serialized forms of every artifact the pipeline writes. Each JSON document
// carries a "schema" field naming its versioned schema under schemas/.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cotagnet/analysis.hpp"
#include "cotagnet/bipartite.hpp"
#include "cotagnet/distfit.hpp"
#include "cotagnet/error.hpp"
#include "cotagnet/generator.hpp"
#include "cotagnet/ingest.hpp"

namespace cotagnet {

inline constexpr std::string_view kSummarySchema = "cotagnet/summary/v1";
inline constexpr std::string_view kFitSchema = "cotagnet/fit/v1";
inline constexpr std::string_view kPopulationSchema = "cotagnet/fit-population/v1";
inline constexpr std::string_view kGenerationSchema = "cotagnet/generation-report/v1";
inline constexpr std::string_view kAnalysisSchema = "cotagnet/analysis/v1";
inline constexpr std::string_view kComparisonSchema = "cotagnet/comparison/v1";
inline constexpr std::string_view kErrorSchema = "cotagnet/error/v1";

struct FamilyResult {
  Family family = Family::kLognormal;
  std::optional<DistributionFit> fit;
  std::string error;  // set when the fit failed
};

struct LikelihoodRatioEntry {
  Family alternative = Family::kPowerLaw;
  std::optional<LikelihoodRatioResult> result;
  std::string error;
};

// Everything the fit command learns about one community.
struct CommunityFits {
  std::string community;
  std::size_t n = 0;
  std::vector<FamilyResult> families;
  std::vector<LikelihoodRatioEntry> likelihood_ratios;  // lognormal vs each alternative

  [[nodiscard]] const DistributionFit* find(Family f) const;
};

[[nodiscard]] std::string summary_json(std::string_view community, const GraphSummary& summary,
                                       const IngestStats& stats, std::size_t duplicate_tags,
                                       const std::vector<std::string>& issues);

[[nodiscard]] std::string fits_json(const CommunityFits& fits);
// Reads back the lognormal (mu, sigma) from a fit document.
[[nodiscard]] LognormalParams lognormal_from_fits_json(std::string_view json);

[[nodiscard]] std::string population_json(const ParamPopulation& pop,
                                          const std::vector<std::string>& communities);

[[nodiscard]] std::string generation_report_json(const GeneratorConfig& config,
                                                 const GenerationReport& report,
                                                 std::string_view community = {},
                                                 std::optional<int> replicate = std::nullopt);

[[nodiscard]] std::string analysis_json(const AnalysisReport& report);
[[nodiscard]] AnalysisReport parse_analysis_json(std::string_view json);

[[nodiscard]] std::string comparison_json(const ComparisonRecord& rec);

[[nodiscard]] std::string error_json(const Error& e);
[[nodiscard]] std::string error_json(std::string_view kind, std::string_view message, ExitCode code);

// CSV forms, one row per community. Rows use the header's column order.
[[nodiscard]] std::string fits_csv_header(const std::vector<Family>& families);
[[nodiscard]] std::string fits_csv_row(const CommunityFits& fits, const std::vector<Family>& families);
[[nodiscard]] std::string analysis_csv_header();
[[nodiscard]] std::string analysis_csv_row(const AnalysisReport& report);
[[nodiscard]] std::string tag_table_csv(const std::vector<std::string>& names, const TagTable& table);

}  // namespace cotagnet
