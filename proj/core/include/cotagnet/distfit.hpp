#pragma once

// Heavy-tailed distribution fits for tag-frequency vectors.
//
// All families are continuous densities on [x_min, inf) with x_min fixed at
// the sample minimum; discrete counts are fitted with these continuous
// likelihoods. The lognormal is the exception on the likelihood side: its
// parameters are the closed-form MLE on ln(x) and its log-likelihood is the
// plain lognormal density. Goodness of fit (ks_statistic) conditions every
// family, lognormal included, on x >= x_min.

#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "cotagnet/error.hpp"

namespace cotagnet {

inline constexpr std::size_t kMinFitSamples = 10;

enum class Family { kLognormal, kPowerLaw, kTruncatedPowerLaw, kStretchedExponential };

inline constexpr Family kAllFamilies[] = {Family::kLognormal, Family::kPowerLaw,
                                          Family::kTruncatedPowerLaw,
                                          Family::kStretchedExponential};

[[nodiscard]] std::string_view family_name(Family f) noexcept;
// Throws UsageError on an unknown name.
[[nodiscard]] Family parse_family(std::string_view name);

struct LognormalParams {
  double mu = 0.0;
  double sigma = 1.0;
};
// p(x) ~ x^-alpha
struct PowerLawParams {
  double alpha = 2.0;
};
// p(x) ~ x^-alpha e^{-lambda x}
struct TruncatedPowerLawParams {
  double alpha = 2.0;
  double lambda = 1.0;
};
// p(x) ~ x^{beta-1} e^{-(lambda x)^beta}
struct StretchedExponentialParams {
  double lambda = 1.0;
  double beta = 1.0;
};

using DistributionParams = std::variant<LognormalParams, PowerLawParams, TruncatedPowerLawParams,
                                        StretchedExponentialParams>;

struct DistributionFit {
  DistributionParams params;
  double x_min = 1.0;
  double ks_statistic = 0.0;  // D in [0, 1]
  double loglik = 0.0;
  std::size_t n = 0;

  [[nodiscard]] Family family() const noexcept { return static_cast<Family>(params.index()); }
};

// Raised when an optimizer exhausts its iteration budget. Carries the best
// parameters found, in the family's natural order.
class ConvergenceError : public NumericError {
 public:
  ConvergenceError(const std::string& what, std::vector<double> best)
      : NumericError(what), best_(std::move(best)) {}
  [[nodiscard]] const std::vector<double>& best() const noexcept { return best_; }

 private:
  std::vector<double> best_;
};

// Log-density of one point under a fitted model (see the header comment for
// the lognormal convention).
[[nodiscard]] double log_pdf(const DistributionParams& params, double x_min, double x);

// Model CDF conditioned on x >= x_min; 0 below x_min.
[[nodiscard]] double conditional_cdf(const DistributionParams& params, double x_min, double x);

// Each fit requires at least kMinFitSamples positive finite values.
[[nodiscard]] DistributionFit fit_lognormal(std::span<const double> values);
[[nodiscard]] DistributionFit fit_powerlaw(std::span<const double> values);
[[nodiscard]] DistributionFit fit_truncated_powerlaw(std::span<const double> values);
[[nodiscard]] DistributionFit fit_stretched_exponential(std::span<const double> values);
[[nodiscard]] DistributionFit fit_family(Family family, std::span<const double> values);

// Builds a fit record for fixed parameters (loglik and D evaluated on `values`).
[[nodiscard]] DistributionFit evaluate_fit(const DistributionParams& params, double x_min,
                                           std::span<const double> values);

// Two-sided KS distance between the sample and fit's conditional CDF.
[[nodiscard]] double ks_statistic(std::span<const double> values, const DistributionFit& fit);

struct LikelihoodRatioResult {
  double R = 0.0;        // normalized log-likelihood ratio; > 0 favours the null
  double p_value = 1.0;  // two-sided
  double log_ratio = 0.0;  // L_null - L_alt
};

// Vuong-normalized likelihood ratio test of `null_fit` against `alt_fit`.
[[nodiscard]] LikelihoodRatioResult likelihood_ratio_test(std::span<const double> values,
                                                          const DistributionFit& null_fit,
                                                          const DistributionFit& alt_fit);

struct ParamPopulation {
  std::vector<double> mus;
  std::vector<double> sigmas;
  double mu_mean = 0.0;
  double mu_sd = 0.0;
  double sigma_mean = 0.0;
  double sigma_sd = 0.0;
  // KS distance of each list from the normal with its own mean and sd;
  // NaN when the sd is zero.
  double mu_normality_ks = 0.0;
  double sigma_normality_ks = 0.0;
};

// Population summary of lognormal fits (at least two).
[[nodiscard]] ParamPopulation param_population(std::span<const DistributionFit> fits);

}  // namespace cotagnet
