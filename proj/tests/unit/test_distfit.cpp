#include "doctest.h"

#include <cmath>
#include <vector>

#include "cotagnet/distfit.hpp"
#include "cotagnet/rng.hpp"
#include "cotagnet/special.hpp"

using namespace cotagnet;
using doctest::Approx;

namespace {

const std::vector<double> kSample = {1,  1,  1,  2,  2,  3,  3,   3,   4,   5,   6,   7,   8,   9,    11,
                                     13, 17, 20, 25, 31, 40, 55, 70, 90, 120, 160, 230, 400, 700, 1500};

}  // namespace

TEST_CASE("log_upper_gamma against mpmath") {
  struct Case {
    double s, x, expected;
  };
  const Case cases[] = {
      {2.5, 0.3, 0.27261357141352039694},   {0.5, 2.0, -2.5176722101973865523},
      {-0.7, 0.01, 3.4796003789864416927},  {-0.7, 3.0, -5.2541448655357760131},
      {-2.0, 0.05, 5.2038283189689997747},  {-3.3, 0.2, 3.8374824706572958935},
      {0.0, 0.5, -0.58022287204478746405},  {-1.0, 0.1, 1.9776095465124224711},
      {1e-3, 40.0, -43.70929078228884651},
  };
  for (const auto& c : cases) {
    CAPTURE(c.s);
    CAPTURE(c.x);
    CHECK(special::log_upper_gamma(c.s, c.x) == Approx(c.expected).epsilon(1e-11));
  }
  CHECK(special::normal_cdf(0.0) == 0.5);
  CHECK(special::normal_cdf(-1.959963984540054) == Approx(0.025).epsilon(1e-12));
}

TEST_CASE("family names round trip") {
  for (Family f : kAllFamilies) CHECK(parse_family(family_name(f)) == f);
  CHECK_THROWS_AS((void)parse_family("gamma"), UsageError);
}

TEST_CASE("lognormal fit matches the closed form") {
  const auto fit = fit_lognormal(kSample);
  const auto p = std::get<LognormalParams>(fit.params);
  CHECK(p.mu == Approx(2.8245960067702627772).epsilon(1e-13));
  CHECK(p.sigma == Approx(1.9654383830871107427).epsilon(1e-13));
  CHECK(fit.loglik == Approx(-147.57749568397926983).epsilon(1e-12));
  CHECK(fit.ks_statistic == Approx(0.14282150531636012111).epsilon(1e-12));
  CHECK(fit.x_min == 1.0);
  CHECK(fit.n == kSample.size());
  CHECK(fit.family() == Family::kLognormal);
}

TEST_CASE("power law fit matches the closed form") {
  const auto fit = fit_powerlaw(kSample);
  CHECK(std::get<PowerLawParams>(fit.params).alpha == Approx(1.3540329298785044066).epsilon(1e-13));
  CHECK(fit.loglik == Approx(-145.88884064067794831).epsilon(1e-12));
  CHECK(fit.ks_statistic == Approx(0.15556173767453383192).epsilon(1e-12));
}

TEST_CASE("truncated power law reaches the likelihood optimum") {
  const auto fit = fit_truncated_powerlaw(kSample);
  const auto p = std::get<TruncatedPowerLawParams>(fit.params);
  CHECK(p.alpha == Approx(1.1394993956966923).epsilon(1e-4));
  CHECK(p.lambda == Approx(0.0008165744987484927).epsilon(1e-3));
  CHECK(fit.loglik == Approx(-142.76899745065836).epsilon(1e-8));
}

TEST_CASE("stretched exponential reaches the likelihood optimum") {
  const auto fit = fit_stretched_exponential(kSample);
  const auto p = std::get<StretchedExponentialParams>(fit.params);
  CHECK(p.beta == Approx(0.24440858567057688).epsilon(1e-5));
  CHECK(p.lambda == Approx(0.39536829930171796).epsilon(1e-4));
  CHECK(fit.loglik == Approx(-143.09850978324422).epsilon(1e-8));
}

TEST_CASE("likelihood ratio test matches the Vuong statistic") {
  const auto ln = fit_lognormal(kSample);
  const auto pl = fit_powerlaw(kSample);
  const auto lr = likelihood_ratio_test(kSample, ln, pl);
  CHECK(lr.R == Approx(-0.43250686737350910144).epsilon(1e-11));
  CHECK(lr.p_value == Approx(0.66537306208800047459).epsilon(1e-11));
  CHECK(lr.log_ratio == Approx(-1.6886550433013215202).epsilon(1e-11));
  const auto self = evaluate_fit(ln.params, ln.x_min, kSample);
  CHECK_THROWS_AS((void)likelihood_ratio_test(kSample, ln, self), NumericError);
}

TEST_CASE("conditional CDFs are proper on [x_min, inf)") {
  for (Family f : kAllFamilies) {
    CAPTURE(family_name(f));
    const auto fit = fit_family(f, kSample);
    CHECK(conditional_cdf(fit.params, fit.x_min, fit.x_min) == 0.0);
    CHECK(conditional_cdf(fit.params, fit.x_min, 0.5) == 0.0);
    double prev = 0.0;
    for (double x = 1.5; x < 1e7; x *= 1.7) {
      const double c = conditional_cdf(fit.params, fit.x_min, x);
      CHECK(c >= prev);
      prev = c;
    }
    CHECK(conditional_cdf(fit.params, fit.x_min, 1e12) == Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("ks statistic handles ties and perfect fits") {
  std::vector<double> values(20, 3.0);
  values.push_back(4.0);
  const auto fit = evaluate_fit(PowerLawParams{2.0}, 3.0, values);
  // F(3) = 0 while 20/21 of the mass sits at 3.
  CHECK(fit.ks_statistic == Approx(20.0 / 21.0));
}

TEST_CASE("sample validation") {
  const std::vector<double> few = {1, 2, 3};
  for (Family f : kAllFamilies) CHECK_THROWS_AS((void)fit_family(f, few), DataError);
  const std::vector<double> flat(15, 4.0);
  CHECK_THROWS_AS((void)fit_lognormal(flat), NumericError);
  CHECK_THROWS_AS((void)fit_powerlaw(flat), NumericError);
  std::vector<double> bad(kSample);
  bad[3] = 0.0;
  CHECK_THROWS_AS((void)fit_lognormal(bad), DataError);
  bad[3] = std::nan("");
  CHECK_THROWS_AS((void)fit_lognormal(bad), DataError);
}

TEST_CASE("lognormal recovery on continuous samples") {
  Rng rng(derive_seed(11, 1));
  std::vector<double> v(5000);
  for (auto& x : v) x = rng.lognormal(1.0, 1.5);
  const auto p = std::get<LognormalParams>(fit_lognormal(v).params);
  CHECK(p.mu == Approx(1.0).epsilon(0.05));
  CHECK(p.sigma == Approx(1.5).epsilon(0.05));
  const auto lr = likelihood_ratio_test(v, fit_lognormal(v), fit_powerlaw(v));
  CHECK(lr.R > 0.0);
  CHECK(lr.p_value < 0.1);
}

TEST_CASE("param_population summarizes lognormal fits") {
  std::vector<DistributionFit> fits;
  for (int k = 0; k < 4; ++k) {
    DistributionFit f;
    f.params = LognormalParams{1.0 + k, 2.0};
    fits.push_back(f);
  }
  const auto pop = param_population(fits);
  CHECK(pop.mu_mean == Approx(2.5));
  CHECK(pop.mu_sd == Approx(std::sqrt(5.0 / 3.0)));
  CHECK(pop.sigma_sd == 0.0);
  CHECK(std::isnan(pop.sigma_normality_ks));
  CHECK(pop.mu_normality_ks >= 0.0);
  CHECK(pop.mu_normality_ks <= 1.0);
  CHECK_THROWS((void)param_population(std::span<const DistributionFit>(fits.data(), 1)));
}
