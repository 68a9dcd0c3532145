#include "cotagnet/distfit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "cotagnet/special.hpp"

namespace cotagnet {
namespace {

constexpr double kParamTol = 1e-8;
constexpr int kMaxIterations = 10000;
constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_sample(std::span<const double> values) {
  if (values.size() < kMinFitSamples) {
    throw DataError("distribution fit needs at least " + std::to_string(kMinFitSamples) +
                    " values, got " + std::to_string(values.size()));
  }
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DataError("distribution fit: values must be positive");
  }
}

double sample_min(std::span<const double> values) {
  return *std::min_element(values.begin(), values.end());
}

double total_loglik(const DistributionParams& p, double x_min, std::span<const double> values) {
  double sum = 0.0;
  for (double x : values) sum += log_pdf(p, x_min, x);
  return sum;
}

double lognormal_log_pdf(const LognormalParams& p, double x) {
  const double z = (std::log(x) - p.mu) / p.sigma;
  return -std::log(x * p.sigma) - 0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * z * z;
}

double lognormal_cdf(const LognormalParams& p, double x) {
  if (x <= 0.0) return 0.0;
  return special::normal_cdf((std::log(x) - p.mu) / p.sigma);
}

double lognormal_sf(const LognormalParams& p, double x) {
  if (x <= 0.0) return 1.0;
  return special::normal_cdf(-(std::log(x) - p.mu) / p.sigma);
}

// Minimizes f over R^2 with the Nelder-Mead simplex. Stops when every vertex
// lies within kParamTol of the best one (max-norm).
std::array<double, 2> nelder_mead(const std::function<double(const std::array<double, 2>&)>& f,
                                  std::array<double, 2> x0, std::array<double, 2> step) {
  using Point = std::array<double, 2>;
  std::array<Point, 3> s{x0, x0, x0};
  s[1][0] += step[0];
  s[2][1] += step[1];
  std::array<double, 3> fs{f(s[0]), f(s[1]), f(s[2])};

  auto order = [&] {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    std::array<Point, 3> ns{s[idx[0]], s[idx[1]], s[idx[2]]};
    std::array<double, 3> nf{fs[idx[0]], fs[idx[1]], fs[idx[2]]};
    s = ns;
    fs = nf;
  };
  auto lerp = [](const Point& a, const Point& b, double t) {
    return Point{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
  };

  for (int iter = 0; iter < kMaxIterations; ++iter) {
    order();
    double size = 0.0;
    for (int i = 1; i < 3; ++i) {
      for (int k = 0; k < 2; ++k) size = std::max(size, std::fabs(s[i][k] - s[0][k]));
    }
    if (size < kParamTol) return s[0];

    const Point centroid{(s[0][0] + s[1][0]) / 2.0, (s[0][1] + s[1][1]) / 2.0};
    const Point xr = lerp(centroid, s[2], -1.0);
    const double fr = f(xr);
    if (fr < fs[0]) {
      const Point xe = lerp(centroid, s[2], -2.0);
      const double fe = f(xe);
      if (fe < fr) {
        s[2] = xe;
        fs[2] = fe;
      } else {
        s[2] = xr;
        fs[2] = fr;
      }
      continue;
    }
    if (fr < fs[1]) {
      s[2] = xr;
      fs[2] = fr;
      continue;
    }
    const bool outside = fr < fs[2];
    const Point xc = outside ? lerp(centroid, xr, 0.5) : lerp(centroid, s[2], 0.5);
    const double fc = f(xc);
    if (fc < (outside ? fr : fs[2])) {
      s[2] = xc;
      fs[2] = fc;
      continue;
    }
    for (int i = 1; i < 3; ++i) {
      s[i] = lerp(s[0], s[i], 0.5);
      fs[i] = f(s[i]);
    }
  }
  order();
  throw ConvergenceError("Nelder-Mead did not converge in " + std::to_string(kMaxIterations) +
                             " iterations",
                         {s[0][0], s[0][1]});
}

// Golden-section minimization of a unimodal f on [lo, hi].
double golden_section(const std::function<double(double)>& f, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    if (b - a < kParamTol) return 0.5 * (a + b);
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  throw ConvergenceError("golden-section search did not converge", {0.5 * (a + b)});
}

DistributionFit finish(DistributionParams params, double x_min, std::span<const double> values) {
  DistributionFit fit;
  fit.params = params;
  fit.x_min = x_min;
  fit.n = values.size();
  fit.loglik = total_loglik(params, x_min, values);
  if (!std::isfinite(fit.loglik)) throw NumericError("non-finite log-likelihood");
  fit.ks_statistic = ks_statistic(values, fit);
  return fit;
}

}  // namespace

std::string_view family_name(Family f) noexcept {
  switch (f) {
    case Family::kLognormal:
      return "lognormal";
    case Family::kPowerLaw:
      return "powerlaw";
    case Family::kTruncatedPowerLaw:
      return "truncated_powerlaw";
    case Family::kStretchedExponential:
      return "stretched_exponential";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (Family f : kAllFamilies) {
    if (family_name(f) == name) return f;
  }
  throw UsageError("unknown distribution family '" + std::string(name) + "'");
}

double log_pdf(const DistributionParams& params, double x_min, double x) {
  return std::visit(
      Overloaded{
          [&](const LognormalParams& p) { return lognormal_log_pdf(p, x); },
          [&](const PowerLawParams& p) {
            return std::log(p.alpha - 1.0) - std::log(x_min) - p.alpha * std::log(x / x_min);
          },
          [&](const TruncatedPowerLawParams& p) {
            return (1.0 - p.alpha) * std::log(p.lambda) - p.alpha * std::log(x) - p.lambda * x -
                   special::log_upper_gamma(1.0 - p.alpha, p.lambda * x_min);
          },
          [&](const StretchedExponentialParams& p) {
            return std::log(p.beta) + p.beta * std::log(p.lambda) + (p.beta - 1.0) * std::log(x) -
                   std::pow(p.lambda * x, p.beta) + std::pow(p.lambda * x_min, p.beta);
          },
      },
      params);
}

double conditional_cdf(const DistributionParams& params, double x_min, double x) {
  if (x <= x_min) return 0.0;
  const double value = std::visit(
      Overloaded{
          [&](const LognormalParams& p) {
            const double tail = lognormal_sf(p, x_min);
            if (!(tail > 0.0)) return 1.0;
            return (lognormal_cdf(p, x) - lognormal_cdf(p, x_min)) / tail;
          },
          [&](const PowerLawParams& p) { return 1.0 - std::pow(x / x_min, 1.0 - p.alpha); },
          [&](const TruncatedPowerLawParams& p) {
            const double s = 1.0 - p.alpha;
            return 1.0 - std::exp(special::log_upper_gamma(s, p.lambda * x) -
                                  special::log_upper_gamma(s, p.lambda * x_min));
          },
          [&](const StretchedExponentialParams& p) {
            return -std::expm1(std::pow(p.lambda * x_min, p.beta) - std::pow(p.lambda * x, p.beta));
          },
      },
      params);
  return std::clamp(value, 0.0, 1.0);
}

DistributionFit fit_lognormal(std::span<const double> values) {
  check_sample(values);
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += std::log(v);
  mean /= n;
  double ss = 0.0;
  for (double v : values) {
    const double d = std::log(v) - mean;
    ss += d * d;
  }
  const double sigma = std::sqrt(ss / n);
  if (!(sigma > 0.0)) throw NumericError("degenerate sample: all values identical");
  return finish(LognormalParams{mean, sigma}, sample_min(values), values);
}

DistributionFit fit_powerlaw(std::span<const double> values) {
  check_sample(values);
  const double x_min = sample_min(values);
  double sum_log = 0.0;
  for (double v : values) sum_log += std::log(v / x_min);
  if (!(sum_log > 0.0)) throw NumericError("degenerate sample: all values identical");
  const double alpha = 1.0 + static_cast<double>(values.size()) / sum_log;
  return finish(PowerLawParams{alpha}, x_min, values);
}

DistributionFit fit_truncated_powerlaw(std::span<const double> values) {
  check_sample(values);
  const double x_min = sample_min(values);
  const double x_max = *std::max_element(values.begin(), values.end());
  if (x_max == x_min) throw NumericError("degenerate sample: all values identical");
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                      static_cast<double>(values.size());

  const double alpha0 = std::get<PowerLawParams>(fit_powerlaw(values).params).alpha;
  // Box on (alpha, ln lambda); the lower lambda edge makes the cutoff
  // negligible over the whole sample.
  constexpr double kAlphaLo = -10.0;
  constexpr double kAlphaHi = 20.0;
  const double log_lambda_lo = std::log(1e-9 / x_max);
  const double log_lambda_hi = std::log(50.0 / x_min);

  auto objective = [&](const std::array<double, 2>& u) {
    if (u[0] < kAlphaLo || u[0] > kAlphaHi || u[1] < log_lambda_lo || u[1] > log_lambda_hi) {
      return kInf;
    }
    const TruncatedPowerLawParams p{u[0], std::exp(u[1])};
    double sum = 0.0;
    try {
      sum = total_loglik(p, x_min, values);
    } catch (const NumericError&) {
      return kInf;
    }
    return std::isfinite(sum) ? -sum : kInf;
  };
  const double log_lambda0 = std::clamp(std::log(1.0 / mean), log_lambda_lo, log_lambda_hi);
  std::array<double, 2> best;
  try {
    best = nelder_mead(objective, {std::clamp(alpha0, kAlphaLo, kAlphaHi), log_lambda0},
                       {0.1, 0.5});
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(std::string("truncated power law: ") + e.what(),
                           {e.best()[0], std::exp(e.best()[1])});
  }
  return finish(TruncatedPowerLawParams{best[0], std::exp(best[1])}, x_min, values);
}

DistributionFit fit_stretched_exponential(std::span<const double> values) {
  check_sample(values);
  const double x_min = sample_min(values);
  const double n = static_cast<double>(values.size());
  // Rescale so powers stay representable; lambda is scaled back at the end.
  const double scale = *std::max_element(values.begin(), values.end());
  if (scale == x_min) throw NumericError("degenerate sample: all values identical");
  std::vector<double> y(values.begin(), values.end());
  for (double& v : y) v /= scale;
  const double y_min = x_min / scale;
  double sum_log_y = 0.0;
  for (double v : y) sum_log_y += std::log(v);

  // For fixed beta the likelihood is maximized by lambda^beta = n / sum(y^beta - y_min^beta).
  auto profile = [&](double beta) {
    double s = 0.0;
    const double floor = std::pow(y_min, beta);
    for (double v : y) s += std::pow(v, beta) - floor;
    const double lambda_beta = n / s;
    return std::pair{lambda_beta, n * std::log(beta) + n * std::log(lambda_beta) +
                                      (beta - 1.0) * sum_log_y - n};
  };
  auto objective = [&](double log_beta) {
    const double ll = profile(std::exp(log_beta)).second;
    return std::isfinite(ll) ? -ll : kInf;
  };
  const double log_beta = golden_section(objective, std::log(1e-3), std::log(20.0));
  const double beta = std::exp(log_beta);
  const double lambda = std::pow(profile(beta).first, 1.0 / beta) / scale;
  return finish(StretchedExponentialParams{lambda, beta}, x_min, values);
}

DistributionFit fit_family(Family family, std::span<const double> values) {
  switch (family) {
    case Family::kLognormal:
      return fit_lognormal(values);
    case Family::kPowerLaw:
      return fit_powerlaw(values);
    case Family::kTruncatedPowerLaw:
      return fit_truncated_powerlaw(values);
    case Family::kStretchedExponential:
      return fit_stretched_exponential(values);
  }
  throw UsageError("unknown family");
}

DistributionFit evaluate_fit(const DistributionParams& params, double x_min,
                             std::span<const double> values) {
  if (values.empty()) throw DataError("evaluate_fit: empty sample");
  return finish(params, x_min, values);
}

double ks_statistic(std::span<const double> values, const DistributionFit& fit) {
  if (values.empty()) return 0.0;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double model = conditional_cdf(fit.params, fit.x_min, sorted[i]);
    const double below = static_cast<double>(i) / n;  // empirical CDF just left of the value
    const double at = static_cast<double>(j) / n;
    d = std::max({d, std::fabs(model - below), std::fabs(model - at)});
    i = j;
  }
  return std::clamp(d, 0.0, 1.0);
}

LikelihoodRatioResult likelihood_ratio_test(std::span<const double> values,
                                            const DistributionFit& null_fit,
                                            const DistributionFit& alt_fit) {
  if (values.size() < 2) throw DataError("likelihood ratio test needs at least 2 values");
  if (null_fit.x_min != alt_fit.x_min) {
    throw DataError("likelihood ratio test: fits use different x_min");
  }
  std::vector<double> ratio(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    ratio[i] = log_pdf(null_fit.params, null_fit.x_min, values[i]) -
               log_pdf(alt_fit.params, alt_fit.x_min, values[i]);
  }
  const double n = static_cast<double>(values.size());
  const double sum = std::accumulate(ratio.begin(), ratio.end(), 0.0);
  const double mean = sum / n;
  double ss = 0.0;
  for (double r : ratio) ss += (r - mean) * (r - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  if (!(sd > 0.0)) throw NumericError("indistinguishable models: per-point likelihoods identical");

  LikelihoodRatioResult out;
  out.log_ratio = sum;
  out.R = sum / (sd * std::sqrt(n));
  out.p_value = std::clamp(std::erfc(std::fabs(out.R) / std::numbers::sqrt2), 0.0, 1.0);
  return out;
}

ParamPopulation param_population(std::span<const DistributionFit> fits) {
  if (fits.size() < 2) throw DataError("param_population needs at least 2 fits");
  ParamPopulation pop;
  for (const auto& fit : fits) {
    const auto* p = std::get_if<LognormalParams>(&fit.params);
    if (p == nullptr) throw DataError("param_population accepts lognormal fits only");
    pop.mus.push_back(p->mu);
    pop.sigmas.push_back(p->sigma);
  }
  auto mean_sd = [](const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::pair{mean, std::sqrt(ss / (n - 1.0))};
  };
  auto normality = [](std::vector<double> v, double mean, double sd) {
    if (!(sd > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double f = special::normal_cdf((v[i] - mean) / sd);
      d = std::max({d, std::fabs(f - static_cast<double>(i) / n),
                    std::fabs(f - static_cast<double>(i + 1) / n)});
    }
    return d;
  };
  std::tie(pop.mu_mean, pop.mu_sd) = mean_sd(pop.mus);
  std::tie(pop.sigma_mean, pop.sigma_sd) = mean_sd(pop.sigmas);
  pop.mu_normality_ks = normality(pop.mus, pop.mu_mean, pop.mu_sd);
  pop.sigma_normality_ks = normality(pop.sigmas, pop.sigma_mean, pop.sigma_sd);
  return pop;
}

}  // namespace cotagnet
