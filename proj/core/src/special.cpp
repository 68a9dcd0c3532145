#include "cotagnet/special.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "cotagnet/error.hpp"

namespace cotagnet::special {
namespace {

// Legendre continued fraction, modified Lentz. Converges for x > 0 and any s;
// used for x >= 1 where it needs few terms.
double log_upper_gamma_cf(double s, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) return s * std::log(x) - x + std::log(h);
  }
  throw NumericError("incomplete gamma continued fraction did not converge");
}

}  // namespace

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double log_upper_gamma(double s, double x) {
  if (!(x > 0.0) || !std::isfinite(s)) throw NumericError("log_upper_gamma: requires x > 0");
  if (x >= 1.0) return log_upper_gamma_cf(s, x);
  if (s > 0.0) return std::log(boost::math::tgamma(s, x));

  // s <= 0, x < 1: start from a base in (0, 1] (or 0, via E1) and recurse down with
  // Gamma(b-1, x) = (Gamma(b, x) - x^{b-1} e^{-x}) / (b-1).
  const double k = std::ceil(-s);
  double base = s + k;
  double g;
  if (base == 0.0) {
    g = boost::math::expint(1, x);
  } else {
    g = boost::math::tgamma(base, x);
  }
  for (double b = base; b > s + 0.5; b -= 1.0) {
    g = (g - std::pow(x, b - 1.0) * std::exp(-x)) / (b - 1.0);
  }
  if (!(g > 0.0) || !std::isfinite(g)) throw NumericError("log_upper_gamma: lost precision");
  return std::log(g);
}

}  // namespace cotagnet::special
