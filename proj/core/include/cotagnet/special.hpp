#pragma once

namespace cotagnet::special {

// Standard normal CDF, evaluated through erfc so both tails keep full
// relative precision.
[[nodiscard]] double normal_cdf(double x) noexcept;

// ln of the upper incomplete gamma function Gamma(s, x) = int_x^inf t^{s-1} e^{-t} dt,
// for any real s and x > 0 (s may be zero or negative).
[[nodiscard]] double log_upper_gamma(double s, double x);

}  // namespace cotagnet::special
