#include "avi/rs_dist.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace avi {
namespace {

void require_finite(double x, const char* fn) {
  if (!std::isfinite(x)) {
    throw std::domain_error(std::string(fn) + ": argument must be finite");
  }
}

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// The normal helpers work in long double so that rounding x / sqrt(2) and
// x^2 / 2 does not cost relative accuracy in the tails.
constexpr long double kInvSqrt2L = 0.707106781186547524400844362104849039L;
constexpr long double kInvSqrt2PiL = 0.398942280401432677939946059934381868L;

// Bisection stops once the bracket is narrower than this (absolute, in r).
constexpr double kQuantileTolerance = 1e-12;

}  // namespace

double normal_cdf(double x) {
  require_finite(x, "normal_cdf");
  return static_cast<double>(0.5L * std::erfc(-static_cast<long double>(x) * kInvSqrt2L));
}

double normal_sf(double x) {
  require_finite(x, "normal_sf");
  return static_cast<double>(0.5L * std::erfc(static_cast<long double>(x) * kInvSqrt2L));
}

double normal_pdf(double x) {
  require_finite(x, "normal_pdf");
  const long double xl = x;
  return static_cast<double>(kInvSqrt2PiL * std::exp(-0.5L * xl * xl));
}

double rs_survival(double r) {
  require_finite(r, "rs_survival");
  if (r <= 0.0) return 1.0;
  const double a = std::sqrt(r);
  return 2.0 * (normal_sf(a) + a * normal_pdf(a));
}

double rs_cdf(double r) {
  require_finite(r, "rs_cdf");
  if (r <= 0.0) return 0.0;
  const double a = std::sqrt(r);
  if (r < 2.0) {
    // erf form keeps relative accuracy for small r where Psi ~ r^{3/2}.
    return std::erf(a * kInvSqrt2) - 2.0 * a * normal_pdf(a);
  }
  return 1.0 - rs_survival(r);
}

double rs_density(double r) {
  require_finite(r, "rs_density");
  if (r < 0.0) throw std::domain_error("rs_density: r must be nonnegative");
  return std::sqrt(r) * std::exp(-0.5 * r) * kInvSqrt2Pi;
}

double rs_quantile(double p) {
  require_finite(p, "rs_quantile");
  if (p < 0.0 || p >= 1.0) {
    throw std::domain_error("rs_quantile: p must lie in [0, 1)");
  }
  if (p == 0.0) return 0.0;

  // Above the median the comparison runs on the survival side, where 1 - p
  // is exact (Sterbenz) and Psi's upper tail keeps full relative precision.
  const bool upper = p > 0.5;
  const double tail = 1.0 - p;
  auto below = [&](double r) {
    return upper ? rs_survival(r) > tail : rs_cdf(r) < p;
  };

  double lo = 0.0;
  double hi = 1.0;
  while (below(hi)) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > kQuantileTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (below(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace avi
