#include "graphheat/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "graphheat/errors.hpp"

namespace graphheat {

namespace {

constexpr double kInvSqrtPi = std::numbers::inv_sqrtpi;
// Below this the direct formulas lose at most a few ulps to cancellation.
constexpr double kFractionThreshold = 3.0;

void reject_nan(double x) {
  if (std::isnan(x)) throw DomainError("NaN argument");
}

// x + a_1/(x + a_2/(x + ...)) with a_j = (j + shift)/2, by the modified Lentz method.
double laplace_fraction(double x, int shift) {
  const double tiny = 1e-300;
  double f = x;
  double c = f;
  double d = 0.0;
  for (int j = 1; j < 10000; ++j) {
    const double a = 0.5 * (j + shift);
    d = x + a * d;
    if (d == 0.0) d = tiny;
    c = x + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return f;
}

}  // namespace

TailBudget::TailBudget(double t) : target(t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("tail budget must be positive and finite");
}

double erfc(double x) {
  reject_nan(x);
  return std::erfc(x);
}

double erfcx(double x) {
  reject_nan(x);
  if (x < kFractionThreshold) {
    if (x < 0.0) return 2.0 * std::exp(x * x) - erfcx(-x);
    return std::exp(x * x) * std::erfc(x);
  }
  return kInvSqrtPi / laplace_fraction(x, 0);
}

double H(double x) {
  reject_nan(x);
  if (x < kFractionThreshold) return kInvSqrtPi * std::exp(-x * x) - x * std::erfc(x);
  // 1 - x sqrt(pi) erfcx(x) rewritten through the fraction tail, free of cancellation.
  const double tail = laplace_fraction(x, 1);
  return kInvSqrtPi * std::exp(-x * x) * 0.5 / (x * tail + 0.5);
}

double path_tail_bound(std::size_t d_max, double l_min, double t, double L, double count_factor) {
  if (!(t > 0.0) || !(l_min > 0.0) || !(L >= l_min) || d_max == 0)
    throw DomainError("path_tail_bound requires t > 0, l_min > 0, L >= l_min, d_max >= 1");
  const double d = static_cast<double>(d_max);
  const double s = 2.0 * std::sqrt(t);
  const auto n0 = static_cast<long>(std::ceil(L / l_min));

  // Paths with fewer than n0 bonds can still exceed L; their length is only bounded by L.
  double sum = 0.0;
  double count = count_factor;
  for (long n = 1; n < n0; ++n) {
    sum += count * H(L / s);
    count *= d;
  }

  auto term = [&](long n) {
    return count_factor * std::pow(d, static_cast<double>(n - 1)) * H(std::max(L, n * l_min) / s);
  };
  auto ratio = [&](long n) {
    const double hn = H(std::max(L, n * l_min) / s);
    if (hn == 0.0) return 0.0;
    return d * H(std::max(L, (n + 1) * l_min) / s) / hn;
  };
  if (ratio(n0) >= 1.0) return std::numeric_limits<double>::infinity();

  // H is log-concave, so the term ratio only decreases after n0.
  for (long n = n0;; ++n) {
    const double tn = term(n);
    const double r = ratio(n);
    sum += tn;
    if (tn == 0.0) break;
    if (tn * r / (1.0 - r) <= 1e-17 * sum) {
      sum += tn * r / (1.0 - r);
      break;
    }
  }
  return 2.0 * s * sum;
}

}  // namespace graphheat
