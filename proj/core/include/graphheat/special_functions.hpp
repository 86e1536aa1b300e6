#pragma once

#include <cstddef>

namespace graphheat {

// Absolute error target for a truncated series.
struct TailBudget {
  double target;
  explicit TailBudget(double target);
};

double erfc(double x);
// e^{x^2} erfc(x), finite for all x >= -26.
double erfcx(double x);
// H(x) = e^{-x^2}/sqrt(pi) - x erfc(x); positive, decreasing, convex, H' = -erfc.
double H(double x);

// Certified bound on 4 sqrt(t) * sum |alpha(p)| H(l(p) / 2 sqrt(t)) over Dirichlet-to-Dirichlet
// paths longer than L, assuming at most count_factor * d_max^(n-1) such paths with n bonds.
// Infinite when the term ratio at n0 = ceil(L / l_min) is not below one.
double path_tail_bound(std::size_t d_max, double l_min, double t, double L,
                       double count_factor = 2.0);

}  // namespace graphheat
