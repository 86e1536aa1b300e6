#pragma once

// Reference computations that share no code with the library: quadrature, explicit series,
// and naive recursive path enumeration.

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "graphheat/graph.hpp"

namespace oracle {

inline double quad_erfc(double x) {
  if (x < 0.0) return 2.0 - quad_erfc(-x);
  boost::math::quadrature::exp_sinh<double> integrator;
  const double integral = integrator.integrate([x](double u) { return std::exp(-(x + u) * (x + u)); }, 0.0,
                                               std::numeric_limits<double>::infinity(), 1e-15);
  return 2.0 / std::sqrt(std::numbers::pi) * integral;
}

// H(x) = int_x^inf erfc = (2/sqrt(pi)) int_0^inf v e^{-(x+v)^2} dv, free of cancellation for x >= 0.
inline double quad_H(double x) {
  if (x < 0.0) return std::exp(-x * x) / std::sqrt(std::numbers::pi) - x * quad_erfc(x);
  boost::math::quadrature::exp_sinh<double> integrator;
  const double integral = integrator.integrate([x](double v) { return v * std::exp(-(x + v) * (x + v)); }, 0.0,
                                               std::numeric_limits<double>::infinity(), 1e-15);
  return 2.0 / std::sqrt(std::numbers::pi) * integral;
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-13) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, tol);
}

inline double integrate2(const std::function<double(double, double)>& f, double a0, double a1, double b0,
                         double b1, double tol = 1e-12) {
  return integrate([&](double x) { return integrate([&](double y) { return f(x, y); }, b0, b1, tol); }, a0, a1,
                   tol);
}

// amplitude * sum_k exp(-t (pi (2k+1) rate)^2) / (2k+1)^2, summed until terms vanish.
inline double odd_series(double amplitude, double rate, double t) {
  double sum = 0.0;
  for (int k = 0; k < 1000000; ++k) {
    const double odd = 2 * k + 1;
    const double term = std::exp(-t * std::pow(std::numbers::pi * odd * rate, 2)) / (odd * odd);
    sum += term;
    if (term < 1e-19 * sum) break;
  }
  return amplitude * sum;
}

// Interval [0, l]: Dirichlet at 0 only, or at both ends.
inline double interval_heat(double l, double t, bool both_dirichlet) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return both_dirichlet ? odd_series(8 * l / pi2, 1 / l, t) : odd_series(8 * l / pi2, 1 / (2 * l), t);
}

// Equilateral n-star, every outer vertex Dirichlet.
inline double star_heat(int n, double l, double t) {
  return odd_series(8 * n * l / (std::numbers::pi * std::numbers::pi), 1 / (2 * l), t);
}

// d/dl of interval_heat(l, t, false), differentiated term by term.
inline double interval_heat_dl(double l, double t) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  double sum = 0.0;
  for (int k = 0; k < 1000000; ++k) {
    const double odd = 2 * k + 1;
    const double mu = std::pow(std::numbers::pi * odd / (2 * l), 2);
    const double term = std::exp(-t * mu) / (odd * odd) * (1.0 + 2.0 * t * mu);
    sum += term;
    if (term < 1e-19 * sum) break;
  }
  return 8.0 / pi2 * sum;
}

// Heat kernel of [0, l] with Dirichlet ends, by the method of images.
inline double images_kernel(double l, double x, double y, double t) {
  double sum = 0.0;
  const double pref = 1.0 / std::sqrt(4 * std::numbers::pi * t);
  for (int n = -200; n <= 200; ++n) {
    const double shift = 2.0 * n * l;
    sum += std::exp(-std::pow(x - y + shift, 2) / (4 * t)) - std::exp(-std::pow(x + y + shift, 2) / (4 * t));
  }
  return pref * sum;
}

struct RawPath {
  graphheat::VertexId start;
  std::vector<std::pair<graphheat::EdgeId, int>> steps;  // (edge, +1 forward / -1 backward)
  double length;
  double alpha;
};

// Every bond sequence from `starts` with length <= L_max, by plain recursion over incidence lists.
inline std::vector<RawPath> brute_force_paths(const graphheat::MetricGraph& g,
                                              const std::vector<graphheat::VertexId>& starts, double L_max) {
  using namespace graphheat;
  std::vector<RawPath> out;
  std::function<void(RawPath&, VertexId)> grow = [&](RawPath& p, VertexId at) {
    for (const Edge& e : g.edges()) {
      for (int dir : {+1, -1}) {
        const VertexId from = dir > 0 ? e.u : e.v;
        const VertexId to = dir > 0 ? e.v : e.u;
        if (from != at) continue;
        if (p.length + e.length > L_max + 1e-12) continue;
        double factor = 1.0;
        if (!p.steps.empty()) {
          const auto [prev_edge, prev_dir] = p.steps.back();
          if (g.kind(at) == VertexKind::Dirichlet) {
            factor = -1.0;
          } else {
            std::size_t deg = 0;
            for (const Edge& f : g.edges()) deg += (f.u == at) + (f.v == at);
            const bool back = prev_edge == e.id && prev_dir == -dir;
            factor = 2.0 / static_cast<double>(deg) - (back ? 1.0 : 0.0);
          }
        }
        RawPath q = p;
        q.steps.emplace_back(e.id, dir);
        q.length += e.length;
        q.alpha *= factor;
        out.push_back(q);
        grow(q, to);
      }
    }
  };
  for (VertexId s : starts) {
    RawPath p{s, {}, 0.0, 1.0};
    grow(p, s);
  }
  return out;
}

inline graphheat::VertexId raw_end(const graphheat::MetricGraph& g, const RawPath& p) {
  const auto [e, dir] = p.steps.back();
  return dir > 0 ? g.edge(e).v : g.edge(e).u;
}

// Lasso with pendant l1 (Dirichlet end) and loop l2: total coefficient of the Dirichlet-to-Dirichlet
// paths with a traversals of the pendant and b of the loop, by dynamic programming over those counts.
inline std::map<std::pair<int, int>, double> lasso_count_coefficients(int max_a, int max_b) {
  // States: 0 arriving at N along the pendant, 1 arriving at D, 2 arriving at N along the loop.
  // Loop arrivals keep their orientation in the count because the two loop bonds are distinct.
  std::map<std::tuple<int, int, int>, double> layer{{{0, 1, 0}, 1.0}};
  std::map<std::pair<int, int>, double> result;
  const double t = 2.0 / 3.0, r = -1.0 / 3.0;
  for (int step = 0; step < max_a + max_b + 2; ++step) {
    std::map<std::tuple<int, int, int>, double> next;
    for (const auto& [key, c] : layer) {
      const auto [state, a, b] = key;
      if (state == 1) {
        result[{a, b}] += c;
        if (a + 1 <= max_a) next[{0, a + 1, b}] += -c;
      } else if (state == 0) {
        if (a + 1 <= max_a) next[{1, a + 1, b}] += r * c;
        if (b + 1 <= max_b) next[{2, a, b + 1}] += 2.0 * t * c;  // either loop orientation
      } else {
        if (a + 1 <= max_a) next[{1, a + 1, b}] += t * c;
        // Same orientation continues (transfer), opposite reverses (reflection).
        if (b + 1 <= max_b) next[{2, a, b + 1}] += (t + r) * c;
      }
    }
    layer.swap(next);
  }
  return result;
}

// A reindexed double-sum formula for the lasso, transcribed literally.
inline double lasso_reindexed_sum(double l1, double l2, double t, int M, double (*H)(double)) {
  double P = 0.0;
  const double s = 2.0 * std::sqrt(t);
  for (int m = 0; m < M; ++m)
    for (int n = 0; n < M; ++n)
      for (int k = 0; k < M; ++k) {
        if (n + k > m + 1) continue;
        for (int l = 0; l < M; ++l)
          for (int j = 0; j < M; ++j) {
            const double x = ((m + n + l + 1) * l1 + (k + j) * l2) / s;
            if (x > 15.0) continue;
            P += std::pow(-1.0, m) * std::pow(-1.0 / 3.0, n + l) * std::pow(2.0 / 3.0, k + j) * H(x);
          }
      }
  return l1 + l2 - s / std::sqrt(std::numbers::pi) + 4.0 * std::sqrt(t) * 2.0 * P;
}

}  // namespace oracle
