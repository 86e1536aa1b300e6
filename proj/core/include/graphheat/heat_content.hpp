#pragma once

#include <cstddef>
#include <vector>

#include "graphheat/graph.hpp"
#include "graphheat/paths.hpp"

namespace graphheat {

enum class Method { PathSum, Spectral, Auto };

struct EvalConfig {
  double tolerance = 1e-10;  // absolute
  std::size_t max_terms = 10'000'000;
  Method method = Method::Auto;
  unsigned threads = 0;  // 0: hardware concurrency
};

// The true quantity lies in [value - error_bound, value + error_bound].
struct HeatValue {
  double value = 0.0;
  double error_bound = 0.0;
  std::size_t terms_used = 0;
  double cutoff_length = 0.0;
  Method method = Method::PathSum;
};

HeatValue heat_content(const MetricGraph& g, double t, const EvalConfig& cfg = {});
// Sum over the components of a graph whose Dirichlet set disconnects it.
HeatValue heat_content(const std::vector<MetricGraph>& parts, double t, const EvalConfig& cfg = {});
// Q_t - |G| + 2 sqrt(t/pi) #V_D, evaluated directly so that tiny values keep relative accuracy.
HeatValue heat_content_correction(const MetricGraph& g, double t, const EvalConfig& cfg = {});

double heat_content_nt(const MetricGraph& g, double t);
// Diagnostic: non-topological part plus the edge-pair expansion over paths with mid length <= L_max.
double heat_content_intermediate(const MetricGraph& g, double t, double L_max);

HeatValue heat_kernel(const MetricGraph& g, GraphPoint x, GraphPoint y, double t,
                      const EvalConfig& cfg = {});

// Integral over x in [0, a], y in [0, b] of exp(-(x + m + y)^2 / 4t).
double edge_pair_mass(double a, double b, double mid_length, double t);
double edge_pair_mass(const MetricGraph& g, Bond exit_bond, Bond entry_bond, double mid_length, double t);

// Integral over x in H, y outside H of p_t(x, y).
HeatValue boundary_flux(const MetricGraph& g, const RegionSpec& region, double t,
                        const EvalConfig& cfg = {});
// sqrt(pi/t) * boundary_flux - #boundary, without forming the difference.
HeatValue perimeter_deviation(const MetricGraph& g, const RegionSpec& region, double t,
                              const EvalConfig& cfg = {});
// Explicit bound on |perimeter_deviation| for small t.
double caccioppoli_remainder_bound(const MetricGraph& g, const RegionSpec& region, double t);

// Throws DomainError outside 0 < t < l_min^2 / (2 log d_max).
double small_time_bound(const MetricGraph& g, double t);

// d/ds Q_t of the graph with edge e lengthened by s, at s = 0.
HeatValue hadamard_derivative(const MetricGraph& g, EdgeId e, double t, const EvalConfig& cfg = {});

}  // namespace graphheat
