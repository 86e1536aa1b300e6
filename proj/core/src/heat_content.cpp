#include "graphheat/heat_content.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "graphheat/errors.hpp"
#include "graphheat/special_functions.hpp"
#include "graphheat/spectral.hpp"
#include "walk.hpp"

namespace graphheat {

namespace {

using detail::BondTable;
using detail::Walk;
using detail::WalkRun;

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSqrtPi = 1.0 / std::numbers::inv_sqrtpi;
// Extra ulps charged per H or erfc evaluation; covers the cancellation below the fraction switch.
constexpr std::uint32_t kSpecialUlps = 48;

void require_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("t must be positive and finite");
}

void require_config(const EvalConfig& cfg) {
  if (!(cfg.tolerance > 0.0)) throw DomainError("tolerance must be positive");
}

// H(m) - H(m + a) - H(m + b) + H(m + a + b), all arguments divided by s.
double four_term(double m, double a, double b, double s) {
  return H(m / s) - H((m + a) / s) - H((m + b) / s) + H((m + a + b) / s);
}

struct Certified {
  WalkRun run;
  double limit;
  double tail;
};

// Raises the cutoff until the frontier bound meets `target`.
template <class Visit, class Mark, class Tail>
Certified certify(const BondTable& T, const std::vector<Walk>& roots, double t, double target,
                  double L0, Visit visit, Mark mark, Tail tail, const EvalConfig& cfg) {
  double L = std::max(L0, T.l_min);
  for (;;) {
    WalkRun run = detail::run_walks(T, roots, L, visit, mark, cfg.max_terms, cfg.threads);
    const double bound = tail(run.frontier);
    if (bound <= target) return {std::move(run), L, bound};
    double grow = L;
    if (std::isfinite(bound)) grow = std::sqrt(L * L + 4.0 * t * std::log(2.0 * bound / target)) - L;
    L += std::max(grow, 0.5 * T.l_min);
  }
}

template <class Phi>
double frontier_tail(const detail::Frontier& f, const BondTable& T, int shift, Phi phi) {
  double sum = 0.0;
  for (std::size_t i = 0; i < f.bins(); ++i)
    if (f.mass(i) > 0.0)
      sum += f.mass(i) * detail::tail_series(T.rho, T.l_min, f.floor(i), shift, false, phi);
  return sum;
}

std::vector<Walk> dirichlet_roots(const MetricGraph& g, const BondTable& T) {
  std::vector<Walk> roots;
  for (VertexId v : g.dirichlet_vertices())
    for (std::uint32_t b : T.leaving[v]) roots.push_back(Walk{b, 1, T.length[b], 1.0, 0.0, 0.0});
  return roots;
}

// S = sum over Dirichlet-to-Dirichlet paths of alpha H(l / 2 sqrt t), to absolute accuracy target.
struct DirichletSum {
  double value;
  double tail;
  double rounding;
  std::size_t terms;
  double cutoff;
};

DirichletSum dirichlet_sum(const MetricGraph& g, double t, double target, const EvalConfig& cfg) {
  const BondTable T(g);
  const double s = 2.0 * std::sqrt(t);
  const auto roots = dirichlet_roots(g, T);
  auto phi = [s](double x) { return H(x / s); };
  const double count = std::max<double>(2.0, static_cast<double>(g.dirichlet_count()));
  const double L0 = detail::solve_decreasing([&](double L) { return count * phi(L); }, T.l_min, target);
  auto visit = [&](const Walk& w, detail::Accumulator& acc) {
    if (T.head_dirichlet[w.bond]) acc.add(w.alpha * phi(w.length), w.bonds + kSpecialUlps);
  };
  auto tail = [&](const detail::Frontier& f) { return frontier_tail(f, T, 0, phi); };
  Certified c = certify(T, roots, t, target, L0, visit, [](std::uint32_t) { return false; }, tail, cfg);
  return {c.run.acc.value(), c.tail, c.run.acc.rounding_bound(), c.run.visited, c.limit};
}

// Second-order extrapolation from two nested meshes; models are cached because sweeps reuse them.
HeatValue spectral_heat_content(const MetricGraph& g, double t, const EvalConfig& cfg) {
  constexpr double kCoarseNodes = 700.0;
  std::vector<std::size_t> coarse, fine;
  const double h = std::min(g.volume() / kCoarseNodes, 0.249 * g.min_length());
  std::size_t nodes = 0;
  for (const Edge& e : g.edges()) {
    const auto n = static_cast<std::size_t>(std::max(4.0, std::ceil(e.length / h)));
    coarse.push_back(n);
    fine.push_back(2 * n);
    nodes += 2 * n;
  }
  if (nodes > SpectralModel::kDenseLimit)
    throw BudgetExceeded("graph too fine-grained for the spectral fallback");

  static std::mutex lock;
  static std::map<std::string, std::shared_ptr<const SpectralModel>> cache;
  auto model = [&](const std::vector<std::size_t>& segments) {
    std::ostringstream key;
    key.precision(17);
    for (VertexKind k : g.kinds()) key << (k == VertexKind::Dirichlet ? 'D' : 'S');
    for (const Edge& e : g.edges()) key << ';' << e.u << ',' << e.v << ',' << e.length;
    for (std::size_t n : segments) key << '/' << n;
    std::lock_guard guard(lock);
    auto& slot = cache[key.str()];
    if (!slot) {
      if (cache.size() > 8) {
        cache.clear();
        return std::make_shared<const SpectralModel>(build(g, segments));
      }
      slot = std::make_shared<const SpectralModel>(build(g, segments));
    }
    return slot;
  };
  const double q1 = eigen_heat_content(*model(coarse), t);
  const double q2 = eigen_heat_content(*model(fine), t);
  HeatValue out;
  out.value = (4.0 * q2 - q1) / 3.0;
  out.error_bound = std::abs(q1 - q2) / 3.0 + 64.0 * kEps * g.volume();
  out.terms_used = nodes;
  out.method = Method::Spectral;
  if (out.error_bound > cfg.tolerance)
    throw BudgetExceeded("neither the path sum nor the spectral oracle meets the tolerance");
  return out;
}

HeatValue path_heat_content(const MetricGraph& g, double t, const EvalConfig& cfg) {
  const double root_t = std::sqrt(t);
  const double target = 0.9 * cfg.tolerance / (4.0 * root_t);
  const DirichletSum S = dirichlet_sum(g, t, target, cfg);
  const double drift = 2.0 * root_t / kSqrtPi * static_cast<double>(g.dirichlet_count());
  const double correction = 4.0 * root_t * S.value;
  HeatValue out;
  out.value = (g.volume() - drift) + correction;
  out.error_bound = 4.0 * root_t * (S.tail + S.rounding) +
                    4.0 * kEps * (g.volume() + drift + std::abs(correction));
  out.terms_used = S.terms;
  out.cutoff_length = S.cutoff;
  out.method = Method::PathSum;
  return out;
}

}  // namespace

HeatValue heat_content(const MetricGraph& g, double t, const EvalConfig& cfg) {
  require_time(t);
  require_config(cfg);
  g.require_valid();
  if (cfg.method == Method::Spectral) return spectral_heat_content(g, t, cfg);
  try {
    return path_heat_content(g, t, cfg);
  } catch (const detail::BudgetHit&) {
    if (cfg.method == Method::Auto) return spectral_heat_content(g, t, cfg);
    throw BudgetExceeded("path sum needs more than max_terms walks at this t");
  }
}

HeatValue heat_content(const std::vector<MetricGraph>& parts, double t, const EvalConfig& cfg) {
  if (parts.empty()) throw DomainError("empty component list");
  EvalConfig each = cfg;
  each.tolerance = cfg.tolerance / static_cast<double>(parts.size());
  HeatValue total;
  for (const MetricGraph& g : parts) {
    const HeatValue v = heat_content(g, t, each);
    total.value += v.value;
    total.error_bound += v.error_bound;
    total.terms_used += v.terms_used;
    total.cutoff_length = std::max(total.cutoff_length, v.cutoff_length);
    total.method = v.method;
  }
  return total;
}

HeatValue heat_content_correction(const MetricGraph& g, double t, const EvalConfig& cfg) {
  require_time(t);
  require_config(cfg);
  g.require_valid();
  const double root_t = std::sqrt(t);
  try {
    const DirichletSum S = dirichlet_sum(g, t, 0.9 * cfg.tolerance / (4.0 * root_t), cfg);
    return {4.0 * root_t * S.value, 4.0 * root_t * (S.tail + S.rounding), S.terms, S.cutoff,
            Method::PathSum};
  } catch (const detail::BudgetHit&) {
    throw BudgetExceeded("path sum needs more than max_terms walks at this t");
  }
}

double heat_content_nt(const MetricGraph& g, double t) {
  require_time(t);
  const double s = 2.0 * std::sqrt(t);
  double sum = 0.0;
  for (const Edge& e : g.edges()) sum += H(e.length / s);
  return g.volume() - s / kSqrtPi * static_cast<double>(g.edge_count()) + s * sum;
}

double heat_content_intermediate(const MetricGraph& g, double t, double L_max) {
  require_time(t);
  g.require_valid();
  const BondTable T(g);
  const double s = 2.0 * std::sqrt(t);
  std::vector<Walk> roots;
  for (std::uint32_t b = 0; b < T.size(); ++b) roots.push_back(Walk{b, 1, 0.0, 1.0, 0.0, T.length[b]});
  auto visit = [&](const Walk& w, detail::Accumulator& acc) {
    for (std::uint32_t k = T.offset[w.bond]; k < T.offset[w.bond + 1]; ++k)
      acc.add(w.alpha * T.beta[k] * four_term(w.length, w.aux, T.length[T.next[k]], s), w.bonds);
  };
  const WalkRun run = detail::run_walks(T, roots, L_max, visit, [](std::uint32_t) { return false; },
                                        std::numeric_limits<std::size_t>::max(), 1);
  return heat_content_nt(g, t) + 0.5 * s * run.acc.value();
}

HeatValue heat_kernel(const MetricGraph& g, GraphPoint x, GraphPoint y, double t, const EvalConfig& cfg) {
  require_time(t);
  require_config(cfg);
  g.require_valid();
  for (const GraphPoint& p : {x, y}) {
    const Edge& e = g.edge(p.edge);
    if (!(p.offset >= 0.0 && p.offset <= e.length)) throw DomainError("point offset outside its edge");
    if ((p.offset == 0.0 && g.is_dirichlet(e.u)) || (p.offset == e.length && g.is_dirichlet(e.v)))
      throw DomainError("heat kernel points must not be Dirichlet vertices");
  }
  const BondTable T(g);
  const double pref = 1.0 / std::sqrt(4.0 * std::numbers::pi * t);
  auto gauss = [t](double l) { return std::exp(-l * l / (4.0 * t)); };
  const double y_len = g.edge(y.edge).length;

  const auto fwd = static_cast<std::uint32_t>(2 * x.edge);
  const std::vector<Walk> roots{Walk{fwd, 1, g.edge(x.edge).length - x.offset, 1.0, 0.0, 0.0},
                                Walk{fwd + 1, 1, x.offset, 1.0, 0.0, 0.0}};
  auto visit = [&](const Walk& w, detail::Accumulator& acc) {
    for (std::uint32_t k = T.offset[w.bond]; k < T.offset[w.bond + 1]; ++k) {
      const std::uint32_t c = T.next[k];
      if (BondTable::edge_of(c) != y.edge) continue;
      const double entry = (c % 2 == 0) ? y.offset : y_len - y.offset;
      acc.add(pref * w.alpha * T.beta[k] * gauss(w.length + entry), w.bonds + 8);
    }
  };
  auto phi = [&](double l) { return gauss(l); };
  auto tail = [&](const detail::Frontier& f) { return pref * frontier_tail(f, T, 1, phi); };
  const double target = 0.9 * cfg.tolerance;
  const double L0 = detail::solve_decreasing([&](double L) { return 2.0 * pref * T.rho * gauss(L); },
                                             T.l_min, target);
  try {
    Certified c = certify(T, roots, t, target, L0, visit, [](std::uint32_t) { return false; }, tail, cfg);
    detail::Accumulator& acc = c.run.acc;
    if (x.edge == y.edge) acc.add(pref * gauss(x.offset - y.offset), 8);
    return {acc.value(), c.tail + acc.rounding_bound(), c.run.visited, c.limit, Method::PathSum};
  } catch (const detail::BudgetHit&) {
    throw BudgetExceeded("heat kernel path sum needs more than max_terms walks");
  }
}

double edge_pair_mass(double a, double b, double mid_length, double t) {
  require_time(t);
  if (!(a >= 0.0 && b >= 0.0 && mid_length >= 0.0)) throw DomainError("lengths must be non-negative");
  return 2.0 * kSqrtPi * t * four_term(mid_length, a, b, 2.0 * std::sqrt(t));
}

double edge_pair_mass(const MetricGraph& g, Bond exit_bond, Bond entry_bond, double mid_length, double t) {
  return edge_pair_mass(g.edge(exit_bond.edge).length, g.edge(entry_bond.edge).length, mid_length, t);
}

namespace {

struct FluxParts {
  double sum;    // sqrt(pi) * sum of four-term contributions, with H(0) removed at zero mid length
  double count;  // total coefficient of the removed H(0) terms
  double tail;   // bound on the omitted part of sum
  double rounding;
  std::size_t terms;
  double cutoff;
  std::size_t boundary;
};

// Walks start on region edges and end by entering an edge outside the region.
FluxParts flux_parts(const MetricGraph& g, const RegionSpec& region, double t, double target,
                     const EvalConfig& cfg) {
  require_time(t);
  require_config(cfg);
  g.require_valid();
  const RegionGraph rg = refine_region(g, region);
  const BondTable T(rg.graph);
  const double s = 2.0 * std::sqrt(t);
  std::vector<Walk> roots;
  for (std::uint32_t b = 0; b < T.size(); ++b)
    if (rg.in_region[BondTable::edge_of(b)]) roots.push_back(Walk{b, 1, 0.0, 1.0, 0.0, T.length[b]});

  double count = 0.0;
  auto visit = [&](const Walk& w, detail::Accumulator& acc) {
    for (std::uint32_t k = T.offset[w.bond]; k < T.offset[w.bond + 1]; ++k) {
      const std::uint32_t c = T.next[k];
      if (rg.in_region[BondTable::edge_of(c)]) continue;
      const double a = w.aux, b = T.length[c], coeff = w.alpha * T.beta[k];
      if (w.bonds == 1) {
        acc.add(kSqrtPi * coeff * (H((a + b) / s) - H(a / s) - H(b / s)), 1 + kSpecialUlps);
      } else {
        acc.add(kSqrtPi * coeff * four_term(w.length, a, b, s), w.bonds + kSpecialUlps);
      }
    }
  };
  for (const Walk& r : roots)
    for (std::uint32_t k = T.offset[r.bond]; k < T.offset[r.bond + 1]; ++k)
      if (!rg.in_region[BondTable::edge_of(T.next[k])]) count += T.beta[k];

  auto phi = [s](double x) { return H(x / s); };
  auto tail = [&](const detail::Frontier& f) { return kSqrtPi * frontier_tail(f, T, 1, phi); };
  const double L0 = detail::solve_decreasing(
      [&](double L) { return kSqrtPi * static_cast<double>(roots.size()) * T.rho * phi(L); }, T.l_min, target);
  try {
    Certified c = certify(T, roots, t, target, L0, visit, [](std::uint32_t) { return false; }, tail, cfg);
    return {c.run.acc.value(), count, c.tail, c.run.acc.rounding_bound(), c.run.visited, c.limit,
            rg.boundary.size()};
  } catch (const detail::BudgetHit&) {
    throw BudgetExceeded("boundary flux path sum needs more than max_terms walks");
  }
}

}  // namespace

HeatValue boundary_flux(const MetricGraph& g, const RegionSpec& region, double t, const EvalConfig& cfg) {
  const double scale = std::sqrt(t) / kSqrtPi;
  const FluxParts p = flux_parts(g, region, t, 0.9 * cfg.tolerance / scale, cfg);
  const double value = scale * (p.sum + p.count);
  const double error = scale * (p.tail + p.rounding) + 4.0 * kEps * std::abs(value);
  return {value, error, p.terms, p.cutoff, Method::PathSum};
}

HeatValue perimeter_deviation(const MetricGraph& g, const RegionSpec& region, double t, const EvalConfig& cfg) {
  const FluxParts p = flux_parts(g, region, t, 0.9 * cfg.tolerance, cfg);
  // The removed H(0) coefficients are exact small integers in any valid region.
  const double value = p.sum + (p.count - static_cast<double>(p.boundary));
  return {value, p.tail + p.rounding, p.terms, p.cutoff, Method::PathSum};
}

double caccioppoli_remainder_bound(const MetricGraph& g, const RegionSpec& region, double t) {
  require_time(t);
  const RegionGraph rg = refine_region(g, region);
  const double dist = rg.boundary_to_vertex_distance;
  const double l_min = rg.graph.min_length();
  const double d = static_cast<double>(rg.graph.max_degree());
  const double near = std::exp(-dist * dist / (4.0 * t));
  const double denom = 1.0 - d * std::exp(-l_min * l_min / (2.0 * t));
  if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
  const double direct = 3.0 * kSqrtPi * static_cast<double>(rg.boundary.size()) * near;
  const double paths = (near + d * std::exp(-l_min * l_min / (4.0 * t)) / denom) / (2.0 * std::sqrt(t));
  return direct + paths;
}

double small_time_bound(const MetricGraph& g, double t) {
  require_time(t);
  g.require_valid();
  const double l = g.min_length();
  const double d = static_cast<double>(g.max_degree());
  if (d > 1.0 && !(t < l * l / (2.0 * std::log(d))))
    throw DomainError("t lies outside the small-time window l_min^2 / (2 log d_max)");
  return 8.0 * std::sqrt(t) / kSqrtPi * std::exp(-l * l / (4.0 * t)) /
         (1.0 - d * std::exp(-l * l / (2.0 * t)));
}

HeatValue hadamard_derivative(const MetricGraph& g, EdgeId e0, double t, const EvalConfig& cfg) {
  require_time(t);
  require_config(cfg);
  g.require_valid();
  if (e0 >= g.edge_count()) throw DomainError("unknown edge");
  const BondTable T(g);
  const double s = 2.0 * std::sqrt(t);
  auto marked = [e0](std::uint32_t b) { return BondTable::edge_of(b) == e0; };
  std::vector<Walk> roots = dirichlet_roots(g, T);
  for (Walk& r : roots) r.marked = marked(r.bond) ? 1.0 : 0.0;

  auto phi = [s](double x) { return erfc(x / s); };
  auto visit = [&](const Walk& w, detail::Accumulator& acc) {
    if (T.head_dirichlet[w.bond] && w.marked > 0.0)
      acc.add(w.alpha * w.marked * phi(w.length), w.bonds + kSpecialUlps);
  };
  auto tail = [&](const detail::Frontier& f) {
    double sum = 0.0;
    for (std::size_t i = 0; i < f.bins(); ++i) {
      if (f.mass(i) == 0.0) continue;
      sum += f.marked(i) * detail::tail_series(T.rho, T.l_min, f.floor(i), 0, false, phi);
      sum += f.mass(i) * detail::tail_series(T.rho, T.l_min, f.floor(i), 0, true, phi);
    }
    return sum;
  };
  const double target = 0.45 * cfg.tolerance;
  const double count = std::max<double>(2.0, static_cast<double>(g.dirichlet_count()));
  const double L0 = detail::solve_decreasing([&](double L) { return count * (L / T.l_min) * phi(L); },
                                             T.l_min, target);
  try {
    Certified c = certify(T, roots, t, target, L0, visit, marked, tail, cfg);
    const double sum = c.run.acc.value();
    return {1.0 - 2.0 * sum, 2.0 * (c.tail + c.run.acc.rounding_bound()) + 2.0 * kEps, c.run.visited,
            c.limit, Method::PathSum};
  } catch (const detail::BudgetHit&) {
    throw BudgetExceeded("Hadamard path sum needs more than max_terms walks");
  }
}

}  // namespace graphheat
