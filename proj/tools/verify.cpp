#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include <fmt/format.h>

#include "graphheat/errors.hpp"
#include "graphheat/spectral.hpp"

namespace graphheat::cli {

namespace {

constexpr double kPi = std::numbers::pi;

class Suites {
 public:
  Suites(const MetricGraph& g, const EvalConfig& cfg) : g_(g), cfg_(cfg) {
    const double l = g.min_length();
    times_ = {0.05 * l * l, 0.3 * l * l};
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (!g.is_dirichlet(v) && (!hub_ || g.degree(v) > g.degree(*hub_))) hub_ = v;
  }

  void identities() {
    for (double t : times_) {
      const EdgeId e = 0;
      const double at = 0.37 * g_.edge(e).length;
      equal(fmt::format("subdivision t={:.4g}", t), Q(g_, t), Q(subdivide(g_, e, at), t));
      for (const Edge& loop : g_.edges())
        if (loop.is_loop())
          equal(fmt::format("loop cut edge {} t={:.4g}", loop.id, t), Q(g_, t), Q(midpoint_loop_cut(g_, loop.id), t));
      if (hub_) {
        const HeatValue a = Q(g_, t), b = Q(mirror(g_, {*hub_}, 2), t);
        check(fmt::format("mirror vertex {} m=2 t={:.4g}", *hub_, t), std::abs(b.value - 2 * a.value),
              b.error_bound + 2 * a.error_bound + 1e-14, "gap");
      }
      const HeatValue big = Q(scale(g_, 2.0), t), small = Q(g_, t / 4);
      check(fmt::format("scaling t={:.4g}", t), std::abs(big.value - 2 * small.value),
            big.error_bound + 2 * small.error_bound + 1e-14, "gap");
    }
  }

  void inequalities() {
    std::vector<double> times = times_;
    times.push_back(0.15 * g_.min_length() * g_.min_length());
    for (double t : times) {
      const HeatValue base = Q(g_, t);
      if (hub_) {
        const HeatValue cut = heat_content(add_dirichlet(g_, *hub_), t, path_cfg());
        greater(fmt::format("add-dirichlet vertex {} t={:.4g}", *hub_, t), base, cut, 0.0);
        const MetricGraph pendant({VertexKind::Standard, VertexKind::Standard},
                                  {Edge{0, 0, 1, g_.min_length()}});
        greater(fmt::format("attach-pendant vertex {} t={:.4g}", *hub_, t), Q(attach_pendant(g_, *hub_, pendant, 0), t),
                base, 0.0);
      }
      for (const Edge& e : g_.edges()) {
        if (!g_.is_dirichlet(e.u) && !g_.is_dirichlet(e.v)) continue;
        const double by = 0.5 * g_.min_length();
        const double floor = closed_form_heat_content({ClosedFamily::IntervalDirichlet, by}, t);
        greater(fmt::format("lengthen edge {} by {:.4g} t={:.4g}", e.id, by, t), Q(lengthen_edge(g_, e.id, by), t),
                base, floor);
        break;
      }
    }
    // Non-increasing up to the error bounds; strictly below the volume.
    HeatValue prev{g_.volume()};
    bool monotone = true;
    double worst = 1.0;
    for (int i = 0; i < 8; ++i) {
      const double t = times_.front() * std::pow(1.5, i);
      const HeatValue q = Q(g_, t);
      const double slack = prev.value - q.value + q.error_bound + prev.error_bound;
      monotone = monotone && slack >= 0.0 && q.value + q.error_bound < g_.volume();
      worst = std::min(worst, slack);
      prev = q;
    }
    add("monotone below volume", monotone, fmt::format("smallest slack {:.3g}", worst));
  }

  void oracle(double mesh) {
    const double h = mesh > 0.0 ? mesh : std::min(g_.min_length() / 8, g_.volume() / 600);
    const SpectralModel coarse = build(g_, h), fine = build(g_, h / 2);
    for (double t : times_) {
      const HeatValue q = Q(g_, t);
      const double e1 = eigen_heat_content(coarse, t) - q.value;
      const double e2 = eigen_heat_content(fine, t) - q.value;
      const double extrapolated = std::abs((4 * e2 - e1) / 3);
      check(fmt::format("oracle agreement t={:.4g} h={:.3g}", t, h), std::abs(e2), 1e-4, "gap");
      check(fmt::format("oracle extrapolation t={:.4g}", t), extrapolated, 1e-6 + q.error_bound, "gap");
      if (std::abs(e2) > 1e-9) {
        const double ratio = e1 / e2;
        add(fmt::format("oracle second order t={:.4g}", t), ratio > 3.0 && ratio < 5.0,
            fmt::format("halving ratio {:.4f}", ratio));
      }
    }
  }

  void asymptotics() {
    for (double t : times_) {
      try {
        const double bound = small_time_bound(g_, t);
        EvalConfig tight = path_cfg();
        tight.tolerance = 1e-3 * bound;  // resolves the comparison without chasing the full tail
        const HeatValue c = heat_content_correction(g_, t, tight);
        check(fmt::format("small-time bound t={:.4g}", t), std::abs(c.value) + c.error_bound, bound, "deviation");
      } catch (const DomainError&) {
        // t outside the validity window of the bound for this graph
      }
    }
    const double h = std::min(g_.min_length() / 8, g_.volume() / 300);
    const SpectralModel m = build(g_, h);
    const double lambda = lambda1(m);
    for (double t : times_) {
      const HeatValue q = Q(g_, t);
      check(fmt::format("spectral bound t={:.4g}", t), q.value + q.error_bound, std::exp(-lambda * t) * g_.volume(),
            "Q");
    }
    const auto [q2t, norm2] = l2_mass_identity(m, times_.back());
    check("L2 mass identity", std::abs(q2t - norm2), 1e-8, "gap");
    check("Polya", lambda * torsional_rigidity(m), g_.volume(), "lambda1 T");
    // Sharp on the interval, so allow the mesh error estimated from a halved mesh.
    const double lambda_fine = lambda1(build(g_, h / 2));
    const double floor = kPi * kPi / (4 * g_.volume() * g_.volume());
    add("Poincare floor", lambda_fine + std::abs(lambda - lambda_fine) >= floor,
        fmt::format("lambda1 {:.10g} (mesh error {:.2g}) vs {:.10g}", lambda_fine, std::abs(lambda - lambda_fine), floor));
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back((40.0 + 2.0 * i) / lambda);
    const double rate = large_time_rate(m, grid);
    check("large-time rate", std::abs(rate / lambda - 1), 1e-2, "relative error");
    const double t = times_.back();
    const double step = 1e-4 * g_.edge(0).length;
    std::vector<Edge> shorter = g_.edges();
    shorter[0].length -= step;
    const double fd = (Q(lengthen_edge(g_, 0, step), t).value - Q(MetricGraph(g_.kinds(), shorter), t).value) / (2 * step);
    check(fmt::format("Hadamard derivative edge 0 t={:.4g}", t), std::abs(hadamard_derivative(g_, 0, t, path_cfg()).value - fd),
          1e-6, "finite-difference gap");
  }

  std::vector<Check> take() { return std::move(checks_); }

 private:
  EvalConfig path_cfg() const {
    EvalConfig c = cfg_;
    c.method = Method::PathSum;
    return c;
  }
  HeatValue Q(const MetricGraph& g, double t) const { return heat_content(g, t, path_cfg()); }

  void add(std::string name, bool pass, std::string detail) {
    checks_.push_back({std::move(name), pass, std::move(detail)});
  }
  void check(std::string name, double value, double limit, const char* what) {
    add(std::move(name), value < limit, fmt::format("{} {:.3g} vs {:.3g}", what, value, limit));
  }
  void equal(std::string name, const HeatValue& a, const HeatValue& b) {
    check(std::move(name), std::abs(a.value - b.value), a.error_bound + b.error_bound + 1e-14, "gap");
  }
  // larger - smaller - offset must exceed the combined error bounds.
  void greater(std::string name, const HeatValue& larger, const HeatValue& smaller, double offset) {
    const double margin = larger.value - smaller.value - offset;
    add(std::move(name), margin > larger.error_bound + smaller.error_bound, fmt::format("margin {:.3g}", margin));
  }

  const MetricGraph& g_;
  EvalConfig cfg_;
  std::vector<double> times_;
  std::optional<VertexId> hub_;
  std::vector<Check> checks_;
};

}  // namespace

std::vector<Check> run_suite(const MetricGraph& g, Suite suite, const EvalConfig& cfg, double mesh) {
  g.require_valid();
  Suites s(g, cfg);
  const bool all = suite == Suite::All;
  if (all || suite == Suite::Identities) s.identities();
  if (all || suite == Suite::Inequalities) s.inequalities();
  if (all || suite == Suite::Oracle) s.oracle(mesh);
  if (all || suite == Suite::Asymptotics) s.asymptotics();
  return s.take();
}

}  // namespace graphheat::cli
