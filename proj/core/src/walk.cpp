#include "walk.hpp"

#include <algorithm>

namespace graphheat::detail {

BondTable::BondTable(const MetricGraph& g) {
  const std::size_t n = 2 * g.edge_count();
  length.resize(n);
  head.resize(n);
  head_dirichlet.resize(n);
  leaving.assign(g.vertex_count(), {});
  for (const Edge& e : g.edges()) {
    const auto f = static_cast<std::uint32_t>(2 * e.id);
    length[f] = length[f + 1] = e.length;
    head[f] = e.v;
    head[f + 1] = e.u;
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    for (const Incidence& i : g.incidences(v))
      leaving[v].push_back(static_cast<std::uint32_t>(2 * i.edge + (i.end == 0 ? 0 : 1)));

  offset.assign(1, 0);
  for (std::uint32_t b = 0; b < n; ++b) {
    const VertexId h = head[b];
    const bool dirichlet = g.is_dirichlet(h);
    head_dirichlet[b] = dirichlet;
    const double transfer = 2.0 / static_cast<double>(g.degree(h));
    double row = 0.0;
    for (std::uint32_t c : leaving[h]) {
      const double value = dirichlet ? -1.0 : transfer - (c == (b ^ 1u) ? 1.0 : 0.0);
      if (value == 0.0) continue;
      next.push_back(c);
      beta.push_back(value);
      row += std::abs(value);
    }
    rho = std::max(rho, row);
    offset.push_back(static_cast<std::uint32_t>(next.size()));
  }
  l_min = g.min_length();
  l_max = 0.0;
  for (const Edge& e : g.edges()) l_max = std::max(l_max, e.length);
}

}  // namespace graphheat::detail
