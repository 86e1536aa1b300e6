#pragma once

#include <vector>

#include "graphheat/graph.hpp"
#include "graphheat/heat_content.hpp"

namespace fx {

using graphheat::Edge;
using graphheat::MetricGraph;
using graphheat::VertexKind;

inline constexpr VertexKind D = VertexKind::Dirichlet;
inline constexpr VertexKind S = VertexKind::Standard;

// [0, l] with Dirichlet at 0, and at l too when `both`.
inline MetricGraph interval(double l, bool both = false) {
  return MetricGraph({D, both ? D : S}, {Edge{0, 0, 1, l}});
}

// Center 0, leaf i + 1 at the end of arm i; the first `dirichlet` leaves are Dirichlet.
inline MetricGraph star(const std::vector<double>& arms, std::size_t dirichlet) {
  std::vector<VertexKind> kinds{S};
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < arms.size(); ++i) {
    kinds.push_back(i < dirichlet ? D : S);
    edges.push_back(Edge{i, 0, i + 1, arms[i]});
  }
  return MetricGraph(kinds, edges);
}

inline MetricGraph star(std::size_t n, double l, std::size_t dirichlet) {
  return star(std::vector<double>(n, l), dirichlet);
}

// Pendant edge 0 from the Dirichlet vertex 0 to vertex 1, loop edge 1 at vertex 1.
inline MetricGraph lasso(double pendant = 1.0, double loop = 2.0) {
  return MetricGraph({D, S}, {Edge{0, 0, 1, pendant}, Edge{1, 1, 1, loop}});
}

inline MetricGraph figure_eight() {
  return MetricGraph({D, S}, {Edge{0, 0, 1, 1.0}, Edge{1, 1, 1, 1.0}, Edge{2, 1, 1, 1.5}});
}

// Path through vertices 0..n with the given edge lengths.
inline MetricGraph path(const std::vector<double>& lengths, bool dirichlet_left, bool dirichlet_right) {
  std::vector<VertexKind> kinds(lengths.size() + 1, S);
  kinds.front() = dirichlet_left ? D : S;
  kinds.back() = dirichlet_right ? D : S;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < lengths.size(); ++i) edges.push_back(Edge{i, i, i + 1, lengths[i]});
  return MetricGraph(kinds, edges);
}

// m copies of [0, sum(pieces)] glued at the piece boundaries. The left ends are split Dirichlet
// vertices; the right ends are too when `dirichlet_ends == 2`, otherwise glued into one vertex.
inline MetricGraph pumpkin_chain(std::size_t m, const std::vector<double>& pieces, int dirichlet_ends) {
  const std::size_t h = pieces.size();
  std::vector<VertexKind> kinds;
  std::vector<Edge> edges;
  // Cross-section vertices 1..h-1 (interior), then the right end, then Dirichlet leaves.
  for (std::size_t j = 1; j < h; ++j) kinds.push_back(S);
  const bool right_dirichlet = dirichlet_ends == 2;
  if (!right_dirichlet) kinds.push_back(S);
  auto section = [&](std::size_t j) { return j - 1; };
  auto add_leaf = [&]() {
    kinds.push_back(D);
    return kinds.size() - 1;
  };
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t j = 0; j < h; ++j) {
      const std::size_t u = j == 0 ? add_leaf() : section(j);
      std::size_t v;
      if (j + 1 < h) v = section(j + 1);
      else v = right_dirichlet ? add_leaf() : h - 1;
      edges.push_back(Edge{edges.size(), u, v, pieces[j]});
    }
  }
  return MetricGraph(kinds, edges);
}

inline graphheat::EvalConfig path_sum(double tol = 1e-12) {
  graphheat::EvalConfig cfg;
  cfg.tolerance = tol;
  cfg.method = graphheat::Method::PathSum;
  return cfg;
}

}  // namespace fx
