#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace graphheat {

using VertexId = std::size_t;
using EdgeId = std::size_t;

enum class VertexKind { Dirichlet, Standard };

// Offsets along an edge run from endpoint u (offset 0) to endpoint v (offset length).
struct Edge {
  EdgeId id = 0;
  VertexId u = 0;
  VertexId v = 0;
  double length = 0.0;

  bool is_loop() const { return u == v; }
};

struct GraphPoint {
  EdgeId edge = 0;
  double offset = 0.0;
};

struct RegionInterval {
  EdgeId edge = 0;
  double a = 0.0;
  double b = 0.0;
};
using RegionSpec = std::vector<RegionInterval>;

// One edge-end at a vertex: end 0 is the u-end, end 1 the v-end. A loop contributes both.
struct Incidence {
  EdgeId edge = 0;
  int end = 0;
};

enum class Violation {
  EmptyDirichletSet,
  DirichletDegree,
  Disconnected,
  BadLength,
  IsolatedVertex,
};

struct ValidationIssue {
  Violation code;
  std::string message;
  std::optional<VertexId> vertex;
  std::optional<EdgeId> edge;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
  std::string summary() const;
};

// Immutable after construction. Edge ids are their indices; the constructor renumbers.
class MetricGraph {
 public:
  MetricGraph() = default;
  MetricGraph(std::vector<VertexKind> kinds, std::vector<Edge> edges);

  std::size_t vertex_count() const { return kinds_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<VertexKind>& kinds() const { return kinds_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const;
  VertexKind kind(VertexId v) const;
  bool is_dirichlet(VertexId v) const { return kind(v) == VertexKind::Dirichlet; }
  std::size_t degree(VertexId v) const;
  const std::vector<Incidence>& incidences(VertexId v) const;

  double volume() const { return volume_; }
  double min_length() const { return min_length_; }
  std::size_t max_degree() const { return max_degree_; }
  std::size_t dirichlet_count() const { return dirichlet_.size(); }
  const std::vector<VertexId>& dirichlet_vertices() const { return dirichlet_; }

  const ValidationReport& validation() const { return report_; }
  bool is_valid() const { return report_.ok(); }
  // Throws InvalidGraph carrying the report summary.
  void require_valid() const;

 private:
  std::vector<VertexKind> kinds_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> incidences_;
  std::vector<VertexId> dirichlet_;
  double volume_ = 0.0;
  double min_length_ = 0.0;
  std::size_t max_degree_ = 0;
  ValidationReport report_;
};

ValidationReport validate(const MetricGraph& g);
std::size_t degree(const MetricGraph& g, VertexId v);

MetricGraph subdivide(const MetricGraph& g, EdgeId e, double offset);
MetricGraph suppress_degree_two(const MetricGraph& g);
MetricGraph midpoint_loop_cut(const MetricGraph& g, EdgeId loop);
MetricGraph mirror(const MetricGraph& g, const std::vector<VertexId>& reflection_set, int m);
MetricGraph attach_pendant(const MetricGraph& g, VertexId at, const MetricGraph& pendant,
                           VertexId pendant_root);
// Returns the components of G minus the Dirichlet set after the change (usually one).
std::vector<MetricGraph> add_dirichlet(const MetricGraph& g, VertexId v);
// Splits the graph at an interior point and makes both new ends Dirichlet.
std::vector<MetricGraph> add_dirichlet_point(const MetricGraph& g, GraphPoint x);
MetricGraph lengthen_edge(const MetricGraph& g, EdgeId e, double s);
MetricGraph scale(const MetricGraph& g, double s);
double shortest_distance(const MetricGraph& g, GraphPoint x, GraphPoint y);

// A Dirichlet vertex of degree k becomes k Dirichlet vertices of degree 1.
MetricGraph split_dirichlet_vertices(const MetricGraph& g);
// Connected components of G minus the Dirichlet set, each with its Dirichlet ends.
std::vector<MetricGraph> components(const MetricGraph& g);
// Isomorphism of the degree-two-suppressed forms, lengths compared to `tol`.
bool isomorphic(const MetricGraph& a, const MetricGraph& b, double tol = 1e-12);

// Region refined so that it is a union of whole edges.
struct RegionGraph {
  MetricGraph graph;
  std::vector<bool> in_region;  // indexed by edge of `graph`
  std::vector<VertexId> boundary;
  double boundary_to_vertex_distance = 0.0;  // distance from the boundary to original vertices
};
// Throws DomainError when the region violates the RegionSpec invariants.
RegionGraph refine_region(const MetricGraph& g, const RegionSpec& region);

}  // namespace graphheat
