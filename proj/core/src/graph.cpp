#include "graphheat/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "graphheat/errors.hpp"

namespace graphheat {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) os << "; ";
    os << issues[i].message;
  }
  return os.str();
}

MetricGraph::MetricGraph(std::vector<VertexKind> kinds, std::vector<Edge> edges)
    : kinds_(std::move(kinds)), edges_(std::move(edges)), incidences_(kinds_.size()) {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    Edge& e = edges_[i];
    e.id = i;
    if (e.u >= kinds_.size() || e.v >= kinds_.size()) {
      std::ostringstream os;
      os << "edge " << i << " references unknown vertex";
      throw InvalidGraph(os.str());
    }
    incidences_[e.u].push_back({i, 0});
    incidences_[e.v].push_back({i, 1});
  }
  for (VertexId v = 0; v < kinds_.size(); ++v) {
    if (kinds_[v] == VertexKind::Dirichlet) dirichlet_.push_back(v);
    max_degree_ = std::max(max_degree_, incidences_[v].size());
  }
  min_length_ = edges_.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  for (const Edge& e : edges_) {
    volume_ += e.length;
    min_length_ = std::min(min_length_, e.length);
  }
  report_ = validate(*this);
}

const Edge& MetricGraph::edge(EdgeId e) const {
  if (e >= edges_.size()) throw std::out_of_range("unknown edge " + std::to_string(e));
  return edges_[e];
}

VertexKind MetricGraph::kind(VertexId v) const {
  if (v >= kinds_.size()) throw std::out_of_range("unknown vertex " + std::to_string(v));
  return kinds_[v];
}

std::size_t MetricGraph::degree(VertexId v) const { return incidences(v).size(); }

const std::vector<Incidence>& MetricGraph::incidences(VertexId v) const {
  if (v >= kinds_.size()) throw std::out_of_range("unknown vertex " + std::to_string(v));
  return incidences_[v];
}

void MetricGraph::require_valid() const {
  if (!report_.ok()) throw InvalidGraph("invalid graph: " + report_.summary());
}

ValidationReport validate(const MetricGraph& g) {
  ValidationReport r;
  auto add = [&](Violation c, std::string msg, std::optional<VertexId> v = {},
                 std::optional<EdgeId> e = {}) { r.issues.push_back({c, std::move(msg), v, e}); };

  if (g.dirichlet_count() == 0) add(Violation::EmptyDirichletSet, "no Dirichlet vertex");
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const std::size_t d = g.degree(v);
    if (g.is_dirichlet(v) && d != 1) {
      add(Violation::DirichletDegree,
          "Dirichlet vertex " + std::to_string(v) + " has degree " + std::to_string(d), v);
    } else if (!g.is_dirichlet(v) && d == 0) {
      add(Violation::IsolatedVertex, "vertex " + std::to_string(v) + " is isolated", v);
    }
  }
  for (const Edge& e : g.edges()) {
    if (!(e.length > 0.0) || !std::isfinite(e.length)) {
      std::ostringstream os;
      os << "edge " << e.id << " has non-positive or non-finite length " << e.length;
      add(Violation::BadLength, os.str(), {}, e.id);
    }
  }

  // Pieces of G minus V_D: edges joined through non-Dirichlet vertices, plus isolated vertices.
  DisjointSets sets(g.edge_count());
  std::size_t isolated = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const auto& inc = g.incidences(v);
    if (inc.empty()) {
      if (!g.is_dirichlet(v)) ++isolated;
      continue;
    }
    if (g.is_dirichlet(v)) continue;
    for (const Incidence& i : inc) sets.unite(i.edge, inc.front().edge);
  }
  std::size_t pieces = isolated;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (sets.find(e) == e) ++pieces;
  if (pieces > 1) {
    add(Violation::Disconnected,
        "graph minus its Dirichlet vertices has " + std::to_string(pieces) + " components");
  }
  return r;
}

std::size_t degree(const MetricGraph& g, VertexId v) { return g.degree(v); }

std::vector<MetricGraph> components(const MetricGraph& g) {
  DisjointSets sets(g.edge_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (g.is_dirichlet(v)) continue;
    const auto& inc = g.incidences(v);
    for (const Incidence& i : inc) sets.unite(i.edge, inc.front().edge);
  }
  std::vector<MetricGraph> out;
  std::vector<std::size_t> order;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (sets.find(e) == e) order.push_back(e);
  for (std::size_t root : order) {
    std::vector<VertexKind> kinds;
    std::vector<Edge> edges;
    std::vector<std::size_t> remap(g.vertex_count(), SIZE_MAX);
    auto vertex = [&](VertexId v) {
      // A Dirichlet vertex touching several components is copied into each.
      if (remap[v] == SIZE_MAX) {
        remap[v] = kinds.size();
        kinds.push_back(g.kind(v));
      }
      return remap[v];
    };
    for (const Edge& e : g.edges()) {
      if (sets.find(e.id) != root) continue;
      edges.push_back({0, vertex(e.u), vertex(e.v), e.length});
    }
    out.emplace_back(std::move(kinds), std::move(edges));
  }
  return out;
}

}  // namespace graphheat
