#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "graphheat/errors.hpp"
#include "graphheat/graph.hpp"

namespace graphheat {

namespace {

void require_positive(double s, const char* what) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError(std::string(what) + " must be positive");
}

VertexId far_end(const Edge& e, int end) { return end == 0 ? e.v : e.u; }

}  // namespace

MetricGraph subdivide(const MetricGraph& g, EdgeId e, double offset) {
  const Edge& old = g.edge(e);
  if (!(offset > 0.0 && offset < old.length)) {
    std::ostringstream os;
    os << "subdivision offset " << offset << " is not interior to edge " << e;
    throw DomainError(os.str());
  }
  std::vector<VertexKind> kinds = g.kinds();
  std::vector<Edge> edges = g.edges();
  const VertexId w = kinds.size();
  kinds.push_back(VertexKind::Standard);
  edges[e] = {e, old.u, w, offset};
  edges.push_back({0, w, old.v, old.length - offset});
  return MetricGraph(std::move(kinds), std::move(edges));
}

MetricGraph suppress_degree_two(const MetricGraph& g) {
  std::vector<VertexKind> kinds = g.kinds();
  std::vector<Edge> edges = g.edges();
  std::vector<bool> edge_alive(edges.size(), true);
  std::vector<bool> vertex_alive(kinds.size(), true);

  auto incidences_of = [&](VertexId v) {
    std::vector<Incidence> inc;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (!edge_alive[i]) continue;
      if (edges[i].u == v) inc.push_back({i, 0});
      if (edges[i].v == v) inc.push_back({i, 1});
    }
    return inc;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (VertexId w = 0; w < kinds.size(); ++w) {
      if (!vertex_alive[w] || kinds[w] != VertexKind::Standard) continue;
      const auto inc = incidences_of(w);
      // A lone loop on a degree-two vertex is an isolated cycle and stays as is.
      if (inc.size() != 2 || inc[0].edge == inc[1].edge) continue;
      const Edge a = edges[inc[0].edge];
      const Edge b = edges[inc[1].edge];
      Edge merged{};
      merged.length = a.length + b.length;
      if (inc[0].end == 1) {
        merged.u = a.u;
        merged.v = far_end(b, inc[1].end);
      } else {
        merged.u = far_end(b, inc[1].end);
        merged.v = a.v;
      }
      edges[inc[0].edge] = merged;
      edge_alive[inc[1].edge] = false;
      vertex_alive[w] = false;
      changed = true;
    }
  }

  std::vector<VertexId> remap(kinds.size(), 0);
  std::vector<VertexKind> out_kinds;
  for (VertexId v = 0; v < kinds.size(); ++v) {
    if (!vertex_alive[v]) continue;
    remap[v] = out_kinds.size();
    out_kinds.push_back(kinds[v]);
  }
  std::vector<Edge> out_edges;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!edge_alive[i]) continue;
    out_edges.push_back({0, remap[edges[i].u], remap[edges[i].v], edges[i].length});
  }
  return MetricGraph(std::move(out_kinds), std::move(out_edges));
}

MetricGraph midpoint_loop_cut(const MetricGraph& g, EdgeId loop) {
  const Edge& e = g.edge(loop);
  if (!e.is_loop()) throw DomainError("edge " + std::to_string(loop) + " is not a loop");
  std::vector<VertexKind> kinds = g.kinds();
  std::vector<Edge> edges = g.edges();
  const VertexId a = kinds.size();
  const VertexId b = a + 1;
  kinds.push_back(VertexKind::Standard);
  kinds.push_back(VertexKind::Standard);
  edges[loop] = {loop, e.u, a, e.length / 2};
  edges.push_back({0, e.u, b, e.length / 2});
  return MetricGraph(std::move(kinds), std::move(edges));
}

MetricGraph mirror(const MetricGraph& g, const std::vector<VertexId>& reflection_set, int m) {
  if (m < 1) throw DomainError("mirror multiplicity must be at least 1");
  std::vector<bool> glued(g.vertex_count(), false);
  for (VertexId v : reflection_set) {
    if (g.is_dirichlet(v))
      throw DomainError("reflection vertex " + std::to_string(v) + " is Dirichlet");
    glued[v] = true;
  }
  std::vector<VertexKind> kinds = g.kinds();
  std::vector<Edge> edges = g.edges();
  for (int copy = 1; copy < m; ++copy) {
    std::vector<VertexId> remap(g.vertex_count());
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      if (glued[v]) {
        remap[v] = v;
      } else {
        remap[v] = kinds.size();
        kinds.push_back(g.kind(v));
      }
    }
    for (const Edge& e : g.edges()) edges.push_back({0, remap[e.u], remap[e.v], e.length});
  }
  return MetricGraph(std::move(kinds), std::move(edges));
}

MetricGraph attach_pendant(const MetricGraph& g, VertexId at, const MetricGraph& pendant,
                           VertexId pendant_root) {
  if (g.is_dirichlet(at)) throw DomainError("cannot attach at Dirichlet vertex " + std::to_string(at));
  if (pendant.dirichlet_count() != 0) throw DomainError("pendant graph must be Dirichlet-free");
  if (pendant_root >= pendant.vertex_count()) throw DomainError("unknown pendant root");
  std::vector<VertexKind> kinds = g.kinds();
  std::vector<Edge> edges = g.edges();
  std::vector<VertexId> remap(pendant.vertex_count());
  for (VertexId v = 0; v < pendant.vertex_count(); ++v) {
    if (v == pendant_root) {
      remap[v] = at;
    } else {
      remap[v] = kinds.size();
      kinds.push_back(VertexKind::Standard);
    }
  }
  for (const Edge& e : pendant.edges()) edges.push_back({0, remap[e.u], remap[e.v], e.length});
  return MetricGraph(std::move(kinds), std::move(edges));
}

MetricGraph split_dirichlet_vertices(const MetricGraph& g) {
  std::vector<VertexKind> kinds = g.kinds();
  std::vector<Edge> edges = g.edges();
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (!g.is_dirichlet(v)) continue;
    const auto& inc = g.incidences(v);
    for (std::size_t i = 1; i < inc.size(); ++i) {
      const VertexId fresh = kinds.size();
      kinds.push_back(VertexKind::Dirichlet);
      Edge& e = edges[inc[i].edge];
      (inc[i].end == 0 ? e.u : e.v) = fresh;
    }
  }
  return MetricGraph(std::move(kinds), std::move(edges));
}

std::vector<MetricGraph> add_dirichlet(const MetricGraph& g, VertexId v) {
  if (g.is_dirichlet(v)) throw DomainError("vertex " + std::to_string(v) + " is already Dirichlet");
  std::vector<VertexKind> kinds = g.kinds();
  kinds[v] = VertexKind::Dirichlet;
  return components(split_dirichlet_vertices(MetricGraph(std::move(kinds), g.edges())));
}

std::vector<MetricGraph> add_dirichlet_point(const MetricGraph& g, GraphPoint x) {
  const MetricGraph refined = subdivide(g, x.edge, x.offset);
  return add_dirichlet(refined, refined.vertex_count() - 1);
}

MetricGraph lengthen_edge(const MetricGraph& g, EdgeId e, double s) {
  require_positive(s, "lengthening");
  std::vector<Edge> edges = g.edges();
  edges.at(e).length += s;
  return MetricGraph(g.kinds(), std::move(edges));
}

MetricGraph scale(const MetricGraph& g, double s) {
  require_positive(s, "scale factor");
  std::vector<Edge> edges = g.edges();
  for (Edge& e : edges) e.length *= s;
  return MetricGraph(g.kinds(), std::move(edges));
}

double shortest_distance(const MetricGraph& g, GraphPoint x, GraphPoint y) {
  const Edge& ex = g.edge(x.edge);
  const Edge& ey = g.edge(y.edge);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.vertex_count(), inf);
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  auto relax = [&](VertexId v, double d) {
    if (d < dist[v]) {
      dist[v] = d;
      heap.push({d, v});
    }
  };
  relax(ex.u, x.offset);
  relax(ex.v, ex.length - x.offset);
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (const Incidence& i : g.incidences(v)) {
      const Edge& e = g.edge(i.edge);
      relax(far_end(e, i.end), d + e.length);
    }
  }
  double best = std::min(dist[ey.u] + y.offset, dist[ey.v] + ey.length - y.offset);
  if (x.edge == y.edge) best = std::min(best, std::abs(x.offset - y.offset));
  return best;
}

bool isomorphic(const MetricGraph& a_in, const MetricGraph& b_in, double tol) {
  const MetricGraph a = suppress_degree_two(a_in);
  const MetricGraph b = suppress_degree_two(b_in);
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  const std::size_t n = a.vertex_count();

  auto lengths_between = [](const MetricGraph& g, VertexId x, VertexId y) {
    std::vector<double> out;
    for (const Incidence& i : g.incidences(x)) {
      const Edge& e = g.edge(i.edge);
      if (e.is_loop()) {
        if (x == y && i.end == 0) out.push_back(e.length);
      } else if (far_end(e, i.end) == y) {
        out.push_back(e.length);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  auto same = [tol](const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (std::abs(p[i] - q[i]) > tol) return false;
    return true;
  };

  std::vector<VertexId> map(n, SIZE_MAX);
  std::vector<bool> used(n, false);
  std::function<bool(VertexId)> extend = [&](VertexId v) -> bool {
    if (v == n) return true;
    for (VertexId w = 0; w < n; ++w) {
      if (used[w] || a.kind(v) != b.kind(w) || a.degree(v) != b.degree(w)) continue;
      map[v] = w;
      bool ok = same(lengths_between(a, v, v), lengths_between(b, w, w));
      for (VertexId x = 0; ok && x < v; ++x)
        ok = same(lengths_between(a, v, x), lengths_between(b, w, map[x]));
      if (ok) {
        used[w] = true;
        if (extend(v + 1)) return true;
        used[w] = false;
      }
    }
    map[v] = SIZE_MAX;
    return false;
  };
  return extend(0);
}

RegionGraph refine_region(const MetricGraph& g, const RegionSpec& region) {
  if (region.empty()) throw DomainError("region is empty");
  std::map<EdgeId, std::vector<std::pair<double, double>>> per_edge;
  for (const RegionInterval& r : region) {
    const Edge& e = g.edge(r.edge);
    if (!(r.a >= 0.0 && r.b <= e.length && r.a < r.b)) {
      std::ostringstream os;
      os << "region interval [" << r.a << ", " << r.b << "] is not a positive sub-interval of edge "
         << r.edge;
      throw DomainError(os.str());
    }
    per_edge[r.edge].push_back({r.a, r.b});
  }
  for (auto& [e, iv] : per_edge) {
    std::sort(iv.begin(), iv.end());
    for (std::size_t i = 1; i < iv.size(); ++i)
      if (iv[i].first < iv[i - 1].second)
        throw DomainError("region intervals overlap on edge " + std::to_string(e));
  }

  // Cut every edge at its interior interval ends, largest offset first, so that the piece
  // starting at each cut is the edge created by that cut.
  MetricGraph cur = g;
  struct Piece {
    EdgeId original, edge;
    double start, end;
  };
  std::vector<Piece> pieces;
  std::map<VertexId, double> cut_distance;  // new vertex -> distance to original vertices
  for (const auto& [e, iv] : per_edge) {
    const double len = g.edge(e).length;
    std::set<double> cuts;
    for (auto [a, b] : iv) {
      if (a > 0.0) cuts.insert(a);
      if (b < len) cuts.insert(b);
    }
    double upper = len;
    for (auto it = cuts.rbegin(); it != cuts.rend(); ++it) {
      const EdgeId created = cur.edge_count();
      const VertexId vertex = cur.vertex_count();
      cur = subdivide(cur, e, *it);
      pieces.push_back({e, created, *it, upper});
      cut_distance[vertex] = std::min(*it, len - *it);
      upper = *it;
    }
    pieces.push_back({e, e, 0.0, upper});
  }

  RegionGraph out;
  out.in_region.assign(cur.edge_count(), false);
  for (const Piece& p : pieces) {
    const double mid = 0.5 * (p.start + p.end);
    for (auto [a, b] : per_edge.at(p.original))
      if (mid > a && mid < b) out.in_region[p.edge] = true;
  }

  for (VertexId v = 0; v < cur.vertex_count(); ++v) {
    bool inside = false, outside = false;
    for (const Incidence& i : cur.incidences(v)) (out.in_region[i.edge] ? inside : outside) = true;
    if (inside && cur.is_dirichlet(v)) throw DomainError("region touches a Dirichlet vertex");
    if (inside && outside) {
      if (cur.degree(v) != 2)
        throw DomainError("region boundary contains vertex " + std::to_string(v) + " of degree " +
                          std::to_string(cur.degree(v)));
      out.boundary.push_back(v);
    }
  }

  // Region edges must form one connected piece.
  std::vector<EdgeId> region_edges;
  for (EdgeId e = 0; e < cur.edge_count(); ++e)
    if (out.in_region[e]) region_edges.push_back(e);
  std::set<EdgeId> seen{region_edges.front()};
  std::vector<EdgeId> stack{region_edges.front()};
  while (!stack.empty()) {
    const Edge& e = cur.edge(stack.back());
    stack.pop_back();
    for (VertexId v : {e.u, e.v})
      for (const Incidence& i : cur.incidences(v))
        if (out.in_region[i.edge] && seen.insert(i.edge).second) stack.push_back(i.edge);
  }
  if (seen.size() != region_edges.size()) throw DomainError("region is not connected");

  out.boundary_to_vertex_distance = std::numeric_limits<double>::infinity();
  for (VertexId v : out.boundary) {
    auto it = cut_distance.find(v);
    out.boundary_to_vertex_distance =
        std::min(out.boundary_to_vertex_distance, it == cut_distance.end() ? 0.0 : it->second);
  }
  out.graph = std::move(cur);
  return out;
}

}  // namespace graphheat
