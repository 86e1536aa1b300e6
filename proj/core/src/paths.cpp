#include "graphheat/paths.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

#include "graphheat/errors.hpp"

namespace graphheat {

VertexId initial_vertex(const MetricGraph& g, Bond b) {
  const Edge& e = g.edge(b.edge);
  return b.dir == Direction::Forward ? e.u : e.v;
}

VertexId final_vertex(const MetricGraph& g, Bond b) {
  const Edge& e = g.edge(b.edge);
  return b.dir == Direction::Forward ? e.v : e.u;
}

double bond_length(const MetricGraph& g, Bond b) { return g.edge(b.edge).length; }

std::vector<Bond> outgoing_bonds(const MetricGraph& g, VertexId v) {
  std::vector<Bond> out;
  for (const Incidence& i : g.incidences(v))
    out.push_back({i.edge, i.end == 0 ? Direction::Forward : Direction::Backward});
  return out;
}

double beta(const MetricGraph& g, Bond incoming, Bond outgoing) {
  const VertexId u = final_vertex(g, incoming);
  if (initial_vertex(g, outgoing) != u) throw DomainError("bonds are not consecutive");
  if (g.is_dirichlet(u)) return -1.0;
  const double transfer = 2.0 / static_cast<double>(g.degree(u));
  return outgoing == incoming.reversed() ? transfer - 1.0 : transfer;
}

DirectedPath::DirectedPath(const MetricGraph& g, VertexId start)
    : start_(start), end_(start), edge_counts_(g.edge_count(), 0), vertex_hits_(g.vertex_count(), 0) {
  if (start >= g.vertex_count()) throw DomainError("unknown start vertex");
  vertex_hits_[start] = 1;
}

DirectedPath::DirectedPath(const MetricGraph& g, VertexId start, std::vector<Bond> bonds)
    : DirectedPath(g, start) {
  bonds_ = std::move(bonds);
  VertexId at = start;
  for (std::size_t k = 0; k < bonds_.size(); ++k) {
    const Bond b = bonds_[k];
    if (initial_vertex(g, b) != at) throw DomainError("path bonds are not consecutive");
    if (k > 0) alpha_ *= beta(g, bonds_[k - 1], b);
    length_ += bond_length(g, b);
    ++edge_counts_[b.edge];
    at = final_vertex(g, b);
    ++vertex_hits_[at];
  }
  end_ = at;
}

double scattering_coefficient(const MetricGraph& g, const DirectedPath& p) {
  double a = 1.0;
  const auto& b = p.bonds();
  for (std::size_t k = 1; k < b.size(); ++k) a *= beta(g, b[k - 1], b[k]);
  return a;
}

DirectedPath reverse(const MetricGraph& g, const DirectedPath& p) {
  std::vector<Bond> r;
  r.reserve(p.size());
  for (auto it = p.bonds().rbegin(); it != p.bonds().rend(); ++it) r.push_back(it->reversed());
  return DirectedPath(g, p.end_vertex(), std::move(r));
}

std::vector<DirectedPath> extensions(const MetricGraph& g, const DirectedPath& p, Side side) {
  if (p.size() == 0) throw DomainError("extensions of a trivial path are undefined");
  std::vector<DirectedPath> out;
  if (side == Side::Post) {
    for (Bond b : outgoing_bonds(g, p.end_vertex())) {
      std::vector<Bond> bonds = p.bonds();
      bonds.push_back(b);
      out.emplace_back(g, p.start_vertex(), std::move(bonds));
    }
  } else {
    for (Bond b : outgoing_bonds(g, p.start_vertex())) {
      std::vector<Bond> bonds{b.reversed()};
      bonds.insert(bonds.end(), p.bonds().begin(), p.bonds().end());
      out.emplace_back(g, final_vertex(g, b), std::move(bonds));
    }
  }
  return out;
}

PathClass PathClass::dirichlet(const MetricGraph& g) {
  PathClass c;
  c.start = g.dirichlet_vertices();
  c.end = g.dirichlet_vertices();
  return c;
}

PathClass PathClass::intersect(const PathClass& o) const {
  auto meet = [](const std::optional<std::vector<VertexId>>& a,
                 const std::optional<std::vector<VertexId>>& b) -> std::optional<std::vector<VertexId>> {
    if (!a) return b;
    if (!b) return a;
    std::vector<VertexId> x = *a, y = *b, r;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(r));
    return r;
  };
  PathClass c;
  c.start = meet(start, o.start);
  c.end = meet(end, o.end);
  c.min_bonds = std::max(min_bonds, o.min_bonds);
  if (exact_bonds && o.exact_bonds && *exact_bonds != *o.exact_bonds) {
    c.exact_bonds = 0;
    c.min_bonds = SIZE_MAX;
  } else {
    c.exact_bonds = exact_bonds ? exact_bonds : o.exact_bonds;
  }
  c.max_length = std::min(max_length, o.max_length);
  c.prune_zero = prune_zero || o.prune_zero;
  return c;
}

PathEnumerator::PathEnumerator(const MetricGraph& g, PathClass cls, double L_max,
                               std::vector<Bond> initial_bonds)
    : g_(&g), cls_(std::move(cls)), limit_(std::min(L_max, cls_.max_length)) {
  auto mask = [&](const std::optional<std::vector<VertexId>>& set) {
    std::vector<bool> m(g.vertex_count(), !set.has_value());
    if (set)
      for (VertexId v : *set) m.at(v) = true;
    return m;
  };
  start_ok_ = mask(cls_.start);
  end_ok_ = mask(cls_.end);
  if (!(limit_ >= 0.0)) return;

  if (cls_.min_bonds == 0 && (!cls_.exact_bonds || *cls_.exact_bonds == 0)) {
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (start_ok_[v] && end_ok_[v]) trivial_.push_back(v);
    std::reverse(trivial_.begin(), trivial_.end());
  }
  if (initial_bonds.empty()) {
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (start_ok_[v])
        for (Bond b : outgoing_bonds(g, v)) initial_bonds.push_back(b);
  }
  for (Bond b : initial_bonds) {
    if (!start_ok_[initial_vertex(g, b)]) continue;
    push({-1, b, bond_length(g, b), 1.0, 1});
  }
}

void PathEnumerator::push(Node n) {
  if (n.length > limit_) return;
  if (cls_.exact_bonds && n.bonds > *cls_.exact_bonds) return;
  nodes_.push_back(n);
  heap_.push({n.length, seq_++, static_cast<std::int64_t>(nodes_.size() - 1)});
}

DirectedPath PathEnumerator::materialize(std::int64_t node) const {
  std::vector<Bond> bonds;
  for (std::int64_t k = node; k >= 0; k = nodes_[k].parent) bonds.push_back(nodes_[k].bond);
  std::reverse(bonds.begin(), bonds.end());
  const VertexId start = initial_vertex(*g_, bonds.front());
  return DirectedPath(*g_, start, std::move(bonds));
}

std::optional<DirectedPath> PathEnumerator::next() {
  if (!trivial_.empty()) {
    const VertexId v = trivial_.back();
    trivial_.pop_back();
    return DirectedPath(*g_, v);
  }
  while (!heap_.empty()) {
    const Entry top = heap_.top();
    heap_.pop();
    const Node n = nodes_[top.node];
    const VertexId head = final_vertex(*g_, n.bond);
    for (Bond b : outgoing_bonds(*g_, head)) {
      const double a = n.alpha * beta(*g_, n.bond, b);
      if (cls_.prune_zero && a == 0.0) continue;
      push({top.node, b, n.length + bond_length(*g_, b), a, n.bonds + 1});
    }
    const bool long_enough = n.bonds >= cls_.min_bonds;
    const bool exact = !cls_.exact_bonds || n.bonds == *cls_.exact_bonds;
    if (end_ok_[head] && long_enough && exact) return materialize(top.node);
  }
  return std::nullopt;
}

std::vector<DirectedPath> enumerate(const MetricGraph& g, const PathClass& cls, double L_max) {
  PathEnumerator it(g, cls, L_max);
  std::vector<DirectedPath> out;
  while (auto p = it.next()) out.push_back(std::move(*p));
  return out;
}

void dump_paths(std::ostream& os, const std::vector<DirectedPath>& paths) {
  const auto precision = os.precision(17);
  for (const DirectedPath& p : paths) {
    os << p.length() << ' ' << p.alpha();
    for (Bond b : p.bonds()) os << ' ' << b.index();
    os << '\n';
  }
  os.precision(precision);
}

}  // namespace graphheat
