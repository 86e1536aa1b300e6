#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "graphheat/graph.hpp"

namespace graphheat {

enum class Direction : std::uint8_t { Forward, Backward };

// An oriented edge. Forward runs from Edge::u to Edge::v; loops have two distinct bonds.
struct Bond {
  EdgeId edge = 0;
  Direction dir = Direction::Forward;

  std::size_t index() const { return 2 * edge + (dir == Direction::Backward ? 1 : 0); }
  static Bond from_index(std::size_t i) {
    return {i / 2, (i % 2) ? Direction::Backward : Direction::Forward};
  }
  Bond reversed() const {
    return {edge, dir == Direction::Forward ? Direction::Backward : Direction::Forward};
  }
  auto operator<=>(const Bond&) const = default;
};

VertexId initial_vertex(const MetricGraph& g, Bond b);
VertexId final_vertex(const MetricGraph& g, Bond b);
double bond_length(const MetricGraph& g, Bond b);
// Bonds leaving v; their number is deg(v).
std::vector<Bond> outgoing_bonds(const MetricGraph& g, VertexId v);

// Scattering factor at final_vertex(incoming); throws DomainError if the bonds do not meet.
double beta(const MetricGraph& g, Bond incoming, Bond outgoing);

class DirectedPath {
 public:
  // Trivial path sitting at `start`.
  DirectedPath(const MetricGraph& g, VertexId start);
  // Throws DomainError if consecutive bonds do not meet.
  DirectedPath(const MetricGraph& g, VertexId start, std::vector<Bond> bonds);

  VertexId start_vertex() const { return start_; }
  VertexId end_vertex() const { return end_; }
  const std::vector<Bond>& bonds() const { return bonds_; }
  std::size_t size() const { return bonds_.size(); }
  double length() const { return length_; }
  double alpha() const { return alpha_; }
  int traversals(EdgeId e) const { return edge_counts_.at(e); }
  // Occurrences of v in the vertex sequence, endpoints included.
  int hits(VertexId v) const { return vertex_hits_.at(v); }

  bool operator==(const DirectedPath& o) const {
    return start_ == o.start_ && bonds_ == o.bonds_;
  }
  bool operator<(const DirectedPath& o) const {
    return start_ != o.start_ ? start_ < o.start_ : bonds_ < o.bonds_;
  }

 private:
  VertexId start_ = 0;
  VertexId end_ = 0;
  std::vector<Bond> bonds_;
  double length_ = 0.0;
  double alpha_ = 1.0;
  std::vector<int> edge_counts_;
  std::vector<int> vertex_hits_;
};

double scattering_coefficient(const MetricGraph& g, const DirectedPath& p);
DirectedPath reverse(const MetricGraph& g, const DirectedPath& p);

enum class Side { Pre, Post };
// All q whose first (Pre) or last (Post) bond removed gives p; deg(v_-(p)) resp. deg(v_+(p)) of them.
std::vector<DirectedPath> extensions(const MetricGraph& g, const DirectedPath& p, Side side);

// Selector for start set, end set, combinatorial length and metric length.
struct PathClass {
  std::optional<std::vector<VertexId>> start;  // empty optional: any vertex
  std::optional<std::vector<VertexId>> end;
  std::size_t min_bonds = 1;
  std::optional<std::size_t> exact_bonds;
  double max_length = std::numeric_limits<double>::infinity();
  bool prune_zero = true;  // drop paths whose coefficient vanishes, and all their extensions

  static PathClass dirichlet(const MetricGraph& g);
  PathClass intersect(const PathClass& other) const;
};

// Best-first stream of the paths of a class, in non-decreasing metric length.
class PathEnumerator {
 public:
  // `initial_bonds` restricts the first bond (work splitting); empty means all allowed.
  PathEnumerator(const MetricGraph& g, PathClass cls, double L_max,
                 std::vector<Bond> initial_bonds = {});
  std::optional<DirectedPath> next();
  std::size_t expanded() const { return nodes_.size(); }

 private:
  struct Node {
    std::int64_t parent;
    Bond bond;
    double length;
    double alpha;
    std::uint32_t bonds;
  };
  struct Entry {
    double length;
    std::uint64_t seq;
    std::int64_t node;
    bool operator>(const Entry& o) const {
      return length != o.length ? length > o.length : seq > o.seq;
    }
  };

  void push(Node n);
  DirectedPath materialize(std::int64_t node) const;

  const MetricGraph* g_;
  PathClass cls_;
  double limit_;
  std::vector<bool> start_ok_, end_ok_;
  std::vector<Node> nodes_;
  std::vector<VertexId> trivial_;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap_;
  std::uint64_t seq_ = 0;
};

std::vector<DirectedPath> enumerate(const MetricGraph& g, const PathClass& cls, double L_max);

// One path per line: `length alpha bond_ids...`, bond id = 2 * edge + (backward ? 1 : 0).
void dump_paths(std::ostream& os, const std::vector<DirectedPath>& paths);

}  // namespace graphheat
