#pragma once

// Depth-first walk engine shared by the path-sum evaluators.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

#include "graphheat/graph.hpp"

namespace graphheat::detail {

struct BondTable {
  explicit BondTable(const MetricGraph& g);

  std::size_t size() const { return length.size(); }
  static EdgeId edge_of(std::uint32_t bond) { return bond / 2; }

  std::vector<double> length;
  std::vector<VertexId> head;
  std::vector<bool> head_dirichlet;
  std::vector<std::uint32_t> offset;  // transitions of bond b live in [offset[b], offset[b + 1])
  std::vector<std::uint32_t> next;
  std::vector<double> beta;
  std::vector<std::vector<std::uint32_t>> leaving;  // bonds leaving each vertex
  double rho = 1.0;                                 // max over bonds of the sum of |beta|
  double l_min = 0.0;
  double l_max = 0.0;
};

struct Walk {
  std::uint32_t bond = 0;
  std::uint32_t bonds = 0;
  double length = 0.0;
  double alpha = 1.0;
  double marked = 0.0;  // traversals of a distinguished edge
  double aux = 0.0;     // evaluator-specific payload carried unchanged
};

// Walks cut off past the length limit, binned by length so that tails can be bounded per bin.
class Frontier {
 public:
  Frontier(double base, double width, std::size_t bins)
      : base_(base), width_(width), mass_(bins, 0.0), marked_(bins, 0.0) {}

  void add(const Walk& w) {
    std::size_t i = static_cast<std::size_t>((w.length - base_) / width_);
    if (w.length < base_) i = 0;
    if (i >= mass_.size()) i = mass_.size() - 1;
    mass_[i] += std::abs(w.alpha);
    marked_[i] += std::abs(w.alpha) * w.marked;
    ++count_;
  }
  void merge(const Frontier& o) {
    for (std::size_t i = 0; i < mass_.size(); ++i) {
      mass_[i] += o.mass_[i];
      marked_[i] += o.marked_[i];
    }
    count_ += o.count_;
  }
  std::size_t bins() const { return mass_.size(); }
  // Lower length bound of bin i.
  double floor(std::size_t i) const { return base_ + static_cast<double>(i) * width_; }
  double mass(std::size_t i) const { return mass_[i]; }
  double marked(std::size_t i) const { return marked_[i]; }
  std::size_t count() const { return count_; }

 private:
  double base_, width_;
  std::vector<double> mass_, marked_;
  std::size_t count_ = 0;
};

// Compensated sum with an a-priori rounding estimate.
struct Accumulator {
  double sum = 0.0, comp = 0.0, abs_sum = 0.0, rounding = 0.0;
  std::size_t terms = 0;

  void add(double term, std::uint32_t depth) {
    const double s = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - s) + term : (term - s) + sum;
    sum = s;
    const double a = std::abs(term);
    abs_sum += a;
    rounding += a * (depth + 8) * std::numeric_limits<double>::epsilon();
    ++terms;
  }
  void merge(const Accumulator& o) {
    const double s = sum + o.sum;
    comp += std::abs(sum) >= std::abs(o.sum) ? (sum - s) + o.sum : (o.sum - s) + sum;
    sum = s;
    comp += o.comp;
    abs_sum += o.abs_sum;
    rounding += o.rounding;
    terms += o.terms;
  }
  double value() const { return sum + comp; }
  double rounding_bound() const {
    return rounding + 4.0 * std::numeric_limits<double>::epsilon() * abs_sum;
  }
};

struct BudgetHit {};

// sum_{k>=0} rho^(k + shift) * (k if weighted else 1) * phi(x + k * step), with a geometric
// remainder once the term ratio falls below one. phi must be positive, decreasing, log-concave.
template <class Phi>
double tail_series(double rho, double step, double x, int shift, bool weighted, Phi phi) {
  const double inf = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  double power = std::pow(rho, shift);
  double prev_term = -1.0;
  for (int k = 0; k < 100000; ++k) {
    const double w = weighted ? static_cast<double>(k) : 1.0;
    const double f = phi(x + k * step);
    const double term = power * w * f;
    sum += term;
    if (f == 0.0) return sum;
    if (k >= 2 && prev_term > 0.0) {
      const double fn = phi(x + (k + 1) * step);
      const double wn = weighted ? static_cast<double>(k + 1) : 1.0;
      const double r = rho * (wn / w) * (fn / f);
      if (r < 1.0 && term * r / (1.0 - r) <= 1e-6 * sum) return sum + term * r / (1.0 - r);
    }
    prev_term = term;
    power *= rho;
    if (!std::isfinite(power)) return inf;
  }
  return inf;
}

struct WalkRun {
  Accumulator acc;
  Frontier frontier;
  std::size_t visited = 0;
};

// Visits every walk reachable from `roots` with length <= limit. `visit(walk, acc)` adds terms;
// `mark(bond)` says whether a bond counts toward Walk::marked. Work is split over roots and
// merged in root order, so results do not depend on the thread count.
template <class Visit, class Mark>
WalkRun run_walks(const BondTable& T, std::vector<Walk> roots, double limit, Visit visit, Mark mark,
                  std::size_t max_visits, unsigned threads) {
  const std::size_t kBins = 64;
  const double width = std::max(T.l_max, T.l_min) / static_cast<double>(kBins - 1);
  auto fresh_frontier = [&] { return Frontier(limit, width, kBins); };

  WalkRun out{Accumulator{}, fresh_frontier(), 0};

  auto children = [&](const Walk& w, auto&& emit) {
    for (std::uint32_t k = T.offset[w.bond]; k < T.offset[w.bond + 1]; ++k) {
      const double a = w.alpha * T.beta[k];
      if (a == 0.0) continue;
      const std::uint32_t b = T.next[k];
      emit(Walk{b, w.bonds + 1, w.length + T.length[b], a, w.marked + (mark(b) ? 1.0 : 0.0), w.aux});
    }
  };

  // Expand breadth-first until there are enough independent roots.
  std::vector<Walk> level;
  for (const Walk& r : roots) (r.length > limit ? out.frontier.add(r) : level.push_back(r));
  const std::size_t kMinSplits = 64;
  while (!level.empty() && level.size() < kMinSplits) {
    std::vector<Walk> deeper;
    for (const Walk& w : level) {
      ++out.visited;
      visit(w, out.acc);
      children(w, [&](const Walk& c) { (c.length > limit ? out.frontier.add(c) : deeper.push_back(c)); });
    }
    level.swap(deeper);
    if (out.visited > max_visits) throw BudgetHit{};
  }

  std::vector<WalkRun> parts(level.size(), WalkRun{Accumulator{}, fresh_frontier(), 0});
  std::atomic<std::size_t> next_split{0};
  std::atomic<std::size_t> total{out.visited};
  std::atomic<bool> exceeded{false};
  auto worker = [&] {
    std::vector<Walk> stack;
    for (;;) {
      const std::size_t i = next_split.fetch_add(1);
      if (i >= level.size() || exceeded.load(std::memory_order_relaxed)) return;
      WalkRun& part = parts[i];
      stack.assign(1, level[i]);
      std::size_t local = 0;
      while (!stack.empty()) {
        const Walk w = stack.back();
        stack.pop_back();
        visit(w, part.acc);
        children(w, [&](const Walk& c) { (c.length > limit ? part.frontier.add(c) : stack.push_back(c)); });
        if (++local == 4096) {
          if (total.fetch_add(local) + local > max_visits) {
            exceeded = true;
            return;
          }
          part.visited += local;
          local = 0;
        }
      }
      part.visited += local;
      total.fetch_add(local);
    }
  };
  unsigned n = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, level.size())));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
  }
  if (exceeded || total.load() > max_visits) throw BudgetHit{};
  for (const WalkRun& p : parts) {
    out.acc.merge(p.acc);
    out.frontier.merge(p.frontier);
    out.visited += p.visited;
  }
  return out;
}

// Smallest L >= lo with phi(L) <= target, for phi decreasing; bisection on a doubling bracket.
template <class Phi>
double solve_decreasing(Phi phi, double lo, double target) {
  if (phi(lo) <= target) return lo;
  double hi = 2.0 * lo + 1.0;
  while (phi(hi) > target) hi *= 2.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) > target ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace graphheat::detail
