#include "fairmatch/mcf.hpp"

#include <limits>
#include <ostream>
#include <queue>

namespace fairmatch::mcf {

namespace {
constexpr std::int64_t kUnreached = std::numeric_limits<std::int64_t>::max();
// Path costs are sums of at most num_nodes arc costs; keep them below 2^62.
constexpr std::int64_t kCostBudget = std::int64_t{1} << 62;
}  // namespace

FlowNetwork::FlowNetwork(Index num_nodes)
    : supply_(static_cast<size_t>(num_nodes), 0) {}

void FlowNetwork::check_node(Index node) const {
  if (node < 0 || node >= num_nodes()) {
    throw Error("flow node id " + std::to_string(node) + " out of range");
  }
}

Index FlowNetwork::add_node() {
  supply_.push_back(0);
  return num_nodes() - 1;
}

Index FlowNetwork::add_arc(Index from, Index to, std::int64_t capacity,
                           std::int64_t cost) {
  check_node(from);
  check_node(to);
  if (from == to) throw Error("self-loop at flow node " + std::to_string(from));
  if (capacity < 0) throw Error("negative arc capacity");
  arcs_.push_back({from, to, capacity, cost});
  return num_arcs() - 1;
}

void FlowNetwork::set_supply(Index node, std::int64_t supply) {
  check_node(node);
  supply_[node] = supply;
}

std::int64_t FlowNetwork::total_supply() const {
  std::int64_t s = 0;
  for (auto v : supply_) if (v > 0) s += v;
  return s;
}

namespace {

class Residual {
 public:
  struct Edge {
    Index to;
    std::int64_t cap;
    std::int64_t cost;
  };

  explicit Residual(Index nodes) : adj_(static_cast<size_t>(nodes)) {}

  Index add(Index from, Index to, std::int64_t cap, std::int64_t cost) {
    Index id = static_cast<Index>(edges_.size());
    edges_.push_back({to, cap, cost});
    edges_.push_back({from, 0, -cost});
    adj_[from].push_back(id);
    adj_[to].push_back(id + 1);
    return id;
  }

  Index nodes() const { return static_cast<Index>(adj_.size()); }

  std::vector<Edge> edges_;
  std::vector<std::vector<Index>> adj_;
};

class SuccessiveShortestPaths {
 public:
  SuccessiveShortestPaths(Residual& g, Index source, Index sink)
      : g_(g), s_(source), t_(sink), n_(g.nodes()),
        potential_(static_cast<size_t>(n_), 0),
        dist_(static_cast<size_t>(n_)),
        cursor_(static_cast<size_t>(n_)),
        dead_(static_cast<size_t>(n_)),
        on_path_(static_cast<size_t>(n_)) {}

  std::int64_t run() {
    init_potentials();
    std::int64_t flow = 0;
    while (dijkstra()) {
      for (Index v = 0; v < n_; ++v)
        if (dist_[v] != kUnreached) potential_[v] += dist_[v];
      // Saturate every shortest path at this potential level.
      std::fill(cursor_.begin(), cursor_.end(), 0);
      std::fill(dead_.begin(), dead_.end(), false);
      while (true) {
        std::int64_t pushed = augment(s_, std::numeric_limits<std::int64_t>::max());
        if (pushed == 0) break;
        flow += pushed;
      }
    }
    return flow;
  }

 private:
  // Queue-based Bellman-Ford from a virtual root joined to every node, so a
  // negative cycle anywhere in the network is caught.
  void init_potentials() {
    std::vector<std::int64_t> d(static_cast<size_t>(n_), 0);
    std::vector<char> queued(static_cast<size_t>(n_), 1);
    std::vector<Index> relax_count(static_cast<size_t>(n_), 0);
    std::queue<Index> q;
    for (Index v = 0; v < n_; ++v) q.push(v);
    while (!q.empty()) {
      Index u = q.front();
      q.pop();
      queued[u] = 0;
      for (Index e : g_.adj_[u]) {
        const auto& edge = g_.edges_[e];
        if (edge.cap <= 0) continue;
        std::int64_t nd = d[u] + edge.cost;
        if (nd < d[edge.to]) {
          d[edge.to] = nd;
          if (!queued[edge.to]) {
            if (++relax_count[edge.to] > n_) {
              throw Error("flow network contains a negative-cost cycle");
            }
            queued[edge.to] = 1;
            q.push(edge.to);
          }
        }
      }
    }
    for (Index v = 0; v < n_; ++v) potential_[v] = d[v];
  }

  bool dijkstra() {
    std::fill(dist_.begin(), dist_.end(), kUnreached);
    using Item = std::pair<std::int64_t, Index>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist_[s_] = 0;
    heap.emplace(0, s_);
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (d != dist_[u]) continue;
      for (Index e : g_.adj_[u]) {
        const auto& edge = g_.edges_[e];
        if (edge.cap <= 0) continue;
        std::int64_t reduced = edge.cost + potential_[u] - potential_[edge.to];
        std::int64_t nd = d + reduced;
        if (nd < dist_[edge.to]) {
          dist_[edge.to] = nd;
          heap.emplace(nd, edge.to);
        }
      }
    }
    return dist_[t_] != kUnreached;
  }

  // Depth-first push along zero reduced-cost arcs, first arc first.
  std::int64_t augment(Index u, std::int64_t limit) {
    if (u == t_) return limit;
    on_path_[u] = true;
    auto& adj = g_.adj_[u];
    for (size_t& k = cursor_[u]; k < adj.size(); ++k) {
      Index e = adj[k];
      auto& edge = g_.edges_[e];
      if (edge.cap <= 0 || dead_[edge.to] || on_path_[edge.to]) continue;
      if (edge.cost + potential_[u] - potential_[edge.to] != 0) continue;
      std::int64_t pushed = augment(edge.to, std::min(limit, edge.cap));
      if (pushed > 0) {
        edge.cap -= pushed;
        g_.edges_[e ^ 1].cap += pushed;
        on_path_[u] = false;
        return pushed;
      }
    }
    on_path_[u] = false;
    dead_[u] = true;
    return 0;
  }

  Residual& g_;
  Index s_, t_, n_;
  std::vector<std::int64_t> potential_, dist_;
  std::vector<size_t> cursor_;
  std::vector<char> dead_, on_path_;
};

}  // namespace

FlowPlan solve_min_cost_flow(const FlowNetwork& network) {
  const Index n = network.num_nodes();
  std::int64_t max_cost = 0;
  for (const Arc& a : network.arcs()) {
    std::int64_t c = a.cost < 0 ? -a.cost : a.cost;
    if (c > max_cost) max_cost = c;
  }
  if (max_cost > 0 && max_cost > kCostBudget / (n + 2)) {
    throw Error("arc costs too large for 64-bit path sums");
  }

  const Index source = n;
  const Index sink = n + 1;
  Residual g(n + 2);
  std::vector<Index> ids;
  ids.reserve(network.arcs().size());
  for (const Arc& a : network.arcs()) ids.push_back(g.add(a.from, a.to, a.capacity, a.cost));
  for (Index v = 0; v < n; ++v) {
    std::int64_t s = network.supply(v);
    if (s > 0) g.add(source, v, s, 0);
    if (s < 0) g.add(v, sink, -s, 0);
  }

  SuccessiveShortestPaths ssp(g, source, sink);
  FlowPlan plan;
  plan.total_flow = ssp.run();
  plan.flow.resize(ids.size());
  for (size_t k = 0; k < ids.size(); ++k) {
    plan.flow[k] = g.edges_[ids[k] + 1].cap;
    plan.total_cost += plan.flow[k] * network.arc(static_cast<Index>(k)).cost;
  }
  return plan;
}

bool has_negative_residual_cycle(const FlowNetwork& network, const FlowPlan& plan) {
  // Super source and sink join the graph so that rerouting unused supply
  // counts as a cycle too.
  const Index n = network.num_nodes() + 2;
  const Index ss = n - 2;
  const Index tt = n - 1;
  struct E { Index from, to; std::int64_t cost; };
  std::vector<E> residual;
  std::vector<std::int64_t> net(static_cast<size_t>(network.num_nodes()), 0);
  for (Index k = 0; k < network.num_arcs(); ++k) {
    const Arc& a = network.arc(k);
    if (plan.flow[k] < a.capacity) residual.push_back({a.from, a.to, a.cost});
    if (plan.flow[k] > 0) residual.push_back({a.to, a.from, -a.cost});
    net[a.from] += plan.flow[k];
    net[a.to] -= plan.flow[k];
  }
  for (Index v = 0; v < network.num_nodes(); ++v) {
    const std::int64_t s = network.supply(v);
    if (s > 0) {
      if (net[v] < s) residual.push_back({ss, v, 0});
      if (net[v] > 0) residual.push_back({v, ss, 0});
    } else if (s < 0) {
      if (net[v] > s) residual.push_back({v, tt, 0});
      if (net[v] < 0) residual.push_back({tt, v, 0});
    }
  }
  std::vector<std::int64_t> d(static_cast<size_t>(n), 0);
  for (Index round = 0; round <= n; ++round) {
    bool changed = false;
    for (const E& e : residual) {
      if (d[e.from] + e.cost < d[e.to]) {
        d[e.to] = d[e.from] + e.cost;
        changed = true;
      }
    }
    if (!changed) return false;
  }
  return true;
}

bool is_valid_plan(const FlowNetwork& network, const FlowPlan& plan) {
  if (static_cast<Index>(plan.flow.size()) != network.num_arcs()) return false;
  std::vector<std::int64_t> net(static_cast<size_t>(network.num_nodes()), 0);
  for (Index k = 0; k < network.num_arcs(); ++k) {
    const Arc& a = network.arc(k);
    if (plan.flow[k] < 0 || plan.flow[k] > a.capacity) return false;
    net[a.from] += plan.flow[k];
    net[a.to] -= plan.flow[k];
  }
  std::int64_t routed = 0;
  for (Index v = 0; v < network.num_nodes(); ++v) {
    std::int64_t s = network.supply(v);
    if (s >= 0 && (net[v] < 0 || net[v] > s)) return false;
    if (s < 0 && (net[v] > 0 || net[v] < s)) return false;
    if (s > 0) routed += net[v];
  }
  return routed == plan.total_flow;
}

void write_dimacs(const FlowNetwork& network, std::ostream& out) {
  out << "c min-cost flow network\n";
  out << "p min " << network.num_nodes() << " " << network.num_arcs() << "\n";
  for (Index v = 0; v < network.num_nodes(); ++v) {
    if (network.supply(v) != 0) out << "n " << v + 1 << " " << network.supply(v) << "\n";
  }
  for (const Arc& a : network.arcs()) {
    out << "a " << a.from + 1 << " " << a.to + 1 << " 0 " << a.capacity << " "
        << a.cost << "\n";
  }
}

}  // namespace fairmatch::mcf
