#pragma once

#include "fairmatch/core.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace fairmatch::mcf {

struct Arc {
  Index from;
  Index to;
  std::int64_t capacity;
  std::int64_t cost;
};

/// Directed network with integer capacities and costs. Positive supply marks
/// a source, negative supply a demand.
class FlowNetwork {
 public:
  explicit FlowNetwork(Index num_nodes = 0);

  Index add_node();
  Index add_arc(Index from, Index to, std::int64_t capacity, std::int64_t cost);
  void set_supply(Index node, std::int64_t supply);

  Index num_nodes() const { return static_cast<Index>(supply_.size()); }
  Index num_arcs() const { return static_cast<Index>(arcs_.size()); }
  const Arc& arc(Index a) const { return arcs_.at(a); }
  const std::vector<Arc>& arcs() const { return arcs_; }
  std::int64_t supply(Index node) const { return supply_.at(node); }
  const std::vector<std::int64_t>& supplies() const { return supply_; }
  /// Sum of positive supplies.
  std::int64_t total_supply() const;

 private:
  void check_node(Index node) const;

  std::vector<Arc> arcs_;
  std::vector<std::int64_t> supply_;
};

struct FlowPlan {
  std::vector<std::int64_t> flow;  // per arc
  std::int64_t total_flow = 0;
  std::int64_t total_cost = 0;
};

/// Min-cost max-flow by successive shortest paths with node potentials.
/// Routes as much of the supply as possible; total_flow may fall short of
/// total_supply(). Equal-cost paths are taken in arc-insertion order.
FlowPlan solve_min_cost_flow(const FlowNetwork& network);

/// True when the residual graph of `plan` holds a negative-cost cycle.
bool has_negative_residual_cycle(const FlowNetwork& network, const FlowPlan& plan);

/// Capacity bounds and conservation against the supplies (nodes may keep
/// unrouted supply/demand, but never more than their own).
bool is_valid_plan(const FlowNetwork& network, const FlowPlan& plan);

/// DIMACS min-cost-flow text ("p min" problem line, 1-based node ids).
void write_dimacs(const FlowNetwork& network, std::ostream& out);

}  // namespace fairmatch::mcf
