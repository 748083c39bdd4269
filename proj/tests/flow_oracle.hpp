#pragma once

#include "fairmatch/generator.hpp"
#include "fairmatch/mcf.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace fixtures {

using namespace fairmatch;
using mcf::FlowNetwork;

// Exhaustive search over every integral flow vector: maximise the routed
// supply, then minimise cost.
struct FlowOracle {
  std::int64_t flow = 0;
  std::int64_t cost = 0;
};

inline FlowOracle enumerate_flows(const FlowNetwork& net) {
  const Index m = net.num_arcs();
  std::vector<std::int64_t> f(static_cast<size_t>(m), 0);
  FlowOracle best;
  bool any = false;
  std::function<void(Index)> rec = [&](Index k) {
    if (k == m) {
      std::vector<std::int64_t> out(static_cast<size_t>(net.num_nodes()), 0);
      std::int64_t cost = 0;
      for (Index a = 0; a < m; ++a) {
        out[net.arc(a).from] += f[a];
        out[net.arc(a).to] -= f[a];
        cost += f[a] * net.arc(a).cost;
      }
      std::int64_t routed = 0;
      for (Index v = 0; v < net.num_nodes(); ++v) {
        const std::int64_t s = net.supply(v);
        if (s >= 0 && (out[v] < 0 || out[v] > s)) return;
        if (s < 0 && (out[v] > 0 || out[v] < s)) return;
        if (s > 0) routed += out[v];
      }
      if (!any || routed > best.flow || (routed == best.flow && cost < best.cost)) {
        best = {routed, cost};
        any = true;
      }
      return;
    }
    for (std::int64_t x = 0; x <= net.arc(k).capacity; ++x) {
      f[k] = x;
      rec(k + 1);
    }
    f[k] = 0;
  };
  rec(0);
  return best;
}

// Random network; with negative costs the arcs only go forward (no
// directed cycles).
inline FlowNetwork random_network(std::uint64_t seed) {
  Rng rng(seed);
  const bool negative = seed % 2 == 0;
  const Index n = rng.integer(2, 5);
  FlowNetwork net(n);
  const Index arcs = rng.integer(1, 7);
  for (Index k = 0; k < arcs; ++k) {
    Index u = rng.integer(0, n - 1);
    Index v = rng.integer(0, n - 1);
    if (u == v) continue;
    if (negative && u > v) std::swap(u, v);
    net.add_arc(u, v, rng.integer(0, 2), negative ? rng.integer(-5, 5) : rng.integer(0, 6));
  }
  for (Index v = 0; v < n; ++v) net.set_supply(v, rng.integer(-2, 2));
  return net;
}

}  // namespace fixtures
