#pragma once

// Exact network flow on small graphs with rational capacities and costs.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <limits>
#include <optional>
#include <vector>

#include "nonarch/padic.hpp"

namespace nonarch {

class FlowNetwork {
 public:
  explicit FlowNetwork(std::size_t nodes) : adj_(nodes) {}

  /// Adds a directed edge; returns its index.
  std::size_t add_edge(std::size_t from, std::size_t to, const Scalar& capacity, const Scalar& cost = Scalar(0)) {
    const std::size_t id = edges_.size();
    edges_.push_back({to, capacity, cost});
    adj_[from].push_back(id);
    edges_.push_back({from, Scalar(0), -cost});
    adj_[to].push_back(id + 1);
    return id;
  }

  /// Flow currently carried by the edge with the given index.
  Scalar flow(std::size_t id) const { return edges_[id + 1].residual; }

  /// Edmonds-Karp maximum flow.
  Scalar max_flow(std::size_t s, std::size_t t) {
    Scalar total;
    while (true) {
      std::vector<std::optional<std::size_t>> via(adj_.size());
      std::vector<bool> seen(adj_.size());
      std::deque<std::size_t> queue{s};
      seen[s] = true;
      while (!queue.empty() && !seen[t]) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t id : adj_[u]) {
          const Edge& e = edges_[id];
          if (seen[e.to] || e.residual.sign() <= 0) continue;
          seen[e.to] = true;
          via[e.to] = id;
          queue.push_back(e.to);
        }
      }
      if (!seen[t]) return total;
      total += augment(s, t, via);
    }
  }

  /// Successive shortest paths (Bellman-Ford) until demand units are sent
  /// or no path remains. Returns (flow sent, total cost).
  std::pair<Scalar, Scalar> min_cost_flow(std::size_t s, std::size_t t, const Scalar& demand) {
    Scalar sent, cost;
    while (sent < demand) {
      std::vector<std::optional<Scalar>> dist(adj_.size());
      std::vector<std::optional<std::size_t>> via(adj_.size());
      dist[s] = Scalar(0);
      for (std::size_t round = 0; round + 1 < adj_.size(); ++round) {
        bool changed = false;
        for (std::size_t u = 0; u < adj_.size(); ++u) {
          if (!dist[u]) continue;
          for (std::size_t id : adj_[u]) {
            const Edge& e = edges_[id];
            if (e.residual.sign() <= 0) continue;
            const Scalar cand = *dist[u] + e.cost;
            if (!dist[e.to] || cand < *dist[e.to]) {
              dist[e.to] = cand;
              via[e.to] = id;
              changed = true;
            }
          }
        }
        if (!changed) break;
      }
      if (!dist[t]) break;
      const Scalar pushed = augment(s, t, via, demand - sent);
      sent += pushed;
      cost += pushed * *dist[t];
    }
    return {sent, cost};
  }

 private:
  struct Edge {
    std::size_t to;
    Scalar residual;
    Scalar cost;
  };

  std::size_t tail(std::size_t id) const { return edges_[id ^ 1U].to; }

  Scalar augment(std::size_t s, std::size_t t, const std::vector<std::optional<std::size_t>>& via,
                 std::optional<Scalar> cap = std::nullopt) {
    Scalar bottleneck;
    bool first = true;
    for (std::size_t v = t; v != s; v = tail(*via[v])) {
      const Scalar& r = edges_[*via[v]].residual;
      if (first || r < bottleneck) bottleneck = r;
      first = false;
    }
    if (cap && *cap < bottleneck) bottleneck = *cap;
    for (std::size_t v = t; v != s; v = tail(*via[v])) {
      edges_[*via[v]].residual -= bottleneck;
      edges_[*via[v] ^ 1U].residual += bottleneck;
    }
    return bottleneck;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<Edge> edges_;
};

}  // namespace nonarch
