#pragma once

#include <optional>
#include <vector>

namespace mvdyn {

/// Bipartite graph given by adjacency lists from left vertices to right
/// vertices. Neighbors are visited in list order, so results are deterministic.
using BipartiteAdjacency = std::vector<std::vector<int>>;

struct Matching {
  std::vector<int> left_to_right;  // -1 when unmatched
  std::vector<int> right_to_left;
  int size = 0;
};

namespace detail {

/// Free neighbors are taken before any rerouting, so when the identity is a
/// perfect matching of a graph whose lists are ascending, it is the one found.
inline bool augment(const BipartiteAdjacency& adj, int u, std::vector<bool>& visited, Matching& m) {
  for (int v : adj[u]) {
    if (m.right_to_left[v] < 0) {
      visited[v] = true;
      m.left_to_right[u] = v;
      m.right_to_left[v] = u;
      return true;
    }
  }
  for (int v : adj[u]) {
    if (visited[v]) continue;
    visited[v] = true;
    if (m.right_to_left[v] < 0 || augment(adj, m.right_to_left[v], visited, m)) {
      m.left_to_right[u] = v;
      m.right_to_left[v] = u;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Maximum matching by repeated augmenting-path search (Kuhn).
inline Matching maximum_matching(const BipartiteAdjacency& adj, int right_count) {
  Matching m;
  m.left_to_right.assign(adj.size(), -1);
  m.right_to_left.assign(right_count, -1);
  for (int u = 0; u < static_cast<int>(adj.size()); ++u) {
    std::vector<bool> visited(right_count, false);
    if (detail::augment(adj, u, visited, m)) ++m.size;
  }
  return m;
}

inline std::optional<std::vector<int>> perfect_matching(const BipartiteAdjacency& adj, int right_count) {
  if (static_cast<int>(adj.size()) != right_count) return std::nullopt;
  Matching m = maximum_matching(adj, right_count);
  if (m.size != right_count) return std::nullopt;
  return m.left_to_right;
}

/// A left vertex set S with |N(S)| < |S|, taken from the alternating-path
/// closure of an unmatched left vertex. Empty when the matching saturates
/// the left side.
inline std::vector<int> hall_violator(const BipartiteAdjacency& adj, int right_count, const Matching& m) {
  int start = -1;
  for (int u = 0; u < static_cast<int>(adj.size()); ++u)
    if (m.left_to_right[u] < 0) {
      start = u;
      break;
    }
  if (start < 0) return {};
  std::vector<bool> in_left(adj.size(), false), in_right(right_count, false);
  std::vector<int> stack{start};
  in_left[start] = true;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (in_right[v]) continue;
      in_right[v] = true;
      const int w = m.right_to_left[v];
      if (w >= 0 && !in_left[w]) {
        in_left[w] = true;
        stack.push_back(w);
      }
    }
  }
  std::vector<int> out;
  for (int u = 0; u < static_cast<int>(adj.size()); ++u)
    if (in_left[u]) out.push_back(u);
  return out;
}

}  // namespace mvdyn
