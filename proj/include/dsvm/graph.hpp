#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "dsvm/linalg.hpp"

namespace dsvm {

using Edge = std::pair<NodeId, NodeId>;

// Undirected, connected communication graph. Node ids are dense and 0-based;
// neighbor lists are sorted ascending. Immutable after construction.
class Network {
 public:
  // Validates symmetry, absence of self loops, connectivity and |B_v| >= 1
  // (a single isolated node is accepted as the centralized special case).
  Network(int node_count, const std::vector<Edge>& edges);

  int size() const noexcept { return static_cast<int>(neighbors_.size()); }
  const std::vector<NodeId>& neighbors(NodeId v) const;
  int degree(NodeId v) const { return static_cast<int>(neighbors(v).size()); }
  bool adjacent(NodeId u, NodeId v) const;

  // Undirected edges with u < v, lexicographically ordered.
  std::vector<Edge> edges() const;
  int edge_count() const;

  std::string describe() const;

 private:
  std::vector<std::vector<NodeId>> neighbors_;
};

Network build_complete(int n);
// Circulant k-regular graph: each node links to its k/2 nearest neighbors on
// either side of a ring, plus the diameter chord when k is odd. The seed is
// accepted for interface stability; the base construction is deterministic.
Network build_regular(int n, int k, std::uint64_t seed = 0);
Network build_from_edge_list(int n, const std::vector<Edge>& edges);

// Edge-list text format: "n m" on the first line, then m lines "u v".
Network read_edge_list(const std::filesystem::path& path);
void write_edge_list(const Network& net, const std::filesystem::path& path);

double normalized_degree(const Network& net, NodeId v);
double network_degree(const Network& net);

// Nodes ordered by normalized degree (descending for `highest`), ties broken
// by ascending id; the first `count` are returned.
std::vector<NodeId> nodes_by_degree(const Network& net, int count, bool highest);

}  // namespace dsvm
