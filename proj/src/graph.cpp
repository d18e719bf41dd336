#include "dsvm/graph.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include "dsvm/error.hpp"

namespace dsvm {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_topology: return "invalid-topology";
    case ErrorKind::invalid_edge: return "invalid-edge";
    case ErrorKind::invalid_node: return "invalid-node";
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::ingestion: return "ingestion";
    case ErrorKind::partition: return "partition";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::degenerate_data: return "degenerate-data";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::oracle_refused: return "oracle-refused";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

Network::Network(int node_count, const std::vector<Edge>& edges) {
  if (node_count < 1) {
    throw Error(ErrorKind::invalid_topology, "node count must be positive");
  }
  neighbors_.assign(static_cast<std::size_t>(node_count), {});
  std::set<Edge> seen;
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= node_count || v >= node_count) {
      throw Error(ErrorKind::invalid_edge, "endpoint out of range in edge (" + std::to_string(u) +
                                               "," + std::to_string(v) + ")");
    }
    if (u == v) {
      throw Error(ErrorKind::invalid_edge, "self loop at node " + std::to_string(u));
    }
    if (!seen.insert({std::min(u, v), std::max(u, v)}).second) {
      throw Error(ErrorKind::invalid_edge, "duplicate edge (" + std::to_string(u) + "," +
                                               std::to_string(v) + ")");
    }
    neighbors_[u].push_back(v);
    neighbors_[v].push_back(u);
  }
  for (auto& list : neighbors_) std::sort(list.begin(), list.end());

  if (node_count == 1) return;

  for (int v = 0; v < node_count; ++v) {
    if (neighbors_[v].empty()) {
      throw Error(ErrorKind::invalid_topology, "node " + std::to_string(v) + " is isolated");
    }
  }
  std::vector<char> visited(neighbors_.size(), 0);
  std::queue<NodeId> frontier;
  frontier.push(0);
  visited[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const NodeId v = frontier.front();
    frontier.pop();
    for (NodeId u : neighbors_[v]) {
      if (!visited[u]) {
        visited[u] = 1;
        ++reached;
        frontier.push(u);
      }
    }
  }
  if (reached != node_count) {
    throw Error(ErrorKind::invalid_topology, "graph is disconnected (" + std::to_string(reached) +
                                                 " of " + std::to_string(node_count) +
                                                 " nodes reachable from node 0)");
  }
}

const std::vector<NodeId>& Network::neighbors(NodeId v) const {
  if (v < 0 || v >= size()) {
    throw Error(ErrorKind::invalid_node, "node id " + std::to_string(v) + " out of range");
  }
  return neighbors_[v];
}

bool Network::adjacent(NodeId u, NodeId v) const {
  const auto& list = neighbors(u);
  return std::binary_search(list.begin(), list.end(), v);
}

std::vector<Edge> Network::edges() const {
  std::vector<Edge> out;
  for (NodeId v = 0; v < size(); ++v) {
    for (NodeId u : neighbors_[v]) {
      if (v < u) out.emplace_back(v, u);
    }
  }
  return out;
}

int Network::edge_count() const {
  std::size_t twice = 0;
  for (const auto& list : neighbors_) twice += list.size();
  return static_cast<int>(twice / 2);
}

std::string Network::describe() const {
  std::ostringstream os;
  os << "V=" << size() << " E=" << edge_count() << " degree=" << network_degree(*this);
  return os.str();
}

Network build_complete(int n) {
  if (n < 2) {
    throw Error(ErrorKind::invalid_topology, "complete graph needs at least 2 nodes");
  }
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  }
  return Network(n, edges);
}

Network build_regular(int n, int k, std::uint64_t /*seed*/) {
  if (n < 2 || k < 1 || k >= n || (static_cast<long>(n) * k) % 2 != 0) {
    throw Error(ErrorKind::invalid_topology, "no " + std::to_string(k) + "-regular graph on " +
                                                 std::to_string(n) + " nodes");
  }
  // Odd k forces even n (n*k even), so the diameter chord v <-> v+n/2 exists.
  std::set<Edge> edges;
  for (int v = 0; v < n; ++v) {
    for (int offset = 1; offset <= k / 2; ++offset) {
      const int u = (v + offset) % n;
      edges.insert({std::min(u, v), std::max(u, v)});
    }
    if (k % 2 == 1) {
      const int u = (v + n / 2) % n;
      edges.insert({std::min(u, v), std::max(u, v)});
    }
  }
  // Connected for every k >= 2; k == 1 is connected only when n == 2 and the
  // constructor rejects the rest.
  return Network(n, std::vector<Edge>(edges.begin(), edges.end()));
}

Network build_from_edge_list(int n, const std::vector<Edge>& edges) { return Network(n, edges); }

Network read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open edge list " + path.string());
  int n = 0;
  int m = 0;
  if (!(in >> n >> m) || m < 0) {
    throw Error(ErrorKind::invalid_topology, "malformed header in " + path.string());
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    int u = 0;
    int v = 0;
    if (!(in >> u >> v)) {
      throw Error(ErrorKind::invalid_edge, "expected " + std::to_string(m) + " edges in " +
                                               path.string() + ", read " + std::to_string(i));
    }
    edges.emplace_back(u, v);
  }
  return Network(n, edges);
}

void write_edge_list(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  const auto edges = net.edges();
  out << net.size() << ' ' << edges.size() << '\n';
  for (auto [u, v] : edges) out << u << ' ' << v << '\n';
}

double normalized_degree(const Network& net, NodeId v) {
  const int deg = net.degree(v);
  if (net.size() == 1) return 1.0;
  return static_cast<double>(deg) / static_cast<double>(net.size() - 1);
}

double network_degree(const Network& net) {
  double sum = 0.0;
  for (NodeId v = 0; v < net.size(); ++v) sum += normalized_degree(net, v);
  return sum / static_cast<double>(net.size());
}

std::vector<NodeId> nodes_by_degree(const Network& net, int count, bool highest) {
  if (count < 0 || count > net.size()) {
    throw Error(ErrorKind::invalid_parameter, "cannot select " + std::to_string(count) +
                                                  " of " + std::to_string(net.size()) + " nodes");
  }
  std::vector<NodeId> order(static_cast<std::size_t>(net.size()));
  for (NodeId v = 0; v < net.size(); ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return highest ? net.degree(a) > net.degree(b) : net.degree(a) < net.degree(b);
  });
  order.resize(static_cast<std::size_t>(count));
  return order;
}

}  // namespace dsvm
