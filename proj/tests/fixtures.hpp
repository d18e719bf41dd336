#pragma once

#include <vector>

#include "dsvm/data.hpp"
#include "dsvm/graph.hpp"

namespace fixture {

// Gaussian data for a network with the given per-node sizes.
inline std::vector<dsvm::NodeData> gaussian_nodes(const dsvm::Network& net, int n_train, int n_test,
                                                  std::uint64_t seed, double spread = 0.0) {
  dsvm::GaussianSpec spec;
  if (spread > 0.0) {
    spec.mean_pos = dsvm::Vector{{-spread, -spread}};
    spec.mean_neg = dsvm::Vector{{spread, spread}};
    spec.cov = 0.1 * dsvm::Matrix::Identity(2, 2);
  }
  const int v = net.size();
  auto [train, test] = dsvm::gen_gaussian(v * ((n_train + 1) / 2), v * ((n_test + 1) / 2), spec, seed);
  return dsvm::partition(dsvm::concat(train, test), net, {n_train, n_test, false, seed});
}

inline dsvm::LabeledSet pooled_train(const std::vector<dsvm::NodeData>& nodes) {
  dsvm::LabeledSet pooled = nodes.front().train;
  for (std::size_t i = 1; i < nodes.size(); ++i) pooled = dsvm::concat(pooled, nodes[i].train);
  return pooled;
}

}  // namespace fixture
