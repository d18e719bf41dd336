#pragma once

#include <vector>

#include "dsvm/data.hpp"
#include "dsvm/graph.hpp"
#include "dsvm/rng.hpp"
#include "dsvm/solvers.hpp"

namespace gen {

using dsvm::Matrix;
using dsvm::Rng;
using dsvm::Vector;

inline Vector uniform_vector(Rng& rng, Eigen::Index n, double lo, double hi) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

inline Vector normal_vector(Rng& rng, Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

// PSD quad of rank <= n built from a random factor, as the learner step
// produces; some caps are zero.
inline dsvm::BoxQP box_qp(Rng& rng, int n) {
  const int rank = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  Matrix a(n, rank);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < rank; ++j) a(i, j) = rng.normal();
  }
  dsvm::BoxQP qp;
  qp.quad = a * a.transpose() / rank;
  qp.lin = uniform_vector(rng, n, -1.0, 2.0);
  qp.upper = uniform_vector(rng, n, 0.0, 3.0);
  for (int i = 0; i < n; ++i) {
    if (rng.uniform() < 0.1) qp.upper[i] = 0.0;
  }
  return qp;
}

inline dsvm::KnapsackLP knapsack(Rng& rng, int n) {
  dsvm::KnapsackLP lp;
  lp.gains = uniform_vector(rng, n, -1.0, 3.0);
  lp.costs = uniform_vector(rng, n, 0.0, 2.0);
  for (int i = 0; i < n; ++i) {
    if (rng.uniform() < 0.1) lp.costs[i] = 0.0;
    if (rng.uniform() < 0.2) lp.costs[i] = 1.0;
  }
  lp.budget = rng.uniform(0.0, static_cast<double>(n));
  return lp;
}

inline dsvm::LabeledSet labeled_set(Rng& rng, int n, int p, double separation = 1.0) {
  dsvm::LabeledSet set;
  set.features.resize(n, p);
  set.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    const double y = (i % 2 == 0) ? 1.0 : -1.0;
    set.labels[i] = y;
    for (int j = 0; j < p; ++j) set.features(i, j) = rng.normal() + y * separation;
  }
  return set;
}

// Random spanning tree plus a few extra edges.
inline dsvm::Network connected_graph(Rng& rng, int n) {
  std::vector<dsvm::Edge> edges;
  std::vector<std::vector<bool>> has(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
  auto add = [&](int u, int v) {
    if (u == v || has[u][v]) return;
    has[u][v] = has[v][u] = true;
    edges.emplace_back(u, v);
  };
  for (int v = 1; v < n; ++v) add(v, static_cast<int>(rng.below(static_cast<std::uint64_t>(v))));
  const int extra = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  for (int k = 0; k < extra; ++k) {
    add(static_cast<int>(rng.below(static_cast<std::uint64_t>(n))),
        static_cast<int>(rng.below(static_cast<std::uint64_t>(n))));
  }
  return dsvm::Network(n, edges);
}

}  // namespace gen
