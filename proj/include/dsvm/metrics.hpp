#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "dsvm/linalg.hpp"

namespace dsvm {

struct TrainResult;

// Misclassification fraction (1/N) sum 1/2 |y - y_hat|.
double local_risk(const Vector& truth, const Vector& predicted);

struct LabelPair {
  Vector truth;
  Vector predicted;
};

// Pooled misclassification fraction over all nodes' test samples.
double global_risk(std::span<const LabelPair> nodes);

// Test-size weighted mean of per-node risks.
double weighted_global_risk(std::span<const double> risks, std::span<const int> sizes);

struct RiskReport {
  std::vector<double> per_node;
  double global = 0.0;
  int iteration = 0;
  double consensus_residual = 0.0;
  bool converged = false;
  // Spread of the global risk over the averaging window (0 when converged).
  double window_variance = 0.0;
};

// Terminal risks when the run converged; otherwise the mean over the last
// `window` recorded rounds.
RiskReport equilibrium_risk(const TrainResult& result, int window = 10);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population (divisor n)
};

MeanStd mean_std(std::span<const double> values);

}  // namespace dsvm
