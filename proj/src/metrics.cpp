#include "dsvm/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "dsvm/engine.hpp"
#include "dsvm/error.hpp"

namespace dsvm {

namespace {

void check_labels(const Vector& labels) {
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1.0 && labels[i] != -1.0) {
      throw Error(ErrorKind::invalid_parameter, "labels must be +1 or -1");
    }
  }
}

}  // namespace

double local_risk(const Vector& truth, const Vector& predicted) {
  if (truth.size() == 0 || truth.size() != predicted.size()) {
    throw Error(ErrorKind::dimension_mismatch, "risk needs equal, nonempty label vectors");
  }
  check_labels(truth);
  check_labels(predicted);
  return 0.5 * (truth - predicted).cwiseAbs().sum() / static_cast<double>(truth.size());
}

double global_risk(std::span<const LabelPair> nodes) {
  double errors = 0.0;
  long count = 0;
  for (const auto& node : nodes) {
    if (node.truth.size() != node.predicted.size()) {
      throw Error(ErrorKind::dimension_mismatch, "truth and prediction lengths differ");
    }
    check_labels(node.truth);
    check_labels(node.predicted);
    errors += 0.5 * (node.truth - node.predicted).cwiseAbs().sum();
    count += node.truth.size();
  }
  if (count == 0) throw Error(ErrorKind::invalid_parameter, "global risk of an empty test set");
  return errors / static_cast<double>(count);
}

double weighted_global_risk(std::span<const double> risks, std::span<const int> sizes) {
  if (risks.size() != sizes.size()) {
    throw Error(ErrorKind::dimension_mismatch, "risk and size lists differ");
  }
  double errors = 0.0;
  long count = 0;
  for (std::size_t v = 0; v < risks.size(); ++v) {
    errors += risks[v] * sizes[v];
    count += sizes[v];
  }
  if (count == 0) throw Error(ErrorKind::invalid_parameter, "global risk of an empty test set");
  return errors / static_cast<double>(count);
}

RiskReport equilibrium_risk(const TrainResult& result, int window) {
  if (result.trace.empty()) throw Error(ErrorKind::invalid_parameter, "empty trace");
  RiskReport report;
  const RoundRecord& last = result.trace.back();
  report.iteration = last.iteration;
  report.consensus_residual = last.consensus_residual;
  report.converged = result.converged;
  if (result.converged || window <= 1) {
    report.per_node = last.node_risk;
    report.global = last.global_risk;
    return report;
  }
  const std::size_t span = std::min<std::size_t>(static_cast<std::size_t>(window), result.trace.size());
  const auto first = result.trace.end() - static_cast<std::ptrdiff_t>(span);
  report.per_node.assign(last.node_risk.size(), 0.0);
  std::vector<double> globals;
  for (auto it = first; it != result.trace.end(); ++it) {
    for (std::size_t v = 0; v < report.per_node.size(); ++v) report.per_node[v] += it->node_risk[v];
    globals.push_back(it->global_risk);
  }
  for (double& r : report.per_node) r /= static_cast<double>(span);
  const MeanStd g = mean_std(globals);
  report.global = g.mean;
  report.window_variance = g.std * g.std;
  return report;
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return out;
  for (double v : values) out.mean += v;
  out.mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.std = std::sqrt(ss / static_cast<double>(values.size()));
  return out;
}

}  // namespace dsvm
