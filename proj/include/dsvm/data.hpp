#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "dsvm/graph.hpp"
#include "dsvm/linalg.hpp"

namespace dsvm {

// N x p features with labels in {+1, -1}.
struct LabeledSet {
  Matrix features;
  Vector labels;

  int size() const { return static_cast<int>(labels.size()); }
  int dim() const { return static_cast<int>(features.cols()); }

  // Throws when a label is not exactly +/-1, a feature is not finite, or the
  // row counts disagree.
  void validate() const;
};

LabeledSet concat(const LabeledSet& a, const LabeledSet& b);
LabeledSet select_rows(const LabeledSet& set, const std::vector<int>& rows);

struct NodeData {
  LabeledSet train;
  LabeledSet test;
  Matrix augmented;  // [x^T, 1] per training row
  Vector labels;     // diagonal of the label matrix

  int dim() const { return train.dim(); }
  int train_size() const { return train.size(); }
};

NodeData make_node_data(LabeledSet train, LabeledSet test);

// Training rows stacked twice; labels of the second copy negated.
struct ExpandedNodeData {
  Matrix x_hat;
  Vector y_hat;
};

ExpandedNodeData expand(const NodeData& node);

struct GaussianSpec {
  Vector mean_pos = Vector{{1.0, 1.0}};
  Vector mean_neg = Vector{{2.0, 2.0}};
  Matrix cov = Matrix::Identity(2, 2);
};

// Returns (train, test); each contains the requested count per class, class
// +1 rows first. Deterministic in `seed`.
std::pair<LabeledSet, LabeledSet> gen_gaussian(int n_per_class_train, int n_per_class_test,
                                               const GaussianSpec& spec, std::uint64_t seed);

struct CsvOptions {
  int label_column = -1;  // negative counts from the end
  double positive_value = 1.0;
  bool header = false;
};

LabeledSet load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

struct PartitionOptions {
  int n_train = 40;
  int n_test = 100;
  bool standardize = false;
  std::uint64_t seed = 0;
};

// Disjoint, class-stratified train/test subsets per node. Leftover samples are
// discarded. Standardization uses statistics of the pooled training rows only.
std::vector<NodeData> partition(const LabeledSet& data, const Network& net,
                                const PartitionOptions& options);

}  // namespace dsvm
