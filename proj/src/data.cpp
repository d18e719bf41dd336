#include "dsvm/data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "dsvm/error.hpp"
#include "dsvm/rng.hpp"

namespace dsvm {

void LabeledSet::validate() const {
  if (features.rows() != labels.size()) {
    throw Error(ErrorKind::dimension_mismatch, "feature rows and label count differ");
  }
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1.0 && labels[i] != -1.0) {
      throw Error(ErrorKind::invalid_parameter, "label at row " + std::to_string(i) +
                                                    " is not +1 or -1");
    }
  }
  if (!features.allFinite()) {
    throw Error(ErrorKind::invalid_parameter, "non-finite feature value");
  }
}

LabeledSet concat(const LabeledSet& a, const LabeledSet& b) {
  if (a.size() > 0 && b.size() > 0 && a.dim() != b.dim()) {
    throw Error(ErrorKind::dimension_mismatch, "cannot concatenate sets of different dimension");
  }
  const int dim = a.size() > 0 ? a.dim() : b.dim();
  LabeledSet out;
  out.features.resize(a.size() + b.size(), dim);
  out.labels.resize(a.size() + b.size());
  if (a.size() > 0) {
    out.features.topRows(a.size()) = a.features;
    out.labels.head(a.size()) = a.labels;
  }
  if (b.size() > 0) {
    out.features.bottomRows(b.size()) = b.features;
    out.labels.tail(b.size()) = b.labels;
  }
  return out;
}

LabeledSet select_rows(const LabeledSet& set, const std::vector<int>& rows) {
  LabeledSet out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), set.dim());
  out.labels.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) = set.features.row(rows[i]);
    out.labels[static_cast<Eigen::Index>(i)] = set.labels[rows[i]];
  }
  return out;
}

NodeData make_node_data(LabeledSet train, LabeledSet test) {
  train.validate();
  test.validate();
  if (train.size() == 0) throw Error(ErrorKind::partition, "empty training set");
  if (test.size() > 0 && test.dim() != train.dim()) {
    throw Error(ErrorKind::dimension_mismatch, "train and test dimensions differ");
  }
  NodeData node;
  node.augmented.resize(train.size(), train.dim() + 1);
  node.augmented.leftCols(train.dim()) = train.features;
  node.augmented.col(train.dim()).setOnes();
  node.labels = train.labels;
  node.train = std::move(train);
  node.test = std::move(test);
  return node;
}

ExpandedNodeData expand(const NodeData& node) {
  const auto n = node.augmented.rows();
  ExpandedNodeData out;
  out.x_hat.resize(2 * n, node.augmented.cols());
  out.x_hat.topRows(n) = node.augmented;
  out.x_hat.bottomRows(n) = node.augmented;
  out.y_hat.resize(2 * n);
  out.y_hat.head(n) = node.labels;
  out.y_hat.tail(n) = -node.labels;
  return out;
}

std::pair<LabeledSet, LabeledSet> gen_gaussian(int n_per_class_train, int n_per_class_test,
                                               const GaussianSpec& spec, std::uint64_t seed) {
  const auto p = spec.mean_pos.size();
  if (n_per_class_train < 1 || n_per_class_test < 1) {
    throw Error(ErrorKind::invalid_parameter, "sample counts must be at least 1");
  }
  if (spec.mean_neg.size() != p || spec.cov.rows() != p || spec.cov.cols() != p || p == 0) {
    throw Error(ErrorKind::dimension_mismatch, "mean and covariance dimensions disagree");
  }
  if (!spec.cov.isApprox(spec.cov.transpose())) {
    throw Error(ErrorKind::invalid_parameter, "covariance is not symmetric");
  }
  Eigen::LLT<Matrix> llt(spec.cov);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::invalid_parameter, "covariance is not positive definite");
  }
  const Matrix factor = llt.matrixL();

  Rng rng(mix_seed(seed, 0x6761757373ULL));
  auto draw = [&](int per_class) {
    LabeledSet set;
    set.features.resize(2 * per_class, p);
    set.labels.resize(2 * per_class);
    Vector z(p);
    for (int i = 0; i < 2 * per_class; ++i) {
      const bool positive = i < per_class;
      for (Eigen::Index j = 0; j < p; ++j) z[j] = rng.normal();
      set.features.row(i) = ((positive ? spec.mean_pos : spec.mean_neg) + factor * z).transpose();
      set.labels[i] = positive ? 1.0 : -1.0;
    }
    return set;
  };
  LabeledSet train = draw(n_per_class_train);
  LabeledSet test = draw(n_per_class_test);
  return {std::move(train), std::move(test)};
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& text, std::size_t line_no, std::size_t column) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  // Allow surrounding whitespace (and a trailing '\r' from CRLF files).
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used != text.size() || text.empty() || !std::isfinite(value)) {
    throw Error(ErrorKind::ingestion, "line " + std::to_string(line_no) + ", column " +
                                          std::to_string(column + 1) + ": cannot parse '" + text +
                                          "'");
  }
  return value;
}

}  // namespace

LabeledSet load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t arity = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && options.header) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = split_fields(line);
    if (arity == 0) {
      arity = fields.size();
      if (arity < 2) {
        throw Error(ErrorKind::ingestion, "line " + std::to_string(line_no) +
                                              ": need at least one feature and a label");
      }
    } else if (fields.size() != arity) {
      throw Error(ErrorKind::ingestion, "line " + std::to_string(line_no) + ": expected " +
                                            std::to_string(arity) + " fields, found " +
                                            std::to_string(fields.size()));
    }
    std::vector<double> values(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) values[c] = parse_number(fields[c], line_no, c);
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw Error(ErrorKind::ingestion, path.string() + " contains no data rows");

  const int cols = static_cast<int>(arity);
  const int label_col = options.label_column < 0 ? cols + options.label_column : options.label_column;
  if (label_col < 0 || label_col >= cols) {
    throw Error(ErrorKind::ingestion, "label column " + std::to_string(options.label_column) +
                                          " outside " + std::to_string(cols) + " columns");
  }

  LabeledSet set;
  set.features.resize(static_cast<Eigen::Index>(rows.size()), cols - 1);
  set.labels.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    int out_col = 0;
    for (int c = 0; c < cols; ++c) {
      if (c == label_col) {
        set.labels[r] = rows[i][c] == options.positive_value ? 1.0 : -1.0;
      } else {
        set.features(r, out_col++) = rows[i][c];
      }
    }
  }
  return set;
}

std::vector<NodeData> partition(const LabeledSet& data, const Network& net,
                                const PartitionOptions& options) {
  data.validate();
  const int nodes = net.size();
  if (options.n_train < 2 || options.n_test < 0) {
    throw Error(ErrorKind::partition, "each node needs at least 2 training samples");
  }
  const long needed = static_cast<long>(nodes) * (options.n_train + options.n_test);
  if (needed > data.size()) {
    throw Error(ErrorKind::partition, "need " + std::to_string(needed) + " samples for " +
                                          std::to_string(nodes) + " nodes, have " +
                                          std::to_string(data.size()));
  }

  std::vector<int> positives;
  std::vector<int> negatives;
  for (int i = 0; i < data.size(); ++i) (data.labels[i] > 0 ? positives : negatives).push_back(i);
  if (positives.empty() || negatives.empty()) {
    throw Error(ErrorKind::partition, "source data contains a single class");
  }
  Rng rng(mix_seed(options.seed, 0x7061727469ULL));
  rng.shuffle(positives.begin(), positives.end());
  rng.shuffle(negatives.begin(), negatives.end());

  const double pos_fraction = static_cast<double>(positives.size()) / data.size();
  auto positive_share = [&](int count, int min_each) {
    int k = static_cast<int>(std::lround(pos_fraction * count));
    return std::clamp(k, min_each, count - min_each);
  };
  const int train_pos = positive_share(options.n_train, 1);
  const int test_pos = positive_share(options.n_test, 0);

  std::size_t next_pos = 0;
  std::size_t next_neg = 0;
  auto take = [&](int n_pos, int n_neg) {
    if (next_pos + n_pos > positives.size() || next_neg + n_neg > negatives.size()) {
      throw Error(ErrorKind::partition, "not enough samples of one class for a stratified split");
    }
    std::vector<int> rows(positives.begin() + next_pos, positives.begin() + next_pos + n_pos);
    rows.insert(rows.end(), negatives.begin() + next_neg, negatives.begin() + next_neg + n_neg);
    next_pos += n_pos;
    next_neg += n_neg;
    rng.shuffle(rows.begin(), rows.end());
    return rows;
  };

  std::vector<LabeledSet> trains;
  std::vector<LabeledSet> tests;
  for (int v = 0; v < nodes; ++v) {
    trains.push_back(select_rows(data, take(train_pos, options.n_train - train_pos)));
  }
  for (int v = 0; v < nodes; ++v) {
    tests.push_back(select_rows(data, take(test_pos, options.n_test - test_pos)));
  }

  if (options.standardize) {
    const int dim = data.dim();
    Vector mean = Vector::Zero(dim);
    long count = 0;
    for (const auto& t : trains) {
      mean += t.features.colwise().sum().transpose();
      count += t.size();
    }
    mean /= static_cast<double>(count);
    Vector var = Vector::Zero(dim);
    for (const auto& t : trains) {
      var += (t.features.rowwise() - mean.transpose()).array().square().matrix().colwise().sum().transpose();
    }
    var /= static_cast<double>(count);
    Vector scale = var.cwiseSqrt();
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (!(scale[j] > 0.0)) scale[j] = 1.0;
    }
    auto apply = [&](LabeledSet& set) {
      if (set.size() == 0) return;
      set.features = ((set.features.rowwise() - mean.transpose()).array().rowwise() /
                      scale.transpose().array()).matrix();
    };
    for (auto& t : trains) apply(t);
    for (auto& t : tests) apply(t);
  }

  std::vector<NodeData> out;
  out.reserve(static_cast<std::size_t>(nodes));
  for (int v = 0; v < nodes; ++v) out.push_back(make_node_data(std::move(trains[v]), std::move(tests[v])));
  return out;
}

}  // namespace dsvm
