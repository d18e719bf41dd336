#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "dsvm/data.hpp"
#include "dsvm/graph.hpp"
#include "helpers.hpp"

using namespace dsvm;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path, std::ios::binary);
  out << text;
  return path;
}

// Labels +1 for even rows; feature 0 carries the row id.
LabeledSet indexed_set(int n) {
  LabeledSet set;
  set.features.resize(n, 2);
  set.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    set.features(i, 0) = i;
    set.features(i, 1) = (i % 7) * 0.5;
    set.labels[i] = i % 3 == 0 ? 1.0 : -1.0;
  }
  return set;
}

}  // namespace

TEST_SUITE("data") {

TEST_CASE("gaussian generator") {
  GaussianSpec spec;
  auto [train, test] = gen_gaussian(2000, 10, spec, 3);
  CHECK(train.size() == 4000);
  CHECK(test.size() == 20);
  CHECK(train.dim() == 2);
  CHECK(train.labels.head(2000).minCoeff() == 1.0);
  CHECK(train.labels.tail(2000).maxCoeff() == -1.0);
  const Vector pos_mean = train.features.topRows(2000).colwise().mean();
  const Vector neg_mean = train.features.bottomRows(2000).colwise().mean();
  CHECK(pos_mean[0] == doctest::Approx(1.0).epsilon(0.1));
  CHECK(neg_mean[1] == doctest::Approx(2.0).epsilon(0.1));

  auto [again, unused] = gen_gaussian(2000, 10, spec, 3);
  CHECK(again.features == train.features);
  auto [other, unused2] = gen_gaussian(2000, 10, spec, 4);
  CHECK(other.features != train.features);

  GaussianSpec bad;
  bad.cov = Matrix{{1.0, 2.0}, {2.0, 1.0}};
  CHECK_THROWS_KIND(gen_gaussian(5, 5, bad, 0), ErrorKind::invalid_parameter);
}

TEST_CASE("csv ingestion") {
  const auto path = write_temp("dsvm_test.csv", "1,2,1\n3,4,0\r\n\n5,6,1\n");
  const LabeledSet set = load_csv(path);
  CHECK(set.size() == 3);
  CHECK(set.dim() == 2);
  CHECK(set.labels[0] == 1.0);
  CHECK(set.labels[1] == -1.0);
  CHECK(set.features(2, 1) == 6.0);

  CsvOptions first;
  first.label_column = 0;
  first.positive_value = 3;
  const LabeledSet by_first = load_csv(path, first);
  CHECK(by_first.labels[1] == 1.0);
  CHECK(by_first.labels[0] == -1.0);
  CHECK(by_first.features(0, 0) == 2.0);

  const auto header = write_temp("dsvm_test_header.csv", "a,b,label\n1,2,1\n");
  CsvOptions with_header;
  with_header.header = true;
  CHECK(load_csv(header, with_header).size() == 1);

  const auto ragged = write_temp("dsvm_test_ragged.csv", "1,2,1\n3,1\n");
  try {
    load_csv(ragged);
    FAIL("ragged row accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ingestion);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  const auto bad = write_temp("dsvm_test_bad.csv", "1,2,1\n3,x,1\n");
  CHECK_THROWS_KIND(load_csv(bad), ErrorKind::ingestion);
  const auto empty = write_temp("dsvm_test_empty.csv", "");
  CHECK_THROWS_KIND(load_csv(empty), ErrorKind::ingestion);
  CHECK_THROWS_KIND(load_csv("/nonexistent/dsvm.csv"), ErrorKind::io);
}

TEST_CASE("partition is disjoint and stratified") {
  const LabeledSet pool = indexed_set(3000);
  const Network net = build_complete(6);
  const auto parts = partition(pool, net, {40, 100, false, 11});
  REQUIRE(parts.size() == 6);
  std::set<int> seen;
  for (const auto& node : parts) {
    CHECK(node.train.size() == 40);
    CHECK(node.test.size() == 100);
    CHECK(node.augmented.cols() == 3);
    CHECK(node.augmented.col(2).minCoeff() == 1.0);
    int positives = 0;
    for (int i = 0; i < node.train.size(); ++i) positives += node.train.labels[i] > 0;
    CHECK(positives >= 1);
    CHECK(positives <= 39);
    for (const LabeledSet* s : {&node.train, &node.test}) {
      for (int i = 0; i < s->size(); ++i) {
        const int id = static_cast<int>(s->features(i, 0));
        CHECK(seen.insert(id).second);
        CHECK(s->labels[i] == pool.labels[id]);
      }
    }
  }
  const auto again = partition(pool, net, {40, 100, false, 11});
  CHECK(again[3].train.features == parts[3].train.features);
}

TEST_CASE("standardization uses pooled training statistics") {
  const LabeledSet pool = indexed_set(600);
  const Network net = build_complete(3);
  const auto parts = partition(pool, net, {30, 20, true, 2});
  Matrix stacked(90, 2);
  for (int v = 0; v < 3; ++v) stacked.middleRows(v * 30, 30) = parts[v].train.features;
  const Vector mean = stacked.colwise().mean();
  CHECK(std::abs(mean[0]) < 1e-9);
  CHECK(std::abs(mean[1]) < 1e-9);
  const double var = (stacked.col(0).array() - mean[0]).square().mean();
  CHECK(var == doctest::Approx(1.0));
}

TEST_CASE("partition errors") {
  const Network net = build_complete(6);
  CHECK_THROWS_KIND(partition(indexed_set(100), net, {40, 100, false, 0}), ErrorKind::partition);
  CHECK_THROWS_KIND(partition(indexed_set(100), net, {1, 1, false, 0}), ErrorKind::partition);
  LabeledSet single = indexed_set(500);
  single.labels.setOnes();
  CHECK_THROWS_KIND(partition(single, net, {10, 10, false, 0}), ErrorKind::partition);
}

TEST_CASE("expanded rows negate the second copy") {
  const LabeledSet pool = indexed_set(200);
  const auto parts = partition(pool, build_complete(2), {10, 5, false, 0});
  const ExpandedNodeData e = expand(parts[0]);
  CHECK(e.x_hat.rows() == 20);
  CHECK(e.x_hat.topRows(10) == e.x_hat.bottomRows(10));
  CHECK(e.y_hat.head(10) == parts[0].labels);
  CHECK(e.y_hat.tail(10) == -parts[0].labels);
}

TEST_CASE("label validation") {
  LabeledSet set = indexed_set(4);
  set.labels[2] = 0.0;
  CHECK_THROWS_KIND(set.validate(), ErrorKind::invalid_parameter);
}

}
