#include <doctest.h>

#include <numeric>

#include "dsvm/engine.hpp"
#include "dsvm/metrics.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "helpers.hpp"

using namespace dsvm;

TEST_SUITE("metrics") {

TEST_CASE("local risk") {
  CHECK(local_risk(Vector{{1.0, -1.0, 1.0}}, Vector{{1.0, 1.0, 1.0}}) == doctest::Approx(1.0 / 3.0));
  const Vector y{{1.0, -1.0}};
  CHECK(local_risk(y, y) == 0.0);
  CHECK(local_risk(y, -y) == 1.0);
  CHECK_THROWS_KIND(local_risk(Vector(), Vector()), ErrorKind::dimension_mismatch);
  CHECK_THROWS_KIND(local_risk(y, Vector{{1.0}}), ErrorKind::dimension_mismatch);
  CHECK_THROWS_KIND(local_risk(y, Vector{{1.0, 0.0}}), ErrorKind::invalid_parameter);
}

TEST_CASE("global risk") {
  const Vector y{{1.0, -1.0, 1.0}};
  const Vector p{{1.0, 1.0, 1.0}};
  std::vector<LabelPair> one = {{y, p}};
  CHECK(global_risk(one) == local_risk(y, p));
  std::vector<LabelPair> two = {{Vector{{1.0, 1.0}}, Vector{{1.0, 1.0}}}, {Vector{{1.0, 1.0}}, Vector{{-1.0, -1.0}}}};
  CHECK(global_risk(two) == 0.5);
  const std::vector<double> risks = {0.1, 0.3};
  const std::vector<int> sizes = {100, 300};
  CHECK(weighted_global_risk(risks, sizes) == doctest::Approx(0.25));
  CHECK_THROWS_KIND(global_risk(std::vector<LabelPair>{}), ErrorKind::invalid_parameter);
}

TEST_CASE("pooled and weighted global risk agree") {
  Rng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const int nodes = 1 + static_cast<int>(rng.below(8));
    std::vector<LabelPair> pairs;
    std::vector<double> risks;
    std::vector<int> sizes;
    for (int v = 0; v < nodes; ++v) {
      const int n = 1 + static_cast<int>(rng.below(300));
      Vector truth(n);
      Vector pred(n);
      for (int i = 0; i < n; ++i) {
        truth[i] = rng.uniform() < 0.5 ? 1.0 : -1.0;
        pred[i] = rng.uniform() < 0.5 ? 1.0 : -1.0;
      }
      risks.push_back(local_risk(truth, pred));
      sizes.push_back(n);
      pairs.push_back({truth, pred});
    }
    CHECK(std::abs(global_risk(pairs) - weighted_global_risk(risks, sizes)) <= 1e-12);
  }
}

TEST_CASE("equilibrium risk") {
  TrainResult res;
  for (int t = 0; t <= 20; ++t) {
    RoundRecord rec;
    rec.iteration = t;
    rec.global_risk = t < 10 ? 0.5 : (t % 2 ? 0.2 : 0.4);
    rec.node_risk = {rec.global_risk, rec.global_risk};
    rec.consensus_residual = 1.0 / (t + 1);
    res.trace.push_back(rec);
  }
  res.iterations = 20;
  RiskReport report = equilibrium_risk(res, 10);
  CHECK_FALSE(report.converged);
  CHECK(report.global == doctest::Approx(0.3));
  CHECK(report.per_node[1] == doctest::Approx(0.3));
  CHECK(report.window_variance == doctest::Approx(0.01));
  res.converged = true;
  report = equilibrium_risk(res, 10);
  CHECK(report.converged);
  CHECK(report.global == 0.4);
  CHECK(report.iteration == 20);
  CHECK(report.window_variance == 0.0);
}

TEST_CASE("population standard deviation") {
  const std::vector<double> v = {1.0, 3.0};
  const MeanStd ms = mean_std(v);
  CHECK(ms.mean == 2.0);
  CHECK(ms.std == 1.0);
  CHECK(mean_std(std::vector<double>{}).mean == 0.0);
}

TEST_CASE("risks follow a relabeling of the nodes") {
  const Network ring = build_regular(6, 2);
  const auto nodes = fixture::gaussian_nodes(ring, 20, 60, 4);
  const std::vector<int> perm = {3, 5, 0, 1, 4, 2};
  std::vector<Edge> edges;
  for (auto [u, v] : ring.edges()) edges.emplace_back(perm[u], perm[v]);
  const Network relabeled(6, edges);
  std::vector<NodeData> moved(6);
  for (int v = 0; v < 6; ++v) moved[perm[v]] = nodes[v];
  EngineConfig cfg;
  cfg.max_iters = 100;
  const TrainResult a = train(ring, nodes, cfg);
  const TrainResult b = train(relabeled, moved, cfg);
  CHECK(a.trace.back().global_risk == doctest::Approx(b.trace.back().global_risk).epsilon(1e-9));
  for (int v = 0; v < 6; ++v) {
    CHECK(a.trace.back().node_risk[v] == doctest::Approx(b.trace.back().node_risk[perm[v]]).epsilon(1e-9));
  }
}

}
