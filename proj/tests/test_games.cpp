#include <doctest.h>

#include "dsvm/games.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "helpers.hpp"

using namespace dsvm;

namespace {

bool identical(const TrainResult& a, const TrainResult& b) {
  if (a.trace.size() != b.trace.size()) return false;
  for (std::size_t v = 0; v < a.states.size(); ++v) {
    if (a.states[v].r != b.states[v].r || a.states[v].alpha != b.states[v].alpha) return false;
  }
  for (std::size_t t = 0; t < a.trace.size(); ++t) {
    if (a.trace[t].node_risk != b.trace[t].node_risk) return false;
    if (a.trace[t].consensus_residual != b.trace[t].consensus_residual) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("games") {

TEST_CASE("label step without budget flips nothing") {
  const Network net = build_complete(3);
  const auto nodes = fixture::gaussian_nodes(net, 10, 5, 1);
  const ExpandedNodeData e = expand(nodes[0]);
  const Vector r{{-1.0, -1.0, 3.0}};
  const Vector theta = attacker_label_step(r, e, 3, 1, 1.0, {{0}, 0.0, 0.01});
  CHECK(theta.head(10).isOnes());
  CHECK(theta.tail(10).isZero());
}

TEST_CASE("label step is a best response") {
  Rng rng(8);
  const Network net = build_complete(4);
  const auto nodes = fixture::gaussian_nodes(net, 12, 5, 4);
  const ExpandedNodeData e = expand(nodes[1]);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector r = gen::normal_vector(rng, 3);
    const double budget = rng.uniform(0.0, 6.0);
    const double cost = rng.uniform(0.01, 2.0);
    const LabelAttackSpec spec{{1, 2}, budget, cost};
    const Vector theta = attacker_label_step(r, e, 4, 2, 1.0, spec);
    const Vector phi = theta.tail(12);
    CHECK(phi.sum() <= budget + 1e-9);
    CHECK((theta.head(12) + phi).isOnes());
    const double best = label_attack_objective(r, e, theta, 4, 2, 1.0, cost);
    for (int k = 0; k < 10; ++k) {
      Vector other = gen::uniform_vector(rng, 12, 0.0, 1.0);
      if (other.sum() > budget) other *= budget / other.sum();
      CHECK(label_attack_objective(r, e, flips_to_theta(other), 4, 2, 1.0, cost) <= best + 1e-9);
    }
  }
}

TEST_CASE("label learner input caps the doubled rows") {
  const Vector theta = flips_to_theta(Vector{{0.0, 1.0}});
  const LearnerInput in = label_learner_input(theta, 6, 0.5);
  CHECK(in.caps == Vector{{3.0, 0.0, 0.0, 3.0}});
  CHECK(in.f_shift.size() == 0);
}

TEST_CASE("data step follows the poisoning solver") {
  const Vector r{{2.0, -0.5, 7.0}};
  const DataAttackSpec spec{{0, 1}, 4.0, 0.1};
  const Vector delta = attacker_data_step(r, 2, 1.0, spec);
  CHECK(delta.size() == 2);
  CHECK(delta == solve_poison_step(Vector{{4.0, -1.0}}, 0.2, 4.0));
  const LearnerInput in = data_learner_input(delta, 2, 1.0);
  CHECK(in.f_shift.size() == 3);
  CHECK(in.f_shift[2] == 0.0);
  CHECK(in.f_shift.head(2) == 2.0 * delta);
  CHECK(data_learner_input(Vector::Zero(2), 2, 1.0).f_shift.size() == 0);
}

TEST_CASE("zero-strength games replay plain training bit for bit") {
  const Network net = build_complete(4);
  const auto nodes = fixture::gaussian_nodes(net, 20, 20, 6);
  EngineConfig cfg;
  cfg.max_iters = 80;
  const TrainResult plain = train(net, nodes, cfg);
  CHECK(identical(plain, run_game(net, nodes, cfg, LabelAttackSpec{{0, 2}, 0.0, 0.01}).result));
  CHECK(identical(plain, run_game(net, nodes, cfg, DataAttackSpec{{0, 2}, 0.0, 0.01}).result));
  CHECK(identical(plain, run_game(net, nodes, cfg, LabelAttackSpec{{}, 10.0, 0.01}).result));
}

TEST_CASE("label game raises the risk") {
  const Network net = build_complete(4);
  const auto nodes = fixture::gaussian_nodes(net, 30, 100, 9);
  EngineConfig cfg;
  cfg.max_iters = 150;
  const TrainResult plain = train(net, nodes, cfg);
  const GameState game = run_game(net, nodes, cfg, LabelAttackSpec{{0, 1, 2, 3}, 20.0, 0.01});
  CHECK(game.result.trace.back().global_risk > plain.trace.back().global_risk);
  CHECK(game.decisions.size() == 4);
  CHECK(game.oscillation >= 0.0);
}

TEST_CASE("attack spec validation") {
  const Network net = build_complete(3);
  const auto nodes = fixture::gaussian_nodes(net, 10, 5, 1);
  EngineConfig cfg;
  CHECK_THROWS_KIND(run_game(net, nodes, cfg, LabelAttackSpec{{5}, 1.0, 0.01}), ErrorKind::invalid_node);
  CHECK_THROWS_KIND(run_game(net, nodes, cfg, LabelAttackSpec{{0}, -1.0, 0.01}), ErrorKind::invalid_parameter);
  CHECK_THROWS_KIND(run_game(net, nodes, cfg, DataAttackSpec{{0}, -1.0, 0.01}), ErrorKind::invalid_parameter);
}

TEST_CASE("trailing oscillation") {
  TrainResult res;
  for (double g : {0.5, 0.1, 0.2, 0.3, 0.25}) {
    RoundRecord rec;
    rec.global_risk = g;
    res.trace.push_back(rec);
  }
  CHECK(trailing_oscillation(res, 3) == doctest::Approx(0.1));
  CHECK(trailing_oscillation(res, 10) == doctest::Approx(0.4));
}

}
