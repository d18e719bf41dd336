#include <doctest.h>

#include <cmath>

#include "dsvm/solvers.hpp"
#include "generators.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace dsvm;

namespace {

double projected_gradient_norm(const BoxQP& qp, const Vector& lambda) {
  const Vector grad = qp.lin - qp.quad * lambda;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < grad.size(); ++i) {
    double g = grad[i];
    if (lambda[i] <= 0.0) g = std::max(g, 0.0);
    if (lambda[i] >= qp.upper[i]) g = std::min(g, 0.0);
    worst = std::max(worst, std::abs(g));
  }
  return worst;
}

}  // namespace

TEST_SUITE("solvers") {

TEST_CASE("box QP small cases") {
  BoxQP qp;
  qp.quad = Matrix{{2.0, 0.0}, {0.0, 1.0}};
  qp.lin = Vector{{1.0, 5.0}};
  qp.upper = Vector{{10.0, 2.0}};
  const auto res = solve_box_qp(qp);
  CHECK(res.converged);
  CHECK(res.lambda[0] == doctest::Approx(0.5));
  CHECK(res.lambda[1] == doctest::Approx(2.0));

  qp.upper = Vector{{0.0, 0.0}};
  CHECK(solve_box_qp(qp).lambda.isZero());

  BoxQP flat;
  flat.quad = Matrix::Zero(2, 2);
  flat.lin = Vector{{1.0, -1.0}};
  flat.upper = Vector{{3.0, 3.0}};
  const auto edge = solve_box_qp(flat);
  CHECK(edge.lambda[0] == 3.0);
  CHECK(edge.lambda[1] == 0.0);

  BoxQP nan = qp;
  nan.lin[0] = std::nan("");
  CHECK_THROWS_KIND(solve_box_qp(nan), ErrorKind::numeric);
}

TEST_CASE("box QP agrees with projected gradient and satisfies KKT") {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(8));
    const BoxQP qp = gen::box_qp(rng, n);
    const auto res = solve_box_qp(qp, 1e-10, 100000);
    REQUIRE(res.converged);
    for (Eigen::Index i = 0; i < n; ++i) {
      CHECK(res.lambda[i] >= 0.0);
      CHECK(res.lambda[i] <= qp.upper[i]);
    }
    const double mine = box_qp_objective(qp, res.lambda);
    const double ref = box_qp_objective(qp, oracle::pg_box_qp(qp));
    CHECK(mine >= ref - 1e-6);
    CHECK(mine <= ref + 1e-6);
    const double scale = std::max(1.0, qp.quad.diagonal().maxCoeff());
    CHECK(projected_gradient_norm(qp, res.lambda) <= 10.0 * 1e-10 * scale * n);
  }
}

TEST_CASE("box QP objective never drops when given more sweeps") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const BoxQP qp = gen::box_qp(rng, 6);
    double previous = 0.0;
    for (int sweeps = 1; sweeps <= 20; ++sweeps) {
      const double value = solve_box_qp(qp, 1e-12, sweeps).objective;
      CHECK(value >= previous - 1e-12);
      previous = value;
    }
  }
}

TEST_CASE("warm start is clamped into the box") {
  BoxQP qp;
  qp.quad = Matrix::Identity(2, 2);
  qp.lin = Vector{{-1.0, -1.0}};
  qp.upper = Vector{{1.0, 1.0}};
  const Vector warm{{5.0, -3.0}};
  CHECK(solve_box_qp(qp, 1e-8, 1000, &warm).lambda.isZero());
}

TEST_CASE("flip LP examples") {
  KnapsackLP lp;
  lp.gains = Vector{{3.0, 2.0, 1.0}};
  lp.costs = Vector::Ones(3);
  lp.budget = 1.5;
  const Vector phi = solve_flip_lp(lp);
  CHECK(phi[0] == 1.0);
  CHECK(phi[1] == doctest::Approx(0.5));
  CHECK(phi[2] == 0.0);

  lp.budget = 0.0;
  CHECK(solve_flip_lp(lp).isZero());

  lp.budget = 10.0;
  lp.gains = Vector{{-1.0, -2.0, 0.0}};
  CHECK(solve_flip_lp(lp).isZero());

  lp.costs = Vector{{1.0, -1.0, 1.0}};
  CHECK_THROWS_KIND(solve_flip_lp(lp), ErrorKind::invalid_parameter);
}

TEST_CASE("flip LP matches vertex enumeration") {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(8));
    const KnapsackLP lp = gen::knapsack(rng, n);
    const Vector phi = solve_flip_lp(lp);
    CHECK(lp.costs.dot(phi) <= lp.budget + 1e-12);
    CHECK(phi.minCoeff() >= 0.0);
    CHECK(phi.maxCoeff() <= 1.0);
    CHECK(std::abs(knapsack_objective(lp, phi) - oracle::lp_vertex_oracle(lp)) <= 1e-9);
  }
}

TEST_CASE("vertex oracle refuses large instances") {
  Rng rng(1);
  CHECK_THROWS_KIND(oracle::lp_vertex_oracle(gen::knapsack(rng, 11)), ErrorKind::oracle_refused);
}

TEST_CASE("theta pairs flips with keeps") {
  const Vector theta = flips_to_theta(Vector{{0.0, 0.25, 1.0}});
  CHECK(theta.size() == 6);
  CHECK(theta.head(3) == Vector{{1.0, 0.75, 0.0}});
  CHECK(theta.tail(3) == Vector{{0.0, 0.25, 1.0}});
}

TEST_CASE("poison step examples") {
  const Vector c{{3.0, 0.0}};
  const Vector d = solve_poison_step(c, 1.0, 4.0);
  CHECK(d[0] == doctest::Approx(2.0));
  CHECK(d[1] == 0.0);
  CHECK(solve_poison_step(c, 0.0, 0.0).isZero());
  CHECK(solve_poison_step(c, 3.0, 4.0).isZero());
  const Vector neg = solve_poison_step(Vector{{-2.0, 1.0}}, 0.5, 1.0);
  CHECK(neg[0] < 0.0);
  CHECK(neg.norm() == doctest::Approx(1.0));
  CHECK_THROWS_KIND(solve_poison_step(c, -1.0, 1.0), ErrorKind::invalid_parameter);
}

TEST_CASE("poison step matches projected gradient on the split form") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = 1 + static_cast<int>(rng.below(6));
    const Vector c = gen::normal_vector(rng, p) * 2.0;
    const double a = rng.uniform(0.0, 1.5);
    const double radius_sq = rng.uniform(0.0, 9.0);
    const Vector d = solve_poison_step(c, a, radius_sq);
    CHECK(d.squaredNorm() <= radius_sq * (1.0 + 1e-12) + 1e-15);
    const double ref = poison_objective(c, a, oracle::pg_poison(c, a, radius_sq));
    CHECK(std::abs(poison_objective(c, a, d) - ref) <= 1e-6);
  }
}

}
