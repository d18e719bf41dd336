#include "dsvm/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "dsvm/error.hpp"

namespace dsvm {

double box_qp_objective(const BoxQP& problem, const Vector& lambda) {
  return -0.5 * lambda.dot(problem.quad * lambda) + problem.lin.dot(lambda);
}

BoxQPResult solve_box_qp(const BoxQP& problem, double tol, int max_sweeps, const Vector* warm_start) {
  const Eigen::Index n = problem.lin.size();
  if (problem.quad.rows() != n || problem.quad.cols() != n || problem.upper.size() != n) {
    throw Error(ErrorKind::dimension_mismatch, "box QP blocks have inconsistent sizes");
  }
  if (!problem.quad.allFinite() || !problem.lin.allFinite() || !problem.upper.allFinite()) {
    throw Error(ErrorKind::numeric, "non-finite entry in box QP");
  }
  if (!(tol > 0.0)) throw Error(ErrorKind::invalid_parameter, "tolerance must be positive");

  BoxQPResult result;
  result.lambda = Vector::Zero(n);
  if (warm_start != nullptr && warm_start->size() == n) {
    for (Eigen::Index i = 0; i < n; ++i) {
      result.lambda[i] = std::clamp((*warm_start)[i], 0.0, std::max(problem.upper[i], 0.0));
    }
  }
  Vector& lambda = result.lambda;

  // grad_i = lin_i - (quad * lambda)_i, accumulated in index order over the
  // nonzero coordinates only so that zero-capacity coordinates leave the
  // arithmetic untouched.
  Vector q_lambda = Vector::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (lambda[j] != 0.0) q_lambda += problem.quad.col(j) * lambda[j];
  }

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double cap = std::max(problem.upper[i], 0.0);
      const double curvature = problem.quad(i, i);
      const double grad = problem.lin[i] - q_lambda[i];
      double next = 0.0;
      if (cap == 0.0) {
        next = 0.0;
      } else if (curvature > 0.0) {
        next = std::clamp(lambda[i] + grad / curvature, 0.0, cap);
      } else {
        // Zero curvature: the 1-D problem is linear in this coordinate.
        next = grad > 0.0 ? cap : 0.0;
      }
      const double delta = next - lambda[i];
      if (delta != 0.0) {
        q_lambda += problem.quad.col(i) * delta;
        lambda[i] = next;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    result.sweeps = sweep + 1;
    if (max_change < tol) {
      result.converged = true;
      break;
    }
  }
  if (!lambda.allFinite()) throw Error(ErrorKind::numeric, "box QP diverged");
  result.objective = -0.5 * lambda.dot(q_lambda) + problem.lin.dot(lambda);
  return result;
}

double knapsack_objective(const KnapsackLP& problem, const Vector& phi) {
  return problem.gains.dot(phi);
}

Vector solve_flip_lp(const KnapsackLP& problem) {
  const Eigen::Index n = problem.gains.size();
  if (problem.costs.size() != n) {
    throw Error(ErrorKind::dimension_mismatch, "gains and costs differ in length");
  }
  if (problem.budget < 0.0 || (problem.costs.array() < 0.0).any()) {
    throw Error(ErrorKind::invalid_parameter, "knapsack costs and budget must be nonnegative");
  }
  Vector phi = Vector::Zero(n);
  std::vector<Eigen::Index> order;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(problem.gains[i] > 0.0)) continue;
    if (problem.costs[i] == 0.0) {
      phi[i] = 1.0;
    } else {
      order.push_back(i);
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return problem.gains[a] / problem.costs[a] > problem.gains[b] / problem.costs[b];
  });
  double remaining = problem.budget;
  for (Eigen::Index i : order) {
    if (remaining <= 0.0) break;
    if (problem.costs[i] <= remaining) {
      phi[i] = 1.0;
      remaining -= problem.costs[i];
    } else {
      phi[i] = remaining / problem.costs[i];
      remaining = 0.0;
    }
  }
  return phi;
}

Vector flips_to_theta(const Vector& phi) {
  Vector theta(2 * phi.size());
  theta.head(phi.size()) = Vector::Ones(phi.size()) - phi;
  theta.tail(phi.size()) = phi;
  return theta;
}

Vector solve_poison_step(const Vector& direction, double l1_weight, double radius_sq) {
  if (l1_weight < 0.0 || radius_sq < 0.0) {
    throw Error(ErrorKind::invalid_parameter, "poison step weights must be nonnegative");
  }
  Vector shrunk(direction.size());
  for (Eigen::Index i = 0; i < direction.size(); ++i) {
    const double magnitude = std::max(std::abs(direction[i]) - l1_weight, 0.0);
    shrunk[i] = direction[i] < 0.0 ? -magnitude : magnitude;
  }
  const double norm = shrunk.norm();
  if (norm == 0.0 || radius_sq == 0.0) return Vector::Zero(direction.size());
  return std::sqrt(radius_sq) * shrunk / norm;
}

double poison_objective(const Vector& direction, double l1_weight, const Vector& delta) {
  return direction.dot(delta) - l1_weight * delta.lpNorm<1>();
}

}  // namespace dsvm
