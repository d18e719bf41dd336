#pragma once

#include "dsvm/linalg.hpp"

namespace dsvm {

// maximize  -1/2 l^T quad l + lin^T l   subject to  0 <= l <= upper.
// `quad` must be symmetric positive semidefinite.
struct BoxQP {
  Matrix quad;
  Vector lin;
  Vector upper;
};

struct BoxQPResult {
  Vector lambda;
  double objective = 0.0;
  int sweeps = 0;
  bool converged = false;
};

double box_qp_objective(const BoxQP& problem, const Vector& lambda);

// Cyclic exact coordinate ascent. Stops once the largest coordinate change in
// a sweep falls below `tol`; otherwise returns the last iterate with
// `converged == false`. `warm_start`, when given, is clamped into the box.
BoxQPResult solve_box_qp(const BoxQP& problem, double tol = 1e-8, int max_sweeps = 1000,
                         const Vector* warm_start = nullptr);

// maximize  gains^T phi  subject to  costs^T phi <= budget,  0 <= phi <= 1.
struct KnapsackLP {
  Vector gains;
  Vector costs;
  double budget = 0.0;
};

double knapsack_objective(const KnapsackLP& problem, const Vector& phi);

// Greedy fractional knapsack; exact for this LP.
Vector solve_flip_lp(const KnapsackLP& problem);

// Pairs a flip-fraction vector phi into the 2N indicator [1 - phi; phi].
Vector flips_to_theta(const Vector& phi);

// argmax  c^T d - a ||d||_1  subject to  ||d||_2^2 <= radius_sq.
Vector solve_poison_step(const Vector& direction, double l1_weight, double radius_sq);

double poison_objective(const Vector& direction, double l1_weight, const Vector& delta);

}  // namespace dsvm
