#pragma once

#include <limits>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dsvm/data.hpp"
#include "dsvm/graph.hpp"
#include "dsvm/linalg.hpp"

namespace dsvm {

struct EngineConfig {
  double c_l = 1.0;
  double eta = 1.0;
  int max_iters = 400;
  double consensus_tol = 1e-4;
  double qp_tol = 1e-8;
  int qp_max_sweeps = 1000;
  // Learner rounds per attacker step.
  int attacker_period = 1;
  // l-infinity tolerance on consecutive attacker decisions.
  double decision_tol = 1e-6;
  // Parallel workers for per-node computations; results do not depend on it.
  int workers = 1;

  void validate() const;
};

struct NodeState {
  Vector r;       // [w; b]
  Vector alpha;   // consensus multiplier
  Vector lambda;  // dual of the local hinge constraints
  // Last message received from each neighbor, aligned with
  // Network::neighbors(v), followed by virtual (injected) neighbors.
  std::vector<Vector> inbox;
};

// Per-node problem shape fixed before the run.
struct NodeSetup {
  double c_l = 1.0;
  int virtual_neighbors = 0;
  bool virtual_in_degree = true;
  // Train on the doubled (label-flip) rows instead of the plain rows.
  bool expanded = false;
};

// Per-round learner input that an attacker step may rewrite.
struct LearnerInput {
  Vector caps;     // dual upper bounds; empty means V * c_l everywhere
  Vector f_shift;  // added to f; empty means zero
};

struct AttackDecision {
  Vector decision;  // theta or delta, compared across rounds for stationarity
  double objective = 0.0;
};

// Hook points around one synchronous ADMM round. Every hook defaults to the
// identity; attack models override the ones they need. All hooks other than
// `configure` must be safe to call concurrently for distinct nodes.
class Adversary {
 public:
  virtual ~Adversary() = default;

  virtual std::string name() const = 0;

  virtual void configure(const Network& /*net*/, std::span<const NodeData> /*data*/,
                         const EngineConfig& /*cfg*/, std::vector<NodeSetup>& /*setup*/) {}

  virtual bool attacks(NodeId /*v*/) const { return false; }

  virtual AttackDecision attack(int /*iteration*/, NodeId /*v*/, const NodeState& /*state*/,
                                LearnerInput& /*input*/) const {
    return {};
  }

  // Corrupts a node's own freshly computed r before broadcast.
  virtual void perturb_state(int /*iteration*/, NodeId /*v*/, Vector& /*r*/) const {}

  // Tampers with the message travelling from -> to.
  virtual void filter_message(int /*iteration*/, NodeId /*from*/, NodeId /*to*/,
                              Vector& /*message*/) const {}

  // Writes messages from virtual neighbors of v; `slots` covers all virtual
  // inbox entries of v.
  virtual void virtual_messages(int /*iteration*/, NodeId /*v*/, const Vector& /*r*/,
                                std::span<Vector> /*slots*/) const {}

  // Evaluation-time (testing) corruption.
  virtual void corrupt_model(NodeId /*v*/, Vector& /*r*/) const {}
  virtual const LabeledSet* test_override(NodeId /*v*/) const { return nullptr; }
};

using AdversaryList = std::vector<std::shared_ptr<Adversary>>;

struct RoundRecord {
  int iteration = 0;
  double consensus_residual = 0.0;
  double change = 0.0;
  std::vector<double> node_risk;
  double global_risk = 0.0;
  double attacker_objective = 0.0;
  double decision_change = 0.0;
  int qp_unconverged = 0;
};

struct TrainResult {
  std::vector<NodeState> states;
  std::vector<RoundRecord> trace;  // trace[0] is the initial state
  std::map<NodeId, Vector> decisions;
  bool converged = false;
  int iterations = 0;
  int qp_unconverged = 0;
};

// Diagonal of U^{-1} for U = Pi + 2 eta deg I.
Vector u_inverse(double eta, int degree, int p);

// sign([x; 1]^T r) with sign(0) = +1.
double predict(const Vector& r, const Vector& x);
Vector predict_all(const Vector& r, const Matrix& features);

// Single-node hinge-loss SVM with an unregularized bias, solved through its
// dual (SMO with maximal violating pairs).
Vector centralized_svm(const LabeledSet& pooled, double c_l, double tol = 1e-6);

struct LocalStep {
  Vector r;
  Vector lambda;
  bool qp_converged = true;
};

// Dual QP and primal update for one node, reading neighbor values from
// `state.inbox`. Pure in its inputs.
LocalStep local_round(const NodeState& state, const NodeData& data, const NodeSetup& setup,
                      const LearnerInput& input, const EngineConfig& cfg, int node_count);

// alpha += eta/2 * sum over inbox of (r - r_u), using the node's current r.
void update_alpha(NodeState& state, double eta);

NodeState initial_state(const NodeData& data, const NodeSetup& setup, int real_degree);

// Runs synchronous consensus ADMM rounds. Each round: attacker steps on
// compromised nodes, learner steps on every node, broadcast, multiplier
// update. Stops when both the neighbor disagreement and the per-round change
// of r fall below consensus_tol (and attacker decisions are stationary), or
// after max_iters rounds.
TrainResult train(const Network& net, std::span<const NodeData> data, const EngineConfig& cfg,
                  const AdversaryList& adversaries = {});

std::vector<double> local_risks(std::span<const NodeState> states, std::span<const NodeData> data,
                                const AdversaryList& adversaries = {});

}  // namespace dsvm
